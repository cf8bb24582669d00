#include <numeric>
#include <random>

#include "doctest.h"
#include "narx/core/error.hpp"
#include "support.hpp"

using namespace narx;

namespace {

Tensor naive_matmul(const Tensor& a, const Tensor& b) {
  const std::size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  Tensor c({m, n});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0;
      for (std::size_t p = 0; p < k; ++p) s += double(a.at(i, p)) * double(b.at(p, j));
      c.at(i, j) = static_cast<Real>(s);
    }
  return c;
}

}  // namespace

TEST_CASE("matmul") {
  Tape t;
  SUBCASE("identity") {
    auto c = matmul(t.constant(Tensor::matrix(2, 2, {1, 0, 0, 1})),
                    t.constant(Tensor::matrix(2, 2, {3, 4, 5, 6})));
    CHECK(c.value() == Tensor::matrix(2, 2, {3, 4, 5, 6}));
  }
  SUBCASE("dot product") {
    auto c = matmul(t.constant(Tensor::matrix(1, 2, {1, 2})),
                    t.constant(Tensor::matrix(2, 1, {3, 4})));
    CHECK(c.value() == Tensor::matrix(1, 1, {11}));
  }
  SUBCASE("random case matches triple loop") {
    std::mt19937_64 rng(7);
    auto a = testing::random_tensor({3, 4}, rng);
    auto b = testing::random_tensor({4, 2}, rng);
    auto c = matmul(t.constant(a), t.constant(b)).value();
    auto ref = naive_matmul(a, b);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i] == doctest::Approx(ref[i]).epsilon(1e-6));
  }
  SUBCASE("shape mismatch") {
    auto a = t.constant(Tensor({2, 3}));
    auto b = t.constant(Tensor({2, 3}));
    CHECK_THROWS_AS(matmul(a, b), Error);
    try {
      matmul(a, b);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Dimension);
    }
  }
}

TEST_CASE("unary ops") {
  Tape t;
  CHECK(relu(t.constant(Tensor::vector({-1, 0, 2}))).value() == Tensor::vector({0, 0, 2}));
  CHECK(sigmoid(t.constant(Tensor::vector({0}))).value()[0] == doctest::Approx(0.5));
  CHECK(neg(t.constant(Tensor::vector({1, -2}))).value() == Tensor::vector({-1, 2}));
  auto x = t.leaf(Tensor::vector({0}));
  t.backward(sum(sigmoid(x)));
  CHECK(t.grad(x.id())[0] == doctest::Approx(0.25));

  try {
    log(t.constant(Tensor::vector({1, 0})));
    FAIL("expected domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
}

TEST_CASE("binary ops and broadcasting") {
  Tape t;
  CHECK(add(t.constant(Tensor::vector({1, 2})), t.constant(Tensor::vector({3, 4}))).value() ==
        Tensor::vector({4, 6}));
  auto a = t.leaf(Tensor::vector({1, 5}));
  auto b = t.leaf(Tensor::vector({2, 3}));
  auto m = maximum(a, b);
  CHECK(m.value() == Tensor::vector({2, 5}));
  t.backward(sum(m));
  CHECK(t.grad(a.id()) == Tensor::vector({0, 1}));
  CHECK(t.grad(b.id()) == Tensor::vector({1, 0}));

  SUBCASE("ties route to first operand") {
    Tape t2;
    auto p = t2.leaf(Tensor::vector({2}));
    auto q = t2.leaf(Tensor::vector({2}));
    t2.backward(sum(maximum(p, q)));
    CHECK(t2.grad(p.id())[0] == 1);
    CHECK(t2.grad(q.id())[0] == 0);
  }
  SUBCASE("bias broadcast over rows") {
    Tape t2;
    auto x = t2.leaf(Tensor::matrix(2, 2, {1, 2, 3, 4}));
    auto bias = t2.leaf(Tensor::vector({10, 20}));
    auto y = add(x, bias);
    CHECK(y.value() == Tensor::matrix(2, 2, {11, 22, 13, 24}));
    t2.backward(sum(y));
    CHECK(t2.grad(bias.id()) == Tensor::vector({2, 2}));
  }
  SUBCASE("non-broadcastable") {
    CHECK_THROWS_AS(add(t.constant(Tensor({2, 3})), t.constant(Tensor({3, 2}))), Error);
  }
}

TEST_CASE("segment_reduce") {
  Tape t;
  auto values = Tensor::matrix(3, 1, {1, 3, 2});
  auto seg = make_index({0, 0, 1});
  CHECK(segment_reduce(ReduceOp::Max, t.constant(values), seg, 2).value() ==
        Tensor::matrix(2, 1, {3, 2}));
  CHECK(segment_reduce(ReduceOp::Sum, t.constant(values), seg, 2).value() ==
        Tensor::matrix(2, 1, {4, 2}));
  CHECK(segment_reduce(ReduceOp::Mean, t.constant(values), seg, 2).value() ==
        Tensor::matrix(2, 1, {2, 2}));

  SUBCASE("empty segments yield zero") {
    auto out = segment_reduce(ReduceOp::Max, t.constant(Tensor::matrix(1, 1, {-5})),
                              make_index({1}), 3).value();
    CHECK(out == Tensor::matrix(3, 1, {0, -5, 0}));
  }
  SUBCASE("out-of-range segment id") {
    try {
      segment_reduce(ReduceOp::Sum, t.constant(values), make_index({0, 2, 1}), 2);
      FAIL("expected index error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Index);
    }
  }
  SUBCASE("max backward goes to the first argmax") {
    Tape t2;
    auto v = t2.leaf(Tensor::matrix(3, 1, {4, 4, 1}));
    t2.backward(sum(segment_reduce(ReduceOp::Max, v, make_index({0, 0, 0}), 1)));
    CHECK(t2.grad(v.id()) == Tensor::matrix(3, 1, {1, 0, 0}));
  }
}

TEST_CASE("segment_reduce is invariant to row permutations") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rows = 1 + rng() % 12, n = 1 + rng() % 4, d = 1 + rng() % 3;
    auto values = testing::random_tensor({rows, d}, rng);
    std::vector<Index> seg(rows);
    for (auto& s : seg) s = static_cast<Index>(rng() % n);
    std::vector<std::size_t> perm(rows);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Tensor pv({rows, d});
    std::vector<Index> ps(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t j = 0; j < d; ++j) pv.at(r, j) = values.at(perm[r], j);
      ps[r] = seg[perm[r]];
    }
    Tape t;
    for (auto op : {ReduceOp::Max, ReduceOp::Sum, ReduceOp::Mean}) {
      auto a = segment_reduce(op, t.constant(values), make_index(seg), n).value();
      auto b = segment_reduce(op, t.constant(pv), make_index(ps), n).value();
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (op == ReduceOp::Max)
          CHECK(a[i] == b[i]);
        else
          CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("backward") {
  SUBCASE("x*x at 3") {
    Tape t;
    auto x = t.leaf(Tensor::scalar(3));
    t.backward(mul(x, x));
    CHECK(t.grad(x.id())[0] == 6);
  }
  SUBCASE("sigmoid(2x) at 0") {
    Tape t;
    auto x = t.leaf(Tensor::scalar(0));
    t.backward(sigmoid(scale(x, 2)));
    CHECK(t.grad(x.id())[0] == doctest::Approx(0.5));
  }
  SUBCASE("shared subexpressions accumulate") {
    Tape t;
    auto x = t.leaf(Tensor::scalar(1.5));
    t.backward(add(x, x));
    CHECK(t.grad(x.id())[0] == 2);
  }
  SUBCASE("non-scalar loss") {
    Tape t;
    auto x = t.leaf(Tensor::vector({1, 2}));
    try {
      t.backward(x);
      FAIL("expected contract error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Contract);
    }
  }
  SUBCASE("parameters accumulate and frozen ones get nothing") {
    Parameter w("w", Tensor::vector({2}));
    Parameter f("f", Tensor::vector({3}));
    f.frozen = true;
    for (int rep = 0; rep < 2; ++rep) {
      Tape t;
      t.backward(sum(mul(t.param(w), t.param(f))));
    }
    CHECK(w.grad[0] == 6);
    CHECK(f.grad[0] == 0);
  }
}

TEST_CASE("gather, concat, logsumexp, bce forward values") {
  Tape t;
  auto x = t.constant(Tensor::matrix(3, 2, {1, 2, 3, 4, 5, 6}));
  CHECK(gather_rows(x, make_index({2, 0, 2})).value() ==
        Tensor::matrix(3, 2, {5, 6, 1, 2, 5, 6}));
  CHECK(concat_cols(x, x).value().shape() == Shape{3, 4});
  auto lse = segment_logsumexp(t.constant(Tensor::matrix(2, 1, {0, 0})), make_index({0, 0}), 1);
  CHECK(lse.value()[0] == doctest::Approx(std::log(2.0)));
  auto bce = bce_with_logits(t.constant(Tensor::vector({0})), Tensor::vector({1}));
  CHECK(bce.value()[0] == doctest::Approx(0.693147).epsilon(1e-6));
}

TEST_CASE("triplet_max forward matches direct enumeration") {
  std::mt19937_64 rng(3);
  const std::size_t E = 5, N = 4, h = 3, d = 2;
  auto u = testing::random_tensor({E, h}, rng);
  auto c = testing::random_tensor({N, h}, rng);
  auto w = testing::random_tensor({h, d}, rng);
  auto b = testing::random_tensor({d}, rng);
  std::vector<Index> kb = {0, 0, 1, 2, 0}, ke = {4, 2, 3, 4, 1};
  Tape t;
  auto out = triplet_max(t.constant(u), t.constant(c), t.constant(w), t.constant(b),
                         make_index(kb), make_index(ke)).value();
  for (std::size_t e = 0; e < E; ++e)
    for (std::size_t q = 0; q < d; ++q) {
      double best = -1e300;
      for (Index k = kb[e]; k < ke[e]; ++k) {
        double s = b[q];
        for (std::size_t j = 0; j < h; ++j)
          s += std::max(0.0, double(u.at(e, j)) + double(c.at(static_cast<std::size_t>(k), j))) *
               double(w.at(j, q));
        best = std::max(best, s);
      }
      CHECK(out.at(e, q) == doctest::Approx(best).epsilon(1e-5));
    }
}
