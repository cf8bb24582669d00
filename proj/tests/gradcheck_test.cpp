// Finite-difference gradient checks. Built against the f64 variant of the
// library so central differences at eps = 1e-3 are not swamped by rounding.
#include <random>

#include "doctest.h"
#include "pipeline_gradcheck.hpp"
#include "support.hpp"

using namespace narx;
using testing::max_rel_error;
using testing::numeric_grad;
using testing::random_tensor;

static_assert(sizeof(Real) == 8, "gradcheck_test must link the f64 library");

namespace {

constexpr double kEps = 1e-3;
constexpr double kTol = 1e-4;

// Checks d sum(w * f(x)) / dx for a fixed random weighting w.
void check_unary_fn(const std::function<Var(Var)>& f, Tensor x, std::mt19937_64& rng) {
  Shape out_shape;
  {
    Tape probe;
    out_shape = f(probe.constant(x)).shape();
  }
  auto weights = random_tensor(out_shape, rng);
  auto loss_of = [&](const Tensor& v) {
    Tape t;
    return double(sum(mul(f(t.constant(v)), t.constant(weights))).value()[0]);
  };
  Tape t;
  auto leaf = t.leaf(x);
  t.backward(sum(mul(f(leaf), t.constant(weights))));
  auto num = numeric_grad(loss_of, x, kEps);
  CHECK(max_rel_error(t.grad(leaf.id()), num) < kTol);
}

}  // namespace

TEST_CASE("elementwise ops match finite differences") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = random_tensor({3, 4}, rng);
    auto y = random_tensor({3, 4}, rng);
    auto row = random_tensor({4}, rng);
    check_unary_fn([](Var v) { return relu(v); }, x, rng);
    check_unary_fn([](Var v) { return sigmoid(v); }, x, rng);
    check_unary_fn([](Var v) { return neg(v); }, x, rng);
    check_unary_fn([](Var v) { return exp(v); }, x, rng);
    check_unary_fn([](Var v) { return log(add(mul(v, v), v.tape().constant(Tensor::scalar(0.5)))); }, x, rng);
    check_unary_fn([&](Var v) { return add(v, v.tape().constant(y)); }, x, rng);
    check_unary_fn([&](Var v) { return sub(v.tape().constant(y), v); }, x, rng);
    check_unary_fn([&](Var v) { return mul(v, v.tape().constant(y)); }, x, rng);
    check_unary_fn([&](Var v) { return maximum(v, v.tape().constant(y)); }, x, rng);
    check_unary_fn([&](Var v) { return add(v.tape().constant(x), v); }, row, rng);
    check_unary_fn([&](Var v) { return mul(v.tape().constant(x), v); }, row, rng);
    check_unary_fn([](Var v) { return scale(v, 1.7); }, x, rng);
    check_unary_fn([](Var v) { return sum_cols(v); }, x, rng);
    check_unary_fn([](Var v) { return mean(v); }, x, rng);
  }
}

TEST_CASE("structural ops match finite differences") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = random_tensor({5, 3}, rng);
    auto b = random_tensor({3, 2}, rng);
    auto seg = make_index({0, 2, 0, 1, 2});
    check_unary_fn([&](Var v) { return matmul(v, v.tape().constant(b)); }, x, rng);
    check_unary_fn([&](Var v) { return matmul(v.tape().constant(x), v); }, b, rng);
    check_unary_fn([&](Var v) { return segment_reduce(ReduceOp::Max, v, seg, 4); }, x, rng);
    check_unary_fn([&](Var v) { return segment_reduce(ReduceOp::Sum, v, seg, 4); }, x, rng);
    check_unary_fn([&](Var v) { return segment_reduce(ReduceOp::Mean, v, seg, 4); }, x, rng);
    check_unary_fn([&](Var v) { return gather_rows(v, make_index({4, 0, 0, 2})); }, x, rng);
    check_unary_fn([&](Var v) { return concat_cols(v, relu(v)); }, x, rng);
    check_unary_fn([&](Var v) { return reshape(v, {15, 1}); }, x, rng);
    auto col = random_tensor({5, 1}, rng);
    check_unary_fn([&](Var v) { return segment_logsumexp(v, seg, 3); }, col, rng);
    auto targets = Tensor::matrix(5, 1, {1, 0, 0, 1, 1});
    check_unary_fn([&](Var v) { return bce_with_logits(v, targets); }, col, rng);
  }
}

TEST_CASE("triplet_max matches finite differences in every input") {
  std::mt19937_64 rng(8);
  const std::size_t E = 4, N = 5, h = 3, d = 2;
  auto kb = make_index({0, 0, 2, 1});
  auto ke = make_index({5, 3, 5, 4});
  for (int trial = 0; trial < 10; ++trial) {
    auto u = random_tensor({E, h}, rng);
    auto c = random_tensor({N, h}, rng);
    auto w = random_tensor({h, d}, rng);
    auto b = random_tensor({d}, rng);
    auto op = [&](Var uu, Var cc, Var ww, Var bb) { return triplet_max(uu, cc, ww, bb, kb, ke); };
    check_unary_fn([&](Var v) { Tape& t = v.tape(); return op(v, t.constant(c), t.constant(w), t.constant(b)); }, u, rng);
    check_unary_fn([&](Var v) { Tape& t = v.tape(); return op(t.constant(u), v, t.constant(w), t.constant(b)); }, c, rng);
    check_unary_fn([&](Var v) { Tape& t = v.tape(); return op(t.constant(u), t.constant(c), v, t.constant(b)); }, w, rng);
    check_unary_fn([&](Var v) { Tape& t = v.tape(); return op(t.constant(u), t.constant(c), t.constant(w), v); }, b, rng);
  }
}

TEST_CASE("two-layer MLP gradients match finite differences") {
  std::mt19937_64 rng(9);
  auto x = random_tensor({4, 3}, rng);
  auto w1 = random_tensor({3, 5}, rng);
  auto b1 = random_tensor({5}, rng);
  auto w2 = random_tensor({5, 1}, rng);
  auto forward = [&](Tape& t, Var vw1) {
    auto hdn = relu(add(matmul(t.constant(x), vw1), t.constant(b1)));
    return mean(sigmoid(matmul(hdn, t.constant(w2))));
  };
  Tape t;
  auto leaf = t.leaf(w1);
  t.backward(forward(t, leaf));
  auto num = numeric_grad(
      [&](const Tensor& v) {
        Tape t2;
        return double(forward(t2, t2.constant(v)).value()[0]);
      },
      w1, kEps);
  CHECK(max_rel_error(t.grad(leaf.id()), num) < kTol);
}

TEST_CASE("full model pipeline matches finite differences on 5-node instances") {
  using clrs::AlgoName;
  for (auto algo : {AlgoName::BFS, AlgoName::BellmanFord, AlgoName::Dijkstra, AlgoName::MSTKruskal,
                    AlgoName::MatrixChainOrder, AlgoName::SegmentsIntersect, AlgoName::NaiveStringMatcher}) {
    CAPTURE(clrs::to_string(algo));
    const auto rep = testing::pipeline_grad_check(algo, 1, kEps);
    CAPTURE(rep.worst_param);
    CAPTURE(rep.kinks);
    CHECK(rep.checked > rep.kinks);
    CHECK(rep.max_rel_error < kTol);
  }
}
