// The parallel kernels must reproduce the serial reference bit for bit.
#include <cstring>
#include <random>

#include "doctest.h"
#include "narx/tensor/kernels.hpp"
#include "support.hpp"

using namespace narx;
namespace ks = narx::kernels::serial;
namespace kp = narx::kernels::parallel;

namespace {

std::vector<Index> random_ids(std::size_t count, std::size_t bound, std::mt19937_64& rng) {
  std::vector<Index> ids(count);
  for (auto& i : ids) i = static_cast<Index>(rng() % bound);
  return ids;
}

bool same_bits(const std::vector<Real>& a, const std::vector<Real>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(Real)) == 0;
}

}  // namespace

TEST_CASE("matmul and transpose agree bitwise") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 1 + rng() % 90, k = 1 + rng() % 70, n = 1 + rng() % 80;
    auto a = testing::random_tensor({m, k}, rng);
    auto b = testing::random_tensor({k, n}, rng);
    std::vector<Real> c1(m * n), c2(m * n);
    ks::matmul(a.data().data(), b.data().data(), c1.data(), m, k, n);
    kp::matmul(a.data().data(), b.data().data(), c2.data(), m, k, n);
    CHECK(same_bits(c1, c2));
    std::vector<Real> t1(m * k), t2(m * k);
    ks::transpose(a.data().data(), t1.data(), m, k);
    kp::transpose(a.data().data(), t2.data(), m, k);
    CHECK(same_bits(t1, t2));
  }
}

TEST_CASE("gather, scatter and segment kernels agree bitwise") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t rows = 1 + rng() % 3000, n = 1 + rng() % 200, d = 1 + rng() % 40;
    auto x = testing::random_tensor({rows, d}, rng);
    auto seg = random_ids(rows, n, rng);

    std::vector<Real> g1(rows * d), g2(rows * d);
    auto src = testing::random_tensor({n, d}, rng);
    ks::gather_rows(src.data().data(), seg, g1.data(), d);
    kp::gather_rows(src.data().data(), seg, g2.data(), d);
    CHECK(same_bits(g1, g2));

    auto base = testing::random_tensor({n, d}, rng);
    std::vector<Real> s1(base.storage()), s2(base.storage());
    ks::scatter_add_rows(x.data().data(), seg, s1.data(), n, d);
    kp::scatter_add_rows(x.data().data(), seg, s2.data(), n, d);
    CHECK(same_bits(s1, s2));

    std::vector<Real> m1(n * d), m2(n * d);
    std::vector<Index> a1(n * d), a2(n * d);
    ks::segment_max(x.data().data(), seg, n, d, m1.data(), a1.data());
    kp::segment_max(x.data().data(), seg, n, d, m2.data(), a2.data());
    CHECK(same_bits(m1, m2));
    CHECK(a1 == a2);

    std::vector<Real> u1(n * d), u2(n * d);
    ks::segment_sum(x.data().data(), seg, n, d, u1.data());
    kp::segment_sum(x.data().data(), seg, n, d, u2.data());
    CHECK(same_bits(u1, u2));
  }
}

TEST_CASE("triplet kernels agree bitwise") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t graphs = 1 + rng() % 8, h = 1 + rng() % 32, od = 1 + rng() % 8;
    std::vector<Index> kb, ke;
    std::size_t nodes = 0;
    for (std::size_t g = 0; g < graphs; ++g) {
      const std::size_t n = 1 + rng() % 10, edges = rng() % 30;
      for (std::size_t e = 0; e < edges; ++e) {
        kb.push_back(static_cast<Index>(nodes));
        ke.push_back(static_cast<Index>(nodes + n));
      }
      nodes += n;
    }
    const std::size_t E = kb.size();
    auto u = testing::random_tensor({E, h}, rng);
    auto c = testing::random_tensor({nodes, h}, rng);
    auto w = testing::random_tensor({h, od}, rng);
    auto b = testing::random_tensor({od}, rng);
    std::vector<Real> o1(E * od), o2(E * od);
    std::vector<Index> a1(E * od), a2(E * od);
    ks::triplet_max_forward(u.data().data(), c.data().data(), w.data().data(), b.data().data(),
                            kb, ke, h, od, o1.data(), a1.data());
    kp::triplet_max_forward(u.data().data(), c.data().data(), w.data().data(), b.data().data(),
                            kb, ke, h, od, o2.data(), a2.data());
    CHECK(same_bits(o1, o2));
    CHECK(a1 == a2);

    auto g = testing::random_tensor({E, od}, rng);
    auto du0 = testing::random_tensor({E, h}, rng);
    auto dc0 = testing::random_tensor({nodes, h}, rng);
    auto dw0 = testing::random_tensor({h, od}, rng);
    auto db0 = testing::random_tensor({od}, rng);
    std::vector<Real> du1(du0.storage()), du2(du0.storage()), dc1(dc0.storage()),
        dc2(dc0.storage()), dw1(dw0.storage()), dw2(dw0.storage()), db1(db0.storage()),
        db2(db0.storage());
    ks::triplet_max_backward(u.data().data(), c.data().data(), w.data().data(), nodes, a1,
                             g.data().data(), h, od, du1.data(), dc1.data(), dw1.data(),
                             db1.data());
    kp::triplet_max_backward(u.data().data(), c.data().data(), w.data().data(), nodes, a1,
                             g.data().data(), h, od, du2.data(), dc2.data(), dw2.data(),
                             db2.data());
    CHECK(same_bits(du1, du2));
    CHECK(same_bits(dc1, dc2));
    CHECK(same_bits(dw1, dw2));
    CHECK(same_bits(db1, db2));
  }
}
