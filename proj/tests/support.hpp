#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "narx/tensor/ops.hpp"

namespace narx::testing {

inline Tensor random_tensor(Shape shape, std::mt19937_64& rng, double lo = -2.0,
                            double hi = 2.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Tensor t(std::move(shape));
  for (Real& v : t.storage()) v = static_cast<Real>(dist(rng));
  return t;
}

/// Central finite differences of a scalar function of one tensor.
inline Tensor numeric_grad(const std::function<double(const Tensor&)>& f, Tensor x,
                           double eps) {
  Tensor g(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Real orig = x[i];
    x[i] = static_cast<Real>(orig + eps);
    const double up = f(x);
    x[i] = static_cast<Real>(orig - eps);
    const double down = f(x);
    x[i] = orig;
    g[i] = static_cast<Real>((up - down) / (2 * eps));
  }
  return g;
}

/// max_i |a_i - n_i| / max(|a_i|, |n_i|), skipping entries where both are
/// below `floor` in magnitude.
inline double max_rel_error(const Tensor& analytic, const Tensor& numeric,
                            double floor = 1e-8) {
  double worst = 0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double a = analytic[i], n = numeric[i];
    const double scale = std::max(std::abs(a), std::abs(n));
    if (scale < floor) continue;
    worst = std::max(worst, std::abs(a - n) / scale);
  }
  return worst;
}

}  // namespace narx::testing
