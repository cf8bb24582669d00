#include "narx/training/adam.hpp"

#include <cmath>

#include "narx/core/error.hpp"

namespace narx {

Adam::Adam(std::vector<Parameter*> params, AdamConfig cfg) : params_(std::move(params)), cfg_(cfg) {
  require(cfg_.lr > 0 && cfg_.beta1 >= 0 && cfg_.beta1 < 1 && cfg_.beta2 >= 0 && cfg_.beta2 < 1 && cfg_.eps > 0,
          ErrorKind::Config, "invalid Adam hyperparameters");
  for (auto* p : params_) {
    m_.emplace_back(p->value.shape());
    v_.emplace_back(p->value.shape());
  }
}

double grad_norm(const std::vector<Parameter*>& params) {
  double sq = 0;
  for (const auto* p : params) {
    if (p->frozen || p->grad.empty()) continue;
    for (Real g : p->grad.storage()) sq += static_cast<double>(g) * static_cast<double>(g);
  }
  return std::sqrt(sq);
}

double Adam::step() {
  ++t_;
  for (auto* p : params_) {
    if (p->grad.empty()) continue;
    for (Real g : p->grad.storage()) {
      if (!std::isfinite(g))
        fail(ErrorKind::Training, "non-finite gradient in '" + p->name + "' at step " + std::to_string(t_));
      if (p->frozen && g != 0) fail(ErrorKind::Contract, "gradient reached frozen parameter '" + p->name + "'");
    }
  }
  const double norm = grad_norm(params_);
  const double clip = cfg_.clip_norm > 0 && norm > cfg_.clip_norm ? cfg_.clip_norm / norm : 1.0;
  const double bc1 = 1 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Parameter& p = *params_[i];
    if (p.frozen || p.grad.empty()) continue;
    auto& w = p.value.storage();
    const auto& g = p.grad.storage();
    auto& m = m_[i].storage();
    auto& v = v_[i].storage();
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double gk = static_cast<double>(g[k]) * clip;
      const double mk = cfg_.beta1 * static_cast<double>(m[k]) + (1 - cfg_.beta1) * gk;
      const double vk = cfg_.beta2 * static_cast<double>(v[k]) + (1 - cfg_.beta2) * gk * gk;
      m[k] = static_cast<Real>(mk);
      v[k] = static_cast<Real>(vk);
      w[k] = static_cast<Real>(static_cast<double>(w[k]) - cfg_.lr * (mk / bc1) / (std::sqrt(vk / bc2) + cfg_.eps));
    }
  }
  return norm;
}

}  // namespace narx
