#pragma once

#include <vector>

#include "narx/tensor/tape.hpp"

namespace narx {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double clip_norm = 1.0;  // <= 0 disables clipping
};

/// Adam with bias correction and global-norm clipping over the trainable
/// parameters. Frozen parameters are never touched; a nonzero gradient on one
/// is a contract violation.
class Adam {
 public:
  Adam(std::vector<Parameter*> params, AdamConfig cfg = {});

  /// Applies one update from the accumulated gradients and returns the
  /// global gradient norm before clipping. Non-finite gradients raise a
  /// training error naming the step.
  double step();

  std::size_t steps() const noexcept { return t_; }
  const AdamConfig& config() const noexcept { return cfg_; }
  const Tensor& first_moment(std::size_t i) const { return m_[i]; }
  const Tensor& second_moment(std::size_t i) const { return v_[i]; }

 private:
  std::vector<Parameter*> params_;
  std::vector<Tensor> m_, v_;
  AdamConfig cfg_;
  std::size_t t_ = 0;
};

/// Global L2 norm of the gradients of non-frozen parameters.
double grad_norm(const std::vector<Parameter*>& params);

}  // namespace narx
