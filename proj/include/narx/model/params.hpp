#pragma once

#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "narx/tensor/ops.hpp"

namespace narx {

using Rng = std::mt19937_64;

/// Owns named parameters with stable addresses, in insertion order.
class ParamSet {
 public:
  /// Duplicate names raise a contract error.
  Parameter& add(std::string name, Tensor value);
  Parameter* find(std::string_view name);
  const Parameter* find(std::string_view name) const;
  Parameter& at(std::string_view name);

  std::vector<Parameter*> all();
  std::vector<const Parameter*> all() const;
  std::size_t size() const noexcept { return params_.size(); }

  void zero_grad();

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
};

/// Uniform in +-1/sqrt(fan_in).
Tensor uniform_init(Shape shape, std::size_t fan_in, Rng& rng);

/// y = x W + b with W [in, out].
struct Linear {
  Parameter* w = nullptr;
  Parameter* b = nullptr;  // null when bias-free

  /// `fan_in` overrides the init scale (0 means `in`).
  static Linear create(ParamSet& ps, const std::string& name, std::size_t in, std::size_t out, Rng& rng,
                       bool bias = true, std::size_t fan_in = 0);
  /// Rebinds to parameters already present in `ps`.
  static Linear bind(ParamSet& ps, const std::string& name, bool bias = true);

  std::size_t in_dim() const { return w->value.shape()[0]; }
  std::size_t out_dim() const { return w->value.shape()[1]; }
  Var operator()(Tape& tape, Var x) const;
  void collect(std::vector<Parameter*>& out) const;
};

/// Two linear layers with a relu between them.
struct Mlp {
  Linear first;
  Linear second;

  static Mlp create(ParamSet& ps, const std::string& name, std::size_t in, std::size_t hidden,
                    std::size_t out, Rng& rng);
  Var operator()(Tape& tape, Var x) const;
  void collect(std::vector<Parameter*>& out) const;
};

}  // namespace narx
