#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "narx/tensor/tensor.hpp"

namespace narx {

class Tape;

/// Handle to a value recorded on a Tape. Cheap to copy; only valid while the
/// owning tape is alive.
class Var {
 public:
  Var() = default;

  bool valid() const noexcept { return tape_ != nullptr; }
  Tape& tape() const noexcept { return *tape_; }
  std::uint32_t id() const noexcept { return id_; }
  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }

 private:
  friend class Tape;
  Var(Tape* tape, std::uint32_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::uint32_t id_ = 0;
};

/// Persistent trainable array. Bound to a tape with Tape::param for each
/// forward pass; backward accumulates into `grad`.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  bool frozen = false;

  Parameter() = default;
  Parameter(std::string name_, Tensor value_)
      : name(std::move(name_)), value(std::move(value_)),
        grad(value.shape()) {}

  void zero_grad();
};

/// Append-only record of differentiable operations. Inputs of a node always
/// have smaller ids, so a single reverse sweep visits nodes in topological
/// order.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::uint32_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  /// Free-standing leaf that requires a gradient (read it back with grad()).
  Var leaf(Tensor value);
  /// Leaf bound to a parameter; the same parameter maps to the same node.
  /// Frozen parameters enter as constants.
  Var param(Parameter& p);

  Var record(const char* op, Tensor value, std::vector<std::uint32_t> inputs,
             BackwardFn backward);

  /// Seeds d(loss)/d(loss) = 1 and sweeps the tape once in reverse. Parameter
  /// gradients are accumulated into Parameter::grad.
  void backward(Var loss);

  const Tensor& value(std::uint32_t id) const { return nodes_[id].value; }
  bool requires_grad(std::uint32_t id) const { return nodes_[id].requires_grad; }
  bool has_grad(std::uint32_t id) const { return !nodes_[id].grad.empty(); }
  /// Gradient buffer for a node, allocated (zero) on first access.
  Tensor& grad(std::uint32_t id);
  const char* op_name(std::uint32_t id) const { return nodes_[id].op; }
  std::size_t size() const noexcept { return nodes_.size(); }

  /// Non-finite forward values raise a numeric-domain error when enabled.
  void set_check_finite(bool on) noexcept { check_finite_ = on; }

  /// When enabled, piecewise ops fold the branch they took (relu signs, max
  /// winners) into a digest. Two forward passes with equal digests ran on
  /// the same linear piece.
  void set_track_branches(bool on) noexcept { track_branches_ = on; }
  bool tracking_branches() const noexcept { return track_branches_; }
  void note_branch(std::uint64_t v) noexcept { branch_digest_ = (branch_digest_ ^ v) * 0x100000001b3ULL; }
  std::uint64_t branch_digest() const noexcept { return branch_digest_; }

 private:
  struct Node {
    const char* op = "";
    Tensor value;
    Tensor grad;
    std::vector<std::uint32_t> inputs;
    BackwardFn backward;
    bool requires_grad = false;
    Parameter* param = nullptr;
  };

  std::uint32_t push(Node node);

  std::vector<Node> nodes_;
  std::unordered_map<Parameter*, std::uint32_t> bound_;
  bool check_finite_ = true;
  bool track_branches_ = false;
  std::uint64_t branch_digest_ = 0xcbf29ce484222325ULL;
};

}  // namespace narx
