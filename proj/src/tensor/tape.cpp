#include "narx/tensor/tape.hpp"

#include <algorithm>
#include <cmath>

#include "narx/core/error.hpp"

namespace narx {

const Tensor& Var::value() const { return tape_->value(id_); }

void Parameter::zero_grad() {
  if (grad.shape() != value.shape()) grad = Tensor(value.shape());
  std::fill(grad.storage().begin(), grad.storage().end(), Real(0));
}

std::uint32_t Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

Var Tape::constant(Tensor value) {
  Node n;
  n.op = "constant";
  n.value = std::move(value);
  return Var(this, push(std::move(n)));
}

Var Tape::leaf(Tensor value) {
  Node n;
  n.op = "leaf";
  n.value = std::move(value);
  n.requires_grad = true;
  return Var(this, push(std::move(n)));
}

Var Tape::param(Parameter& p) {
  if (auto it = bound_.find(&p); it != bound_.end()) return Var(this, it->second);
  Node n;
  n.op = "param";
  n.value = p.value;
  n.requires_grad = !p.frozen;
  n.param = p.frozen ? nullptr : &p;
  const auto id = push(std::move(n));
  bound_.emplace(&p, id);
  return Var(this, id);
}

Var Tape::record(const char* op, Tensor value, std::vector<std::uint32_t> inputs,
                 BackwardFn backward) {
  if (check_finite_ && !value.all_finite())
    fail(ErrorKind::Domain, std::string("non-finite value produced by ") + op);
  Node n;
  n.op = op;
  n.value = std::move(value);
  n.requires_grad = std::any_of(inputs.begin(), inputs.end(), [&](auto i) {
    return nodes_[i].requires_grad;
  });
  if (n.requires_grad) n.backward = std::move(backward);
  n.inputs = std::move(inputs);
  return Var(this, push(std::move(n)));
}

Tensor& Tape::grad(std::uint32_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty() && !n.value.empty()) n.grad = Tensor(n.value.shape());
  return n.grad;
}

void Tape::backward(Var loss) {
  require(loss.valid() && &loss.tape() == this, ErrorKind::Contract,
          "backward: loss does not belong to this tape");
  const Tensor& lv = value(loss.id());
  require(lv.size() == 1, ErrorKind::Contract,
          "backward: loss must be scalar, got shape " + shape_str(lv.shape()));
  require(std::isfinite(lv[0]), ErrorKind::Contract, "backward: loss is not finite");
  for (auto& n : nodes_) n.grad = Tensor();
  if (!nodes_[loss.id()].requires_grad) return;
  grad(loss.id())[0] = Real(1);
  for (std::uint32_t id = loss.id() + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (n.grad.empty()) continue;
    if (n.backward) n.backward(*this, id);
    if (n.param != nullptr) {
      Parameter& p = *n.param;
      if (p.grad.shape() != p.value.shape()) p.grad = Tensor(p.value.shape());
      auto g = p.grad.data();
      auto src = n.grad.data();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += src[i];
    }
  }
}

}  // namespace narx
