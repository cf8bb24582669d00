#include "narx/model/params.hpp"

#include <cmath>

#include "narx/core/error.hpp"

namespace narx {

Parameter& ParamSet::add(std::string name, Tensor value) {
  require(find(name) == nullptr, ErrorKind::Contract, "duplicate parameter '" + name + "'");
  params_.push_back(std::make_unique<Parameter>(std::move(name), std::move(value)));
  return *params_.back();
}

Parameter* ParamSet::find(std::string_view name) {
  for (auto& p : params_)
    if (p->name == name) return p.get();
  return nullptr;
}

const Parameter* ParamSet::find(std::string_view name) const {
  for (const auto& p : params_)
    if (p->name == name) return p.get();
  return nullptr;
}

Parameter& ParamSet::at(std::string_view name) {
  auto* p = find(name);
  require(p != nullptr, ErrorKind::Config, "no parameter named '" + std::string(name) + "'");
  return *p;
}

std::vector<Parameter*> ParamSet::all() {
  std::vector<Parameter*> out;
  for (auto& p : params_) out.push_back(p.get());
  return out;
}

std::vector<const Parameter*> ParamSet::all() const {
  std::vector<const Parameter*> out;
  for (const auto& p : params_) out.push_back(p.get());
  return out;
}

void ParamSet::zero_grad() {
  for (auto& p : params_) p->zero_grad();
}

Tensor uniform_init(Shape shape, std::size_t fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Tensor t(std::move(shape));
  for (Real& v : t.storage()) v = static_cast<Real>(dist(rng));
  return t;
}

Linear Linear::create(ParamSet& ps, const std::string& name, std::size_t in, std::size_t out, Rng& rng,
                      bool bias, std::size_t fan_in) {
  require(in > 0 && out > 0, ErrorKind::Config, "linear layer '" + name + "' needs positive dims");
  if (fan_in == 0) fan_in = in;
  Linear l;
  l.w = &ps.add(name + ".w", uniform_init({in, out}, fan_in, rng));
  if (bias) l.b = &ps.add(name + ".b", uniform_init({out}, fan_in, rng));
  return l;
}

Linear Linear::bind(ParamSet& ps, const std::string& name, bool bias) {
  Linear l;
  l.w = &ps.at(name + ".w");
  if (bias) l.b = &ps.at(name + ".b");
  return l;
}

Var Linear::operator()(Tape& tape, Var x) const {
  Var y = matmul(x, tape.param(*w));
  return b ? add(y, tape.param(*b)) : y;
}

void Linear::collect(std::vector<Parameter*>& out) const {
  out.push_back(w);
  if (b) out.push_back(b);
}

Mlp Mlp::create(ParamSet& ps, const std::string& name, std::size_t in, std::size_t hidden, std::size_t out,
                Rng& rng) {
  return {Linear::create(ps, name + ".l1", in, hidden, rng), Linear::create(ps, name + ".l2", hidden, out, rng)};
}

Var Mlp::operator()(Tape& tape, Var x) const { return second(tape, relu(first(tape, x))); }

void Mlp::collect(std::vector<Parameter*>& out) const {
  first.collect(out);
  second.collect(out);
}

}  // namespace narx
