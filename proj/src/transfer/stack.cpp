#include "narx/transfer/stack.hpp"

#include <map>

#include "narx/core/error.hpp"
#include "narx/model/clrs_model.hpp"

namespace narx {

std::string_view to_string(PlanKind kind) {
  switch (kind) {
    case PlanKind::Baseline: return "baseline";
    case PlanKind::Alternating: return "alternating";
    case PlanKind::Early: return "early";
    case PlanKind::FullFinetune: return "full_finetune";
  }
  return "?";
}

PlanKind parse_plan(std::string_view name) {
  for (auto k : {PlanKind::Baseline, PlanKind::Alternating, PlanKind::Early, PlanKind::FullFinetune})
    if (to_string(k) == name) return k;
  fail(ErrorKind::Config, "unknown freeze plan '" + std::string(name) +
                              "'; valid plans: baseline, alternating, early, full_finetune");
}

FreezePlan FreezePlan::make(PlanKind kind) {
  FreezePlan p;
  p.kind = kind;
  const LayerSpec frozen{true, false}, fresh{false, true};
  switch (kind) {
    case PlanKind::Baseline: p.layers.fill(fresh); break;
    case PlanKind::Alternating: p.layers = {fresh, frozen, fresh, frozen, fresh}; break;
    case PlanKind::Early: p.layers = {frozen, frozen, fresh, fresh, fresh}; break;
    case PlanKind::FullFinetune: p.layers = {fresh, {true, true}, fresh, {true, true}, fresh}; break;
  }
  return p;
}

bool FreezePlan::needs_checkpoint() const {
  for (const auto& l : layers)
    if (l.pretrained) return true;
  return false;
}

std::string LayerStack::layer_prefix(std::size_t i) { return "layer" + std::to_string(i + 1) + "."; }

Latent LayerStack::embed(Tape& tape, const GraphBatch& batch, const Topology& topo) const {
  Latent l = encode(tape, batch, enc_);
  for (const auto& layer : layers_) l = triplet_step(tape, l, layer, topo);
  return l;
}

Var LayerStack::forward(Tape& tape, const GraphBatch& batch, const Topology& topo) const {
  return head_(tape, pool_nodes(embed(tape, batch, topo).nodes, topo));
}

namespace {

void load_layer(ParamSet& ps, const std::string& prefix, const Checkpoint& ckpt) {
  for (const auto& name : processor_param_names()) {
    const std::string src = std::string(ClrsModel::kProcessorPrefix) + name;
    const CheckpointEntry* e = ckpt.find(src);
    require(e != nullptr, ErrorKind::Transfer, "checkpoint has no entry '" + src + "'");
    Parameter& p = ps.at(prefix + name);
    require(e->value.shape() == p.value.shape(), ErrorKind::Transfer,
            "checkpoint entry '" + src + "' has shape " + shape_str(e->value.shape()) + ", layer expects " +
                shape_str(p.value.shape()));
    p.value = e->value;
  }
}

}  // namespace

LayerStack build_stack(const FreezePlan& plan, const StackConfig& cfg, const Checkpoint* ckpt, std::uint64_t seed) {
  validate(cfg.model);
  if (plan.needs_checkpoint()) {
    require(ckpt != nullptr, ErrorKind::Transfer,
            "plan '" + std::string(to_string(plan.kind)) + "' needs a pretrained checkpoint");
    require(ckpt->meta.hidden_dim == cfg.model.hidden_dim, ErrorKind::Transfer,
            "checkpoint hidden_dim " + std::to_string(ckpt->meta.hidden_dim) + " does not match config " +
                std::to_string(cfg.model.hidden_dim));
    require(ckpt->meta.triplet_dim == cfg.model.triplet_dim, ErrorKind::Transfer,
            "checkpoint triplet_dim " + std::to_string(ckpt->meta.triplet_dim) + " does not match config " +
                std::to_string(cfg.model.triplet_dim));
  }
  LayerStack s;
  s.cfg_ = cfg;
  s.plan_ = plan;
  std::seed_seq root{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::vector<std::uint64_t> seeds(kStackLayers + 2);
  {
    std::vector<std::uint32_t> words(2 * seeds.size());
    root.generate(words.begin(), words.end());
    for (std::size_t i = 0; i < seeds.size(); ++i)
      seeds[i] = (static_cast<std::uint64_t>(words[2 * i]) << 32) | words[2 * i + 1];
  }
  const std::size_t h = cfg.model.hidden_dim;
  Rng enc_rng(seeds[0]);
  s.enc_ = EncoderParams::create(s.params_, "enc.", cfg.node_dim, cfg.edge_dim, cfg.graph_dim, h, enc_rng);
  for (std::size_t i = 0; i < kStackLayers; ++i) {
    Rng rng(seeds[i + 1]);
    const std::string prefix = LayerStack::layer_prefix(i);
    s.layers_[i] = ProcessorParams::create(s.params_, prefix, cfg.model, rng);
    if (plan.layers[i].pretrained) load_layer(s.params_, prefix, *ckpt);
    if (!plan.layers[i].trainable)
      for (Parameter* p : s.layers_[i].params()) p->frozen = true;
  }
  Rng head_rng(seeds[kStackLayers + 1]);
  s.head_ = Linear::create(s.params_, "head", 2 * h, 1, head_rng);
  return s;
}

Snapshot snapshot(const ParamSet& ps) {
  Snapshot out;
  for (const Parameter* p : ps.all()) out.emplace_back(p->name, p->value);
  return out;
}

FreezeReport assert_frozen(const LayerStack& stack, const Snapshot& before, const Snapshot& after,
                           bool had_gradient) {
  FreezeReport rep;
  std::map<std::string_view, const Tensor*> prev, next;
  for (const auto& [n, t] : before) prev[n] = &t;
  for (const auto& [n, t] : after) next[n] = &t;
  bool trainable_changed = false;
  std::size_t trainable = 0;
  for (const Parameter* p : stack.params().all()) {
    auto a = prev.find(p->name), b = next.find(p->name);
    if (a == prev.end() || b == next.end()) {
      rep.violations.push_back("'" + p->name + "' missing from a snapshot");
      continue;
    }
    const bool same = bitwise_equal(*a->second, *b->second);
    if (p->frozen) {
      if (!same) rep.violations.push_back("frozen parameter '" + p->name + "' changed");
    } else {
      ++trainable;
      trainable_changed = trainable_changed || !same;
    }
  }
  if (trainable == 0) {
    rep.notes.push_back("no trainable parameters");
  } else if (!had_gradient) {
    rep.notes.push_back("all gradients were zero; trainable-change check skipped");
  } else if (!trainable_changed) {
    rep.violations.push_back("no trainable parameter changed");
  }
  return rep;
}

bool layer_changed(const Snapshot& before, const Snapshot& after, std::size_t layer) {
  const std::string prefix = LayerStack::layer_prefix(layer);
  std::map<std::string_view, const Tensor*> next;
  for (const auto& [n, t] : after) next[n] = &t;
  for (const auto& [n, t] : before) {
    if (n.rfind(prefix, 0) != 0) continue;
    auto it = next.find(n);
    if (it == next.end() || !bitwise_equal(t, *it->second)) return true;
  }
  return false;
}

}  // namespace narx
