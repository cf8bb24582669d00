#pragma once

#include <array>
#include <string_view>

#include "narx/model/heads.hpp"
#include "narx/transfer/checkpoint.hpp"

namespace narx {

inline constexpr std::size_t kStackLayers = 5;

enum class PlanKind { Baseline, Alternating, Early, FullFinetune };

std::string_view to_string(PlanKind kind);
/// Accepts baseline, alternating, early, full_finetune.
PlanKind parse_plan(std::string_view name);

struct LayerSpec {
  bool pretrained = false;
  bool trainable = true;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Initialization source and trainability of each processor layer.
struct FreezePlan {
  PlanKind kind = PlanKind::Baseline;
  std::array<LayerSpec, kStackLayers> layers{};

  /// Full fine-tuning loads the alternating slots (2 and 4) but trains
  /// every layer.
  static FreezePlan make(PlanKind kind);
  bool needs_checkpoint() const;
};

struct StackConfig {
  ModelConfig model;
  std::size_t node_dim = 0;
  std::size_t edge_dim = 0;
  std::size_t graph_dim = 0;
};

/// Downstream graph classifier: encoder, five triplet layers (one round
/// each, edge states carried between layers) and a binary head on the
/// pooled node embeddings.
class LayerStack {
 public:
  /// Logits [graphs, 1].
  Var forward(Tape& tape, const GraphBatch& batch, const Topology& topo) const;
  /// Node states after the last layer.
  Latent embed(Tape& tape, const GraphBatch& batch, const Topology& topo) const;

  ParamSet& params() { return params_; }
  const ParamSet& params() const { return params_; }
  const FreezePlan& plan() const { return plan_; }
  const StackConfig& config() const { return cfg_; }
  const ProcessorParams& layer(std::size_t i) const { return layers_.at(i); }
  /// Parameter name prefix of layer i (0-based), e.g. "layer2." for i = 1.
  static std::string layer_prefix(std::size_t i);

 private:
  friend LayerStack build_stack(const FreezePlan&, const StackConfig&, const Checkpoint*, std::uint64_t);

  StackConfig cfg_;
  FreezePlan plan_;
  ParamSet params_;
  EncoderParams enc_;
  std::array<ProcessorParams, kStackLayers> layers_;
  Linear head_;
};

/// Pretrained slots receive the checkpoint's "proc.*" weights; random
/// layers are seeded independently. Missing or mis-shaped weights and a
/// hidden/triplet size mismatch raise a transfer error.
LayerStack build_stack(const FreezePlan& plan, const StackConfig& cfg, const Checkpoint* ckpt, std::uint64_t seed);

/// Parameter values by name, in stack order.
using Snapshot = std::vector<std::pair<std::string, Tensor>>;
Snapshot snapshot(const ParamSet& ps);

struct FreezeReport {
  std::vector<std::string> violations;
  std::vector<std::string> notes;
  bool ok() const { return violations.empty(); }
};

/// Frozen parameters must be bit-identical between the snapshots and, when
/// some gradient was nonzero, at least one trainable parameter must differ.
FreezeReport assert_frozen(const LayerStack& stack, const Snapshot& before, const Snapshot& after,
                           bool had_gradient = true);

/// True if any parameter of layer i differs between the snapshots.
bool layer_changed(const Snapshot& before, const Snapshot& after, std::size_t layer);

}  // namespace narx
