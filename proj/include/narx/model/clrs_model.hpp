#pragma once

#include <span>

#include "narx/clrs/execute.hpp"
#include "narx/model/heads.hpp"

namespace narx {

/// A batch of same-algorithm instances with their supervision.
struct ClrsBatch {
  clrs::AlgoName algo = clrs::AlgoName::BFS;
  GraphBatch graphs;
  Topology topo;
  PairIndex pairs;
  std::size_t steps = 1;
  /// Output targets concatenated over graphs; pointers hold graph-local indices.
  std::vector<double> output;
  /// hints[s][p]: state s of hint probe p, concatenated like `output`. Holds
  /// steps + 1 states; shorter traces repeat their final state.
  std::vector<std::vector<std::vector<double>>> hints;
};

/// `fixed_steps` > 0 overrides the processor round count. Without hints the
/// count defaults to the largest graph size in the batch.
ClrsBatch make_clrs_batch(clrs::AlgoName algo, std::span<const clrs::AlgoInstance> instances,
                          std::span<const clrs::AlgoTrace> traces, bool with_hints, std::size_t fixed_steps = 0);

struct ForwardOptions {
  bool use_hints = false;
  /// Chance per step of feeding the true hint state instead of the model's own.
  double teacher_forcing = 0.0;
  Rng* rng = nullptr;
};

struct ClrsOutput {
  Var output;
  /// hint_logits[t][p]: prediction of hint state t + 1.
  std::vector<std::vector<Var>> hint_logits;
  Latent final_state;
};

/// Encode-process-decode network: algorithm-specific encoders and decoders
/// around a single processor shared by all algorithms and steps.
class ClrsModel {
 public:
  ClrsModel(ModelConfig cfg, std::vector<clrs::AlgoName> algos, std::uint64_t seed);

  ClrsOutput forward(Tape& tape, const ClrsBatch& batch, const ForwardOptions& opts = {}) const;

  ParamSet& params() { return params_; }
  const ParamSet& params() const { return params_; }
  const ProcessorParams& processor() const { return proc_; }
  const ModelConfig& config() const { return cfg_; }
  const std::vector<clrs::AlgoName>& algorithms() const { return algos_; }
  bool supports(clrs::AlgoName algo) const;

  /// Prefix of the shared processor's parameter names.
  static constexpr const char* kProcessorPrefix = "proc.";

 private:
  struct AlgoHeads {
    EncoderParams enc;
    DecoderHead out;
    std::vector<Linear> hint_enc;
    std::vector<DecoderHead> hint_dec;
  };
  const AlgoHeads& heads(clrs::AlgoName algo) const;

  ModelConfig cfg_;
  std::vector<clrs::AlgoName> algos_;
  ParamSet params_;
  ProcessorParams proc_;
  std::vector<AlgoHeads> heads_;
};

}  // namespace narx
