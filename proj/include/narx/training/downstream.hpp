#pragma once

#include <functional>

#include "narx/data/dataset.hpp"
#include "narx/eval/stats.hpp"
#include "narx/training/pretrain.hpp"
#include "narx/transfer/stack.hpp"

namespace narx {

struct DownstreamConfig {
  std::size_t steps = 300;
  std::size_t batch_size = 32;
  std::size_t eval_every = 25;
  std::size_t repeats = 3;
  std::uint64_t seed = 0;
  double lr = 1e-3;
  double grad_clip_norm = 1.0;
};
void validate(const DownstreamConfig& cfg);

struct DownstreamRun {
  std::uint64_t seed = 0;
  double train_accuracy = 0;
  double val_accuracy = 0;  // best seen; its parameters are kept
  double test_accuracy = 0;
  std::size_t best_step = 0;
  std::vector<LogRow> log;
};

/// Called after every optimizer step with the step index (1-based).
using StepHook = std::function<void(std::size_t step, const LayerStack& stack)>;

/// Trains the non-frozen parameters of `stack` with Adam on binary
/// cross-entropy, evaluating validation accuracy every `eval_every` steps,
/// and restores the parameters of the best evaluation. Minibatches are drawn
/// from the train split by reshuffling each epoch.
DownstreamRun train_stack(LayerStack& stack, const MolDataset& ds, const DownstreamConfig& cfg, std::uint64_t seed,
                          const StepHook& hook = {});

struct DownstreamResult {
  std::vector<DownstreamRun> runs;
  Summary test;  // over runs
  std::vector<double> test_accuracies() const;
};

/// Builds and trains a fresh stack for seeds seed, seed+1, ... (cfg.repeats
/// runs).
DownstreamResult train_downstream(const FreezePlan& plan, const StackConfig& stack_cfg, const Checkpoint* ckpt,
                                  const MolDataset& ds, const DownstreamConfig& cfg);

/// Logits of the listed graphs, one per graph.
std::vector<Real> stack_logits(const LayerStack& stack, const MolDataset& ds, std::span<const std::size_t> idx);
double stack_accuracy(const LayerStack& stack, const MolDataset& ds, std::span<const std::size_t> idx);

/// Stack configuration matching the dataset's feature widths.
StackConfig stack_config_for(const MolDataset& ds, const ModelConfig& model);

}  // namespace narx
