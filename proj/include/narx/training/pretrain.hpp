#pragma once

#include <map>
#include <string>

#include "narx/model/clrs_model.hpp"
#include "narx/training/adam.hpp"
#include "narx/training/loss.hpp"

namespace narx {

struct LossSpec {
  double output_weight = 1.0;
  double hint_weight = 0.0;
  double teacher_forcing = 0.0;  // probability per step

  bool uses_hints() const { return hint_weight > 0 || teacher_forcing > 0; }
};
void validate(const LossSpec& loss);

struct TrainConfig {
  std::size_t steps = 1000;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  std::size_t eval_every = 100;
  double grad_clip_norm = 1.0;
  double lr = 1e-3;
  /// Stop at the first evaluation whose mean validation accuracy reaches
  /// this value; 0 trains for all steps.
  double target_accuracy = 0;
};
void validate(const TrainConfig& cfg);

struct PretrainConfig {
  std::vector<clrs::AlgoName> algos;
  std::size_t train_size = 16;  // nodes per training instance
  std::size_t val_size = 16;
  std::size_t val_instances = 128;
  ModelConfig model;
  TrainConfig train;
  LossSpec loss;
};

/// Preset loss for an algorithm: teacher forcing 0.5 with hint supervision
/// for the string matcher, outputs only otherwise.
LossSpec default_loss(clrs::AlgoName algo);

struct LogRow {
  std::size_t step = 0;
  double train_loss = 0;
  double val_metric = 0;
};

struct PretrainResult {
  ClrsModel model;
  /// Validation accuracy of the output probe per algorithm, for the
  /// parameters kept (best mean validation accuracy seen).
  std::map<clrs::AlgoName, double> val_accuracy;
  std::vector<LogRow> log;
  std::size_t best_step = 0;
};

/// Loss and hits of one batch under `opts` (no parameter update).
struct BatchEval {
  Var loss;
  Hits hits;
};
BatchEval evaluate_batch(Tape& tape, const ClrsModel& model, const ClrsBatch& batch, const LossSpec& loss,
                         const ForwardOptions& opts);

/// Validation instances for an algorithm, deterministic in the seed.
std::vector<ClrsBatch> validation_batches(clrs::AlgoName algo, std::size_t size, std::size_t count,
                                          std::size_t batch_size, std::uint64_t seed, bool with_hints,
                                          std::size_t fixed_steps);

double validation_accuracy(const ClrsModel& model, const std::vector<ClrsBatch>& batches, const LossSpec& loss);

/// Trains on freshly sampled instances, round-robin over the algorithms.
/// Loss divergence raises a training error.
PretrainResult pretrain_clrs(const PretrainConfig& cfg);

void write_log_csv(const std::vector<LogRow>& log, const std::string& path);

}  // namespace narx
