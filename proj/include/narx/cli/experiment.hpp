#pragma once

#include <optional>
#include <string>

#include "narx/data/dataset.hpp"
#include "narx/training/downstream.hpp"

namespace narx {

struct ClrsSection {
  std::size_t n = 16;
  std::size_t steps = 1000;
  std::size_t batch = 32;
  std::uint64_t seed = 0;
  std::size_t eval_every = 100;
  std::size_t val_instances = 128;
  double lr = 1e-3;
  double target_accuracy = 0;
  /// Unset keeps each algorithm's preset.
  std::optional<double> teacher_forcing;
  std::optional<double> hint_weight;
};

struct DownstreamSection {
  /// OGB raw-CSV directory; when empty the synthetic spec is used.
  std::string dataset;
  SyntheticSpec synthetic;
  PlanKind plan = PlanKind::Alternating;
  /// Defaults to <out_dir>/ckpt.bin.
  std::string checkpoint;
  DownstreamConfig train;
};

/// One experiment recipe, read from JSON. Every section is optional.
struct ExperimentConfig {
  /// Algorithm name or "all".
  std::string algo = "bfs";
  ClrsSection clrs;
  ModelConfig model;
  DownstreamSection downstream;
  std::string out_dir = "runs";

  std::vector<clrs::AlgoName> algorithms() const;
  std::string checkpoint_path() const;
};

/// Parses and validates. Unknown keys and wrong types raise a config error
/// naming the key path, e.g. "downstream.synthetic.rule".
ExperimentConfig parse_experiment(const std::string& json_text, const std::string& source);
ExperimentConfig load_experiment(const std::string& path);

PretrainConfig pretrain_config(const ExperimentConfig& cfg);
MolDataset load_downstream_dataset(const ExperimentConfig& cfg);

/// Accepts the plan names plus "full" for full_finetune.
PlanKind parse_plan_arg(std::string_view name);

}  // namespace narx
