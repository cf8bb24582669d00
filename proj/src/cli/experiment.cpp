#include "narx/cli/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>

#include "json.hpp"
#include "narx/core/error.hpp"

namespace narx {

using nlohmann::json;

namespace {

// Walks one JSON object, tracking the key path for error messages and
// rejecting keys nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(ErrorKind::Config, where() + "must be an object");
  }

  /// Raises on any key not read through has() or get().
  void finish() const {
    for (const auto& [key, _] : j_.items())
      if (!seen_.count(key)) fail(ErrorKind::Config, "unknown key '" + key_path(key) + "'");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_unsigned_v<T>) {
        if (!v.is_number_integer() || v.get<long long>() < 0) throw std::invalid_argument("non-negative integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw std::invalid_argument("number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::invalid_argument("string");
      }
      out = v.get<T>();
    } catch (const std::exception& e) {
      fail(ErrorKind::Config, "'" + key_path(key) + "' must be a " + e.what());
    }
  }

  template <class T>
  void get(const std::string& key, std::optional<T>& out) {
    if (!has(key)) return;
    T v{};
    get(key, v);
    out = v;
  }

  Section sub(const std::string& key) { return Section(j_.at(key), key_path(key)); }
  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  std::string where() const { return path_.empty() ? "config " : "'" + path_ + "' "; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

LabelRule parse_rule(const std::string& s, const std::string& path) {
  if (s == "path_length") return LabelRule::PathLength;
  if (s == "five_cycle") return LabelRule::FiveCycle;
  fail(ErrorKind::Config, "'" + path + "' must be path_length or five_cycle, got '" + s + "'");
}

}  // namespace

PlanKind parse_plan_arg(std::string_view name) {
  if (name == "full") return PlanKind::FullFinetune;
  return parse_plan(name);
}

std::vector<clrs::AlgoName> ExperimentConfig::algorithms() const {
  if (algo == "all") return {clrs::all_algorithms().begin(), clrs::all_algorithms().end()};
  return {clrs::parse_algo(algo)};
}

std::string ExperimentConfig::checkpoint_path() const {
  if (!downstream.checkpoint.empty()) return downstream.checkpoint;
  return (std::filesystem::path(out_dir) / "ckpt.bin").string();
}

ExperimentConfig parse_experiment(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Config, source + ": " + e.what());
  }
  ExperimentConfig cfg;
  try {
    Section root(j, "");
    root.get("algo", cfg.algo);
    root.get("out_dir", cfg.out_dir);
    if (root.has("clrs")) {
      Section s = root.sub("clrs");
      s.get("n", cfg.clrs.n);
      s.get("steps", cfg.clrs.steps);
      s.get("batch", cfg.clrs.batch);
      s.get("seed", cfg.clrs.seed);
      s.get("eval_every", cfg.clrs.eval_every);
      s.get("val_instances", cfg.clrs.val_instances);
      s.get("lr", cfg.clrs.lr);
      s.get("target_accuracy", cfg.clrs.target_accuracy);
      s.get("teacher_forcing", cfg.clrs.teacher_forcing);
      s.get("hint_weight", cfg.clrs.hint_weight);
      s.finish();
    }
    if (root.has("model")) {
      Section s = root.sub("model");
      s.get("hidden_dim", cfg.model.hidden_dim);
      s.get("triplet_dim", cfg.model.triplet_dim);
      s.get("num_steps", cfg.model.num_steps);
      s.finish();
    }
    if (root.has("downstream")) {
      Section s = root.sub("downstream");
      auto& d = cfg.downstream;
      s.get("dataset", d.dataset);
      s.get("checkpoint", d.checkpoint);
      std::string plan;
      s.get("plan", plan);
      if (!plan.empty()) {
        try {
          d.plan = parse_plan_arg(plan);
        } catch (const Error& e) {
          fail(ErrorKind::Config, "'downstream.plan': " + std::string(e.what()));
        }
      }
      s.get("repeats", d.train.repeats);
      s.get("steps", d.train.steps);
      s.get("seed", d.train.seed);
      s.get("batch", d.train.batch_size);
      s.get("eval_every", d.train.eval_every);
      s.get("lr", d.train.lr);
      if (s.has("synthetic")) {
        Section y = s.sub("synthetic");
        auto& sp = d.synthetic;
        y.get("num_graphs", sp.num_graphs);
        y.get("min_nodes", sp.min_nodes);
        y.get("max_nodes", sp.max_nodes);
        y.get("threshold", sp.threshold);
        y.get("extra_edge_rate", sp.extra_edge_rate);
        y.get("seed", sp.seed);
        std::string rule;
        y.get("rule", rule);
        if (!rule.empty()) sp.rule = parse_rule(rule, y.key_path("rule"));
        y.finish();
      }
      s.finish();
    }
    root.finish();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Config) throw;
    fail(ErrorKind::Config, source + ": " + e.what());
  }
  try {
    if (cfg.algo != "all") clrs::parse_algo(cfg.algo);
  } catch (const Error& e) {
    fail(ErrorKind::Config, source + ": 'algo': " + e.what());
  }
  auto check = [&](bool ok, const std::string& what) { require(ok, ErrorKind::Config, source + ": " + what); };
  check(cfg.model.hidden_dim > 0, "'model.hidden_dim' must be positive");
  check(cfg.model.triplet_dim > 0, "'model.triplet_dim' must be positive");
  check(cfg.clrs.n >= 2, "'clrs.n' must be at least 2");
  check(cfg.clrs.steps > 0, "'clrs.steps' must be positive");
  check(cfg.clrs.batch > 0, "'clrs.batch' must be positive");
  check(cfg.clrs.eval_every > 0, "'clrs.eval_every' must be positive");
  check(cfg.clrs.lr > 0, "'clrs.lr' must be positive");
  check(!cfg.clrs.teacher_forcing || (*cfg.clrs.teacher_forcing >= 0 && *cfg.clrs.teacher_forcing <= 1),
        "'clrs.teacher_forcing' must lie in [0, 1]");
  check(cfg.downstream.train.repeats > 0, "'downstream.repeats' must be positive");
  check(cfg.downstream.train.steps > 0, "'downstream.steps' must be positive");
  check(cfg.downstream.train.batch_size > 0, "'downstream.batch' must be positive");
  check(cfg.downstream.train.eval_every > 0, "'downstream.eval_every' must be positive");
  check(cfg.downstream.train.lr > 0, "'downstream.lr' must be positive");
  return cfg;
}

ExperimentConfig load_experiment(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open '" + path + "'");
  return parse_experiment(std::string(std::istreambuf_iterator<char>(in), {}), path);
}

PretrainConfig pretrain_config(const ExperimentConfig& cfg) {
  PretrainConfig p;
  p.algos = cfg.algorithms();
  p.train_size = cfg.clrs.n;
  p.val_size = cfg.clrs.n;
  p.val_instances = cfg.clrs.val_instances;
  p.model = cfg.model;
  p.train.steps = cfg.clrs.steps;
  p.train.batch_size = cfg.clrs.batch;
  p.train.seed = cfg.clrs.seed;
  p.train.eval_every = cfg.clrs.eval_every;
  p.train.lr = cfg.clrs.lr;
  p.train.target_accuracy = cfg.clrs.target_accuracy;
  // A single loss applies to every algorithm in the run; a lone algorithm
  // keeps its preset.
  if (p.algos.size() == 1) p.loss = default_loss(p.algos[0]);
  if (cfg.clrs.teacher_forcing) {
    p.loss.teacher_forcing = *cfg.clrs.teacher_forcing;
    if (p.loss.teacher_forcing > 0 && p.loss.hint_weight == 0) p.loss.hint_weight = 1.0;
  }
  if (cfg.clrs.hint_weight) p.loss.hint_weight = *cfg.clrs.hint_weight;
  return p;
}

MolDataset load_downstream_dataset(const ExperimentConfig& cfg) {
  if (!cfg.downstream.dataset.empty()) return load_ogb_csv_dir(cfg.downstream.dataset);
  return gen_synthetic(cfg.downstream.synthetic);
}

}  // namespace narx
