// narx: trace generation, pretraining, transfer training and reporting.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "narx/cli/experiment.hpp"
#include "narx/clrs/execute.hpp"
#include "narx/clrs/trace_io.hpp"
#include "narx/core/error.hpp"
#include "narx/eval/embeddings.hpp"
#include "narx/eval/report.hpp"

namespace fs = std::filesystem;
using namespace narx;

namespace {

std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t i) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
  std::uint32_t w[2];
  seq.generate(w, w + 2);
  return (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write '" + p.string() + "'");
  return out;
}

void gen_traces(const std::string& algo_name, std::size_t n, std::size_t count, std::uint64_t seed,
                const std::string& out_path) {
  const auto algo = clrs::parse_algo(algo_name);
  require(n >= 2, ErrorKind::Usage, "--n must be at least 2");
  auto out = open_out(out_path);
  for (std::size_t i = 0; i < count; ++i) {
    const auto inst = clrs::sample_instance(algo, n, instance_seed(seed, i));
    out << clrs::to_json_line(clrs::make_record(inst, clrs::execute(inst))) << '\n';
  }
  std::printf("wrote %zu traces to %s\n", count, out_path.c_str());
}

void pretrain(const std::string& config_path) {
  const ExperimentConfig cfg = load_experiment(config_path);
  const PretrainConfig pc = pretrain_config(cfg);
  fs::create_directories(cfg.out_dir);
  const PretrainResult res = pretrain_clrs(pc);
  const CheckpointMeta meta{static_cast<std::uint32_t>(cfg.model.hidden_dim),
                            static_cast<std::uint32_t>(cfg.model.triplet_dim), cfg.algo, cfg.clrs.seed};
  save_checkpoint(make_checkpoint(res.model.params(), meta), cfg.checkpoint_path());
  write_log_csv(res.log, (fs::path(cfg.out_dir) / "log.csv").string());
  double mean = 0;
  for (const auto& [algo, acc] : res.val_accuracy) {
    std::printf("%-30s val_accuracy %.4f\n", std::string(clrs::to_string(algo)).c_str(), acc);
    mean += acc;
  }
  if (res.val_accuracy.size() > 1)
    std::printf("%-30s val_accuracy %.4f\n", "mean", mean / static_cast<double>(res.val_accuracy.size()));
  std::printf("best step %zu; checkpoint %s\n", res.best_step, cfg.checkpoint_path().c_str());
}

void transfer_train(const std::string& config_path, const std::string& plan_override, const std::string& emb_path) {
  ExperimentConfig cfg = load_experiment(config_path);
  if (!plan_override.empty()) cfg.downstream.plan = parse_plan_arg(plan_override);
  const FreezePlan plan = FreezePlan::make(cfg.downstream.plan);
  std::optional<Checkpoint> ckpt;
  if (plan.needs_checkpoint()) {
    const std::string path = cfg.checkpoint_path();
    require(fs::exists(path), ErrorKind::Transfer,
            "plan '" + std::string(to_string(plan.kind)) + "' needs a checkpoint; '" + path + "' does not exist");
    ckpt = load_checkpoint(path);
  }
  const MolDataset ds = load_downstream_dataset(cfg);
  if (ds.dropped_missing_labels > 0)
    std::printf("dropped %zu graphs with missing labels\n", ds.dropped_missing_labels);
  const StackConfig scfg = stack_config_for(ds, cfg.model);
  const std::string plan_name(to_string(plan.kind));
  const fs::path run_dir = fs::path(cfg.out_dir) / plan_name;
  fs::create_directories(run_dir);

  const std::string tag = plan.needs_checkpoint() ? ckpt->meta.algo : "baseline";
  RunResult result{tag + "-" + plan_name, tag, plan_name, {}, {}};
  for (std::size_t r = 0; r < cfg.downstream.train.repeats; ++r) {
    const std::uint64_t seed = cfg.downstream.train.seed + r;
    LayerStack stack = build_stack(plan, scfg, ckpt ? &*ckpt : nullptr, seed);
    const Snapshot before = snapshot(stack.params());
    const DownstreamRun run = train_stack(stack, ds, cfg.downstream.train, seed);
    const FreezeReport frozen = assert_frozen(stack, before, snapshot(stack.params()));
    if (!frozen.ok()) fail(ErrorKind::Contract, "freeze check failed: " + frozen.violations.front());
    const fs::path seed_dir = run_dir / ("seed" + std::to_string(seed));
    fs::create_directories(seed_dir);
    write_log_csv(run.log, (seed_dir / "log.csv").string());
    if (!emb_path.empty() && r == 0) export_embeddings(stack, ds, emb_path);
    std::printf("seed %llu: val %.4f test %.4f (best step %zu, freeze check ok)\n",
                static_cast<unsigned long long>(seed), run.val_accuracy, run.test_accuracy, run.best_step);
    result.accuracies.push_back(run.test_accuracy);
    result.seeds.push_back(seed);
  }
  const Summary s = summarize(result.accuracies);
  const std::string out = (run_dir / "result.json").string();
  save_run_result(result, out);
  std::printf("%s: test accuracy %.2f +- %.2f over %zu seeds; wrote %s\n", result.model_id.c_str(), 100 * s.mean,
              100 * s.std, s.n, out.c_str());
}

void report(const std::string& baseline, const std::vector<std::string>& models, bool ttest,
            const std::string& csv_path, const std::string& summary_path) {
  if (!summary_path.empty()) {
    const LabelCheck check = check_summary_labels(load_summary_csv(summary_path));
    std::printf("recomputed %zu labels, %zu differ\n", check.checked, check.mismatches.size());
    for (const auto& m : check.mismatches) std::printf("  %s\n", m.c_str());
    return;
  }
  require(!baseline.empty(), ErrorKind::Usage, "report needs --baseline (or --summary)");
  std::vector<RunResult> runs;
  for (const auto& m : models) runs.push_back(load_run_result(m));
  const ComparisonReport rep = build_report(runs, load_run_result(baseline), ttest);
  std::fputs(rep.text().c_str(), stdout);
  if (!csv_path.empty()) open_out(csv_path) << rep.csv();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Algorithmic pretraining and layer transfer for graph networks"};
  app.require_subcommand(1);

  std::string algo, out, config, plan, baseline, csv, summary, emb;
  std::size_t n = 8, count = 10;
  std::uint64_t seed = 0;
  std::vector<std::string> models;
  bool ttest = false;

  auto* gen = app.add_subcommand("gen-traces", "Write JSON-lines algorithm traces");
  gen->add_option("--algo", algo, "Algorithm name")->required();
  gen->add_option("--n", n, "Instance size");
  gen->add_option("--count", count, "Number of instances");
  gen->add_option("--seed", seed, "Seed");
  gen->add_option("--out", out, "Output file")->required();

  auto* pre = app.add_subcommand("pretrain", "Pretrain a processor on CLRS algorithms");
  pre->add_option("--config", config, "Experiment JSON")->required()->check(CLI::ExistingFile);

  auto* tt = app.add_subcommand("transfer-train", "Train a downstream stack under a freeze plan");
  tt->add_option("--config", config, "Experiment JSON")->required()->check(CLI::ExistingFile);
  tt->add_option("--plan", plan, "baseline, alternating, early or full");
  tt->add_option("--embeddings", emb, "Write pooled embeddings of the first seed to this CSV");

  auto* rep = app.add_subcommand("report", "Compare runs against a baseline");
  rep->add_option("--baseline", baseline, "Baseline result.json");
  rep->add_option("--models", models, "Model result.json files");
  rep->add_flag("--ttest", ttest, "Add Welch t-test columns");
  rep->add_option("--csv", csv, "Also write the report as CSV");
  rep->add_option("--summary", summary, "Recompute labels of a group,algorithm,dataset,mean,std,label CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error[" << to_string(ErrorKind::Usage) << "]: " << e.what() << "\n";
    return 2;
  }
  try {
    if (*gen) gen_traces(algo, n, count, seed, out);
    if (*pre) pretrain(config);
    if (*tt) transfer_train(config, plan, emb);
    if (*rep) report(baseline, models, ttest, csv, summary);
  } catch (const Error& e) {
    std::cerr << "error[" << e.category() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
