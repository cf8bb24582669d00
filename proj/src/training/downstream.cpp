#include "narx/training/downstream.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "narx/core/error.hpp"
#include "narx/training/adam.hpp"

namespace narx {

void validate(const DownstreamConfig& cfg) {
  require(cfg.steps > 0, ErrorKind::Config, "downstream steps must be positive");
  require(cfg.batch_size > 0, ErrorKind::Config, "downstream batch_size must be positive");
  require(cfg.eval_every > 0, ErrorKind::Config, "downstream eval_every must be positive");
  require(cfg.repeats > 0, ErrorKind::Config, "downstream repeats must be positive");
  require(cfg.lr > 0, ErrorKind::Config, "downstream lr must be positive");
}

StackConfig stack_config_for(const MolDataset& ds, const ModelConfig& model) {
  return {model, ds.node_dim(), ds.edge_dim(), 1};
}

namespace {

constexpr std::size_t kEvalBatch = 64;

GraphBatch gather(const MolDataset& ds, std::span<const std::size_t> idx) {
  std::vector<GraphInstance> gs;
  gs.reserve(idx.size());
  for (auto i : idx) gs.push_back(ds.graphs.at(i));
  return batch(gs);
}

Tensor targets_of(const MolDataset& ds, std::span<const std::size_t> idx) {
  Tensor t({idx.size(), 1});
  for (std::size_t i = 0; i < idx.size(); ++i) t[i] = static_cast<Real>(ds.labels.at(idx[i]));
  return t;
}

}  // namespace

std::vector<Real> stack_logits(const LayerStack& stack, const MolDataset& ds, std::span<const std::size_t> idx) {
  std::vector<Real> out;
  out.reserve(idx.size());
  for (std::size_t start = 0; start < idx.size(); start += kEvalBatch) {
    const auto part = idx.subspan(start, std::min(kEvalBatch, idx.size() - start));
    const GraphBatch b = gather(ds, part);
    const Topology topo = Topology::from(b);
    Tape tape;
    const Tensor& logits = stack.forward(tape, b, topo).value();
    out.insert(out.end(), logits.storage().begin(), logits.storage().end());
  }
  return out;
}

double stack_accuracy(const LayerStack& stack, const MolDataset& ds, std::span<const std::size_t> idx) {
  const auto logits = stack_logits(stack, ds, idx);
  std::vector<int> labels;
  for (auto i : idx) labels.push_back(ds.labels.at(i));
  return accuracy(threshold_logits(std::span<const Real>(logits)), labels);
}

DownstreamRun train_stack(LayerStack& stack, const MolDataset& ds, const DownstreamConfig& cfg, std::uint64_t seed,
                          const StepHook& hook) {
  validate(cfg);
  require(!ds.split.train.empty() && !ds.split.valid.empty() && !ds.split.test.empty(), ErrorKind::Config,
          "dataset '" + ds.name + "' needs non-empty train, valid and test splits");
  require(ds.node_dim() == stack.config().node_dim && ds.edge_dim() == stack.config().edge_dim, ErrorKind::Dimension,
          "dataset feature widths do not match the stack");
  DownstreamRun run;
  run.seed = seed;
  auto params = stack.params().all();
  Adam opt(params, {cfg.lr, 0.9, 0.999, 1e-8, cfg.grad_clip_norm});
  Rng rng(seed ^ 0x646f776eULL);
  std::vector<std::size_t> order = ds.split.train;
  std::size_t cursor = order.size();

  double best = -1, loss_sum = 0;
  std::size_t loss_count = 0;
  std::vector<Tensor> best_values;
  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    std::vector<std::size_t> idx;
    while (idx.size() < std::min(cfg.batch_size, order.size())) {
      if (cursor == order.size()) {
        std::shuffle(order.begin(), order.end(), rng);
        cursor = 0;
      }
      idx.push_back(order[cursor++]);
    }
    const GraphBatch b = gather(ds, idx);
    const Topology topo = Topology::from(b);
    stack.params().zero_grad();
    Tape tape;
    const Var loss = bce_with_logits(stack.forward(tape, b, topo), targets_of(ds, idx));
    const double l = loss.value()[0];
    require(std::isfinite(l), ErrorKind::Training, "downstream loss is not finite at step " + std::to_string(step));
    tape.backward(loss);
    opt.step();
    if (hook) hook(step, stack);
    loss_sum += l;
    ++loss_count;
    if (step % cfg.eval_every == 0 || step == cfg.steps) {
      const double val = stack_accuracy(stack, ds, ds.split.valid);
      run.log.push_back({step, loss_sum / static_cast<double>(loss_count), val});
      loss_sum = 0;
      loss_count = 0;
      if (val > best) {
        best = val;
        run.best_step = step;
        best_values.clear();
        for (auto* p : params) best_values.push_back(p->value);
      }
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = best_values[i];
  run.val_accuracy = best;
  run.train_accuracy = stack_accuracy(stack, ds, ds.split.train);
  run.test_accuracy = stack_accuracy(stack, ds, ds.split.test);
  return run;
}

std::vector<double> DownstreamResult::test_accuracies() const {
  std::vector<double> out;
  for (const auto& r : runs) out.push_back(r.test_accuracy);
  return out;
}

DownstreamResult train_downstream(const FreezePlan& plan, const StackConfig& stack_cfg, const Checkpoint* ckpt,
                                  const MolDataset& ds, const DownstreamConfig& cfg) {
  validate(cfg);
  DownstreamResult res;
  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    const std::uint64_t seed = cfg.seed + r;
    LayerStack stack = build_stack(plan, stack_cfg, ckpt, seed);
    res.runs.push_back(train_stack(stack, ds, cfg, seed));
  }
  const auto acc = res.test_accuracies();
  res.test = summarize(acc);
  return res;
}

}  // namespace narx
