#include "narx/training/pretrain.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "narx/core/error.hpp"

namespace narx {

using clrs::AlgoName;

void validate(const LossSpec& loss) {
  require(loss.output_weight >= 0 && loss.hint_weight >= 0, ErrorKind::Config, "loss weights must be >= 0");
  require(loss.teacher_forcing >= 0 && loss.teacher_forcing <= 1, ErrorKind::Config,
          "teacher_forcing must lie in [0, 1]");
}

void validate(const TrainConfig& cfg) {
  require(cfg.steps > 0, ErrorKind::Config, "steps must be positive");
  require(cfg.batch_size > 0, ErrorKind::Config, "batch_size must be positive");
  require(cfg.eval_every > 0, ErrorKind::Config, "eval_every must be positive");
  require(cfg.lr > 0, ErrorKind::Config, "lr must be positive");
}

LossSpec default_loss(AlgoName algo) {
  LossSpec l;
  if (algo == AlgoName::NaiveStringMatcher) {
    l.hint_weight = 1.0;
    l.teacher_forcing = 0.5;
  }
  return l;
}

BatchEval evaluate_batch(Tape& tape, const ClrsModel& model, const ClrsBatch& batch, const LossSpec& loss,
                         const ForwardOptions& opts) {
  const auto out = model.forward(tape, batch, opts);
  const auto spec = clrs::output_spec(batch.algo);
  const PairIndex* pairs = batch.pairs.row ? &batch.pairs : nullptr;
  BatchEval ev;
  ev.hits = probe_hits(out.output.value(), batch.output, spec, batch.topo, pairs);
  ev.loss = scale(probe_loss(out.output, batch.output, spec, batch.topo, pairs), static_cast<Real>(loss.output_weight));
  if (loss.hint_weight > 0 && !out.hint_logits.empty()) {
    const auto specs = clrs::hint_specs(batch.algo);
    const Real w = static_cast<Real>(loss.hint_weight / static_cast<double>(out.hint_logits.size() * specs.size()));
    for (std::size_t t = 0; t < out.hint_logits.size(); ++t)
      for (std::size_t p = 0; p < specs.size(); ++p)
        ev.loss = add(ev.loss, scale(probe_loss(out.hint_logits[t][p], batch.hints[t + 1][p], specs[p],
                                                batch.topo, pairs),
                                     w));
  }
  return ev;
}

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

ClrsBatch sample_batch(AlgoName algo, std::size_t size, std::size_t count, std::uint64_t seed, bool with_hints,
                       std::size_t fixed_steps) {
  std::vector<clrs::AlgoInstance> insts;
  std::vector<clrs::AlgoTrace> traces;
  for (std::size_t i = 0; i < count; ++i) {
    insts.push_back(clrs::sample_instance(algo, size, mix(seed, i)));
    traces.push_back(clrs::execute(insts.back()));
  }
  return make_clrs_batch(algo, insts, traces, with_hints, fixed_steps);
}

}  // namespace

std::vector<ClrsBatch> validation_batches(AlgoName algo, std::size_t size, std::size_t count,
                                          std::size_t batch_size, std::uint64_t seed, bool with_hints,
                                          std::size_t fixed_steps) {
  std::vector<ClrsBatch> out;
  // Validation seeds live in their own stream, disjoint from training draws.
  const std::uint64_t base = mix(seed ^ 0x76616c6964ULL, static_cast<std::uint64_t>(algo));
  for (std::size_t start = 0; start < count; start += batch_size) {
    std::vector<clrs::AlgoInstance> insts;
    std::vector<clrs::AlgoTrace> traces;
    for (std::size_t i = start; i < std::min(count, start + batch_size); ++i) {
      insts.push_back(clrs::sample_instance(algo, size, mix(base, i)));
      traces.push_back(clrs::execute(insts.back()));
    }
    out.push_back(make_clrs_batch(algo, insts, traces, with_hints, fixed_steps));
  }
  return out;
}

double validation_accuracy(const ClrsModel& model, const std::vector<ClrsBatch>& batches, const LossSpec& loss) {
  Hits hits;
  for (const auto& b : batches) {
    Tape tape;
    ForwardOptions opts;
    opts.use_hints = loss.uses_hints();
    hits += evaluate_batch(tape, model, b, loss, opts).hits;
  }
  return hits.rate();
}

PretrainResult pretrain_clrs(const PretrainConfig& cfg) {
  require(!cfg.algos.empty(), ErrorKind::Config, "no algorithms to pretrain on");
  validate(cfg.train);
  validate(cfg.loss);
  require(cfg.val_instances > 0, ErrorKind::Config, "val_instances must be positive");
  PretrainResult res{ClrsModel(cfg.model, cfg.algos, cfg.train.seed), {}, {}, 0};
  ClrsModel& model = res.model;
  const bool hints = cfg.loss.uses_hints();

  std::map<AlgoName, std::vector<ClrsBatch>> val;
  for (auto algo : cfg.algos)
    val[algo] = validation_batches(algo, cfg.val_size, cfg.val_instances, cfg.train.batch_size, cfg.train.seed,
                                   hints, cfg.model.num_steps);

  auto params = model.params().all();
  Adam opt(params, {cfg.train.lr, 0.9, 0.999, 1e-8, cfg.train.grad_clip_norm});
  Rng tf_rng(mix(cfg.train.seed, 0x7466));

  double best = -1;
  std::vector<Tensor> best_values;
  double loss_sum = 0;
  std::size_t loss_count = 0;
  auto evaluate = [&](std::size_t step) {
    std::map<AlgoName, double> acc;
    double total = 0;
    for (auto algo : cfg.algos) {
      acc[algo] = validation_accuracy(model, val[algo], cfg.loss);
      total += acc[algo];
    }
    total /= static_cast<double>(cfg.algos.size());
    res.log.push_back({step, loss_count ? loss_sum / static_cast<double>(loss_count) : 0.0, total});
    loss_sum = 0;
    loss_count = 0;
    if (total > best) {
      best = total;
      res.best_step = step;
      res.val_accuracy = acc;
      best_values.clear();
      for (auto* p : params) best_values.push_back(p->value);
    }
  };

  for (std::size_t step = 1; step <= cfg.train.steps; ++step) {
    const AlgoName algo = cfg.algos[(step - 1) % cfg.algos.size()];
    const auto b = sample_batch(algo, cfg.train_size, cfg.train.batch_size, mix(cfg.train.seed, step), hints,
                                cfg.model.num_steps);
    model.params().zero_grad();
    Tape tape;
    ForwardOptions opts{hints, cfg.loss.teacher_forcing, &tf_rng};
    BatchEval ev;
    try {
      ev = evaluate_batch(tape, model, b, cfg.loss, opts);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Domain) throw;
      fail(ErrorKind::Training, "training diverged at step " + std::to_string(step) + ": " + e.what());
    }
    const double l = ev.loss.value()[0];
    require(std::isfinite(l), ErrorKind::Training, "loss is not finite at step " + std::to_string(step));
    tape.backward(ev.loss);
    opt.step();
    loss_sum += l;
    ++loss_count;
    if (step % cfg.train.eval_every == 0 || step == cfg.train.steps) {
      evaluate(step);
      if (cfg.train.target_accuracy > 0 && best >= cfg.train.target_accuracy) break;
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = best_values[i];
  return res;
}

void write_log_csv(const std::vector<LogRow>& log, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot write '" + path + "'");
  out << "step,train_loss,val_metric\n";
  out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : log) out << r.step << ',' << r.train_loss << ',' << r.val_metric << '\n';
}

}  // namespace narx
