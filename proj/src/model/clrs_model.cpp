#include "narx/model/clrs_model.hpp"

#include <algorithm>

#include "narx/core/error.hpp"

namespace narx {

using clrs::AlgoName;
using clrs::ProbeKind;

namespace {

void append_probe(std::vector<double>& out, const clrs::ProbeSet& set, const std::string& name) {
  const auto* p = clrs::find_probe(set, name);
  require(p != nullptr, ErrorKind::Contract, "trace lacks probe '" + name + "'");
  out.insert(out.end(), p->values.begin(), p->values.end());
}

}  // namespace

ClrsBatch make_clrs_batch(AlgoName algo, std::span<const clrs::AlgoInstance> instances,
                          std::span<const clrs::AlgoTrace> traces, bool with_hints, std::size_t fixed_steps) {
  require(!instances.empty() && instances.size() == traces.size(), ErrorKind::Contract,
          "batch needs matching, non-empty instance and trace lists");
  ClrsBatch b;
  b.algo = algo;
  std::vector<GraphInstance> graphs;
  for (const auto& inst : instances) {
    require(inst.algo == algo, ErrorKind::Contract, "mixed algorithms in one batch");
    graphs.push_back(inst.graph);
  }
  b.graphs = batch(graphs);
  b.topo = Topology::from(b.graphs);
  const auto out_name = clrs::output_spec(algo).name;
  for (const auto& t : traces) append_probe(b.output, t.outputs, out_name);

  const auto hint_specs = clrs::hint_specs(algo);
  with_hints = with_hints && !hint_specs.empty();
  if (with_hints) {
    std::size_t longest = 1;
    for (const auto& t : traces) {
      require(!t.hints.empty(), ErrorKind::Contract, "trace has no hints");
      longest = std::max(longest, t.hints.size());
    }
    b.steps = fixed_steps > 0 ? fixed_steps : std::max<std::size_t>(1, longest - 1);
    b.hints.assign(b.steps + 1, std::vector<std::vector<double>>(hint_specs.size()));
    for (std::size_t s = 0; s <= b.steps; ++s)
      for (std::size_t p = 0; p < hint_specs.size(); ++p)
        for (const auto& t : traces)
          append_probe(b.hints[s][p], t.hints[std::min(s, t.hints.size() - 1)], hint_specs[p].name);
  } else {
    b.steps = fixed_steps > 0 ? fixed_steps : b.topo.max_graph_nodes;
  }
  bool pointers = clrs::output_spec(algo).kind == ProbeKind::Pointer;
  if (with_hints)
    for (const auto& s : hint_specs) pointers = pointers || s.kind == ProbeKind::Pointer;
  if (pointers) b.pairs = PairIndex::from(b.topo);
  return b;
}

ClrsModel::ClrsModel(ModelConfig cfg, std::vector<AlgoName> algos, std::uint64_t seed)
    : cfg_(cfg), algos_(std::move(algos)) {
  validate(cfg_);
  require(!algos_.empty(), ErrorKind::Config, "model needs at least one algorithm");
  Rng rng(seed);
  proc_ = ProcessorParams::create(params_, kProcessorPrefix, cfg_, rng);
  const std::size_t h = cfg_.hidden_dim;
  for (auto algo : algos_) {
    const std::string prefix = "algo." + std::string(clrs::to_string(algo)) + ".";
    const auto dims = clrs::feature_dims(algo);
    AlgoHeads heads;
    heads.enc = EncoderParams::create(params_, prefix + "enc.", dims.node, dims.edge, dims.graph, h, rng);
    heads.out = DecoderHead::create(params_, prefix + "out.", clrs::output_spec(algo), h, rng);
    for (const auto& spec : clrs::hint_specs(algo)) {
      heads.hint_enc.push_back(Linear::create(params_, prefix + "hint_enc." + spec.name, 1, h, rng));
      heads.hint_dec.push_back(DecoderHead::create(params_, prefix + "hint.", spec, h, rng));
    }
    heads_.push_back(std::move(heads));
  }
}

bool ClrsModel::supports(AlgoName algo) const {
  return std::find(algos_.begin(), algos_.end(), algo) != algos_.end();
}

const ClrsModel::AlgoHeads& ClrsModel::heads(AlgoName algo) const {
  const auto it = std::find(algos_.begin(), algos_.end(), algo);
  require(it != algos_.end(), ErrorKind::Config,
          "model has no heads for " + std::string(clrs::to_string(algo)));
  return heads_[static_cast<std::size_t>(it - algos_.begin())];
}

namespace {

// Hint state as one input column per node: masks as-is, pointers as the
// relative position of the target node.
Tensor hint_column(const clrs::ProbeSpec& spec, const std::vector<double>& values, const Topology& topo) {
  Tensor col({topo.num_nodes, 1});
  for (std::size_t g = 0; g < topo.num_graphs; ++g) {
    const auto lo = topo.node_offsets[g], hi = topo.node_offsets[g + 1];
    for (auto i = lo; i < hi; ++i)
      col[i] = static_cast<Real>(spec.kind == ProbeKind::Pointer
                                     ? values[i] / static_cast<double>(hi - lo)
                                     : values[i]);
  }
  return col;
}

std::vector<double> hard_prediction(const clrs::ProbeSpec& spec, const Tensor& logits, const Topology& topo,
                                    const PairIndex& pairs) {
  std::vector<double> out(topo.num_nodes);
  for (std::size_t g = 0; g < topo.num_graphs; ++g) {
    const auto lo = topo.node_offsets[g], hi = topo.node_offsets[g + 1];
    for (auto i = lo; i < hi; ++i) {
      if (spec.kind == ProbeKind::Pointer) {
        std::size_t best = 0;
        const auto start = pairs.row_start[i];
        for (std::size_t j = 1; j < hi - lo; ++j)
          if (logits[start + j] > logits[start + best]) best = j;
        out[i] = static_cast<double>(best);
      } else {
        out[i] = logits[i] > 0 ? 1.0 : 0.0;
      }
    }
  }
  return out;
}

}  // namespace

ClrsOutput ClrsModel::forward(Tape& tape, const ClrsBatch& batch, const ForwardOptions& opts) const {
  const AlgoHeads& hd = heads(batch.algo);
  const bool hints = opts.use_hints && !batch.hints.empty() && !hd.hint_enc.empty();
  require(!hints || opts.teacher_forcing <= 0 || opts.rng != nullptr, ErrorKind::Contract,
          "teacher forcing needs a random source");
  const Topology& topo = batch.topo;
  const Latent base = encode(tape, batch.graphs, hd.enc);

  Latent state{tape.constant(Tensor({topo.num_nodes, cfg_.hidden_dim})), base.edges, base.graph};
  std::vector<std::vector<double>> hint_in;
  if (hints) hint_in = batch.hints[0];

  ClrsOutput out;
  std::bernoulli_distribution force(std::clamp(opts.teacher_forcing, 0.0, 1.0));
  for (std::size_t t = 0; t < batch.steps; ++t) {
    Var x = add(base.nodes, state.nodes);
    if (hints)
      for (std::size_t p = 0; p < hd.hint_enc.size(); ++p)
        x = add(x, hd.hint_enc[p](tape, tape.constant(hint_column(hd.hint_dec[p].spec, hint_in[p], topo))));
    state = triplet_step(tape, Latent{x, state.edges, base.graph}, proc_, topo);
    if (!hints) continue;
    std::vector<Var> logits;
    for (const auto& head : hd.hint_dec) logits.push_back(decode(tape, head, state, topo, &batch.pairs));
    if (t + 1 < batch.steps) {
      const bool truth = opts.teacher_forcing > 0 && force(*opts.rng);
      for (std::size_t p = 0; p < logits.size(); ++p)
        hint_in[p] = truth ? batch.hints[t + 1][p]
                           : hard_prediction(hd.hint_dec[p].spec, logits[p].value(), topo, batch.pairs);
    }
    out.hint_logits.push_back(std::move(logits));
  }
  out.output = decode(tape, hd.out, state, topo, &batch.pairs);
  out.final_state = state;
  return out;
}

}  // namespace narx
