#include "narx/model/heads.hpp"

#include "narx/core/error.hpp"

namespace narx {

using clrs::Location;
using clrs::ProbeKind;

EncoderParams EncoderParams::create(ParamSet& ps, const std::string& prefix, std::size_t node_dim,
                                    std::size_t edge_dim, std::size_t graph_dim, std::size_t hidden, Rng& rng) {
  return {Linear::create(ps, prefix + "node", node_dim, hidden, rng),
          Linear::create(ps, prefix + "edge", edge_dim, hidden, rng),
          Linear::create(ps, prefix + "graph", graph_dim, hidden, rng)};
}

void EncoderParams::collect(std::vector<Parameter*>& out) const {
  node.collect(out);
  edge.collect(out);
  graph.collect(out);
}

namespace {

void check_width(const Tensor& feats, std::size_t want, const char* what) {
  const std::size_t got = feats.rank() == 2 ? feats.shape()[1] : 0;
  require(got == want, ErrorKind::Dimension,
          std::string(what) + " features have width " + std::to_string(got) + ", encoder expects " +
              std::to_string(want));
}

}  // namespace

Latent encode(Tape& tape, const GraphBatch& batch, const EncoderParams& enc) {
  check_width(batch.node_feats, enc.node.in_dim(), "node");
  check_width(batch.graph_feats, enc.graph.in_dim(), "graph");
  // Edge features of an edgeless batch may be [0, 0].
  if (batch.num_edges() > 0) check_width(batch.edge_feats, enc.edge.in_dim(), "edge");
  Tensor edge_feats = batch.num_edges() > 0 ? batch.edge_feats : Tensor({0, enc.edge.in_dim()});
  return {enc.node(tape, tape.constant(batch.node_feats)), enc.edge(tape, tape.constant(std::move(edge_feats))),
          enc.graph(tape, tape.constant(batch.graph_feats))};
}

PairIndex PairIndex::from(const Topology& topo) {
  std::vector<Index> row, col;
  PairIndex p;
  p.row_start.resize(topo.num_nodes);
  for (std::size_t g = 0; g < topo.num_graphs; ++g) {
    const auto lo = topo.node_offsets[g], hi = topo.node_offsets[g + 1];
    for (auto i = lo; i < hi; ++i) {
      p.row_start[i] = row.size();
      for (auto j = lo; j < hi; ++j) {
        row.push_back(static_cast<Index>(i));
        col.push_back(static_cast<Index>(j));
      }
    }
  }
  p.row = make_index(std::move(row));
  p.col = make_index(std::move(col));
  return p;
}

DecoderHead DecoderHead::create(ParamSet& ps, const std::string& prefix, const clrs::ProbeSpec& spec,
                                std::size_t hidden, Rng& rng) {
  DecoderHead d;
  d.spec = spec;
  const std::string name = prefix + spec.name;
  const auto unsupported = [&] {
    fail(ErrorKind::Config, "no decoder for " + std::string(to_string(spec.location)) + " " +
                                std::string(to_string(spec.kind)) + " probe '" + spec.name + "'");
  };
  switch (spec.location) {
    case Location::Node:
      if (spec.kind == ProbeKind::Pointer) {
        d.a = Linear::create(ps, name + ".query", hidden, hidden, rng, false);
        d.b = Linear::create(ps, name + ".key", hidden, hidden, rng, false);
      } else if (spec.kind == ProbeKind::Mask || spec.kind == ProbeKind::Scalar) {
        d.a = Linear::create(ps, name, hidden, 1, rng);
      } else {
        unsupported();
      }
      break;
    case Location::Edge:
      if (spec.kind != ProbeKind::Mask && spec.kind != ProbeKind::Scalar) unsupported();
      d.a = Linear::create(ps, name, 3 * hidden, 1, rng);
      break;
    case Location::Graph:
      if (spec.kind == ProbeKind::Pointer) unsupported();
      d.a = Linear::create(ps, name, 2 * hidden, spec.kind == ProbeKind::Categorical ? spec.categories : 1,
                           rng);
      break;
  }
  return d;
}

void DecoderHead::collect(std::vector<Parameter*>& out) const {
  if (a.w) a.collect(out);
  if (b.w) b.collect(out);
}

Var pool_nodes(Var nodes, const Topology& topo) {
  return concat_cols(segment_reduce(ReduceOp::Max, nodes, topo.node_graph, topo.num_graphs),
                     segment_reduce(ReduceOp::Mean, nodes, topo.node_graph, topo.num_graphs));
}

Var decode(Tape& tape, const DecoderHead& head, const Latent& latent, const Topology& topo,
           const PairIndex* pairs) {
  require(head.a.w != nullptr, ErrorKind::Config, "decoder head '" + head.spec.name + "' is empty");
  switch (head.spec.location) {
    case Location::Node:
      if (head.spec.kind == ProbeKind::Pointer) {
        require(pairs != nullptr, ErrorKind::Contract, "pointer decoding needs a pair index");
        Var q = gather_rows(head.a(tape, latent.nodes), pairs->row);
        Var k = gather_rows(head.b(tape, latent.nodes), pairs->col);
        return sum_cols(mul(q, k));
      }
      return head.a(tape, latent.nodes);
    case Location::Edge: {
      Var hs = gather_rows(latent.nodes, topo.src);
      Var hd = gather_rows(latent.nodes, topo.dst);
      return head.a(tape, concat_cols(concat_cols(hs, hd), latent.edges));
    }
    case Location::Graph: return head.a(tape, pool_nodes(latent.nodes, topo));
  }
  fail(ErrorKind::Config, "unknown probe '" + head.spec.name + "'");
}

}  // namespace narx
