#include "narx/model/processor.hpp"

#include "narx/core/error.hpp"

namespace narx {

void validate(const ModelConfig& cfg) {
  require(cfg.hidden_dim > 0, ErrorKind::Config, "hidden_dim must be positive");
  require(cfg.triplet_dim > 0, ErrorKind::Config, "triplet_dim must be positive");
}

Topology Topology::from(const GraphBatch& b) {
  Topology t;
  t.num_nodes = b.num_nodes;
  t.num_graphs = b.num_graphs;
  t.node_offsets = b.node_offsets;
  std::vector<Index> src, dst, kb, ke;
  src.reserve(b.num_edges());
  dst.reserve(b.num_edges());
  for (std::size_t e = 0; e < b.num_edges(); ++e) {
    src.push_back(b.edges[e].src);
    dst.push_back(b.edges[e].dst);
    const auto g = static_cast<std::size_t>(b.edge_graph[e]);
    kb.push_back(static_cast<Index>(b.node_offsets[g]));
    ke.push_back(static_cast<Index>(b.node_offsets[g + 1]));
  }
  for (std::size_t g = 0; g < b.num_graphs; ++g) t.max_graph_nodes = std::max(t.max_graph_nodes, b.nodes_in(g));
  t.src = make_index(std::move(src));
  t.dst = make_index(std::move(dst));
  t.edge_graph = make_index(b.edge_graph);
  t.node_graph = make_index(b.graph_index);
  t.k_begin = make_index(std::move(kb));
  t.k_end = make_index(std::move(ke));
  return t;
}

std::vector<std::string> processor_param_names() {
  return {"msg_src.w",   "msg_src.b",   "msg_dst.w",  "msg_edge.w",  "msg_graph.w", "msg_out.w",
          "msg_out.b",   "trip_src.w",  "trip_src.b", "trip_dst.w",  "trip_edge.w", "trip_node.w",
          "trip_out.w",  "trip_out.b",  "edge_out.w", "update.l1.w", "update.l1.b", "update.l2.w",
          "update.l2.b"};
}

ProcessorParams ProcessorParams::create(ParamSet& ps, const std::string& prefix, const ModelConfig& cfg,
                                        Rng& rng) {
  validate(cfg);
  const std::size_t h = cfg.hidden_dim, t = cfg.triplet_dim;
  ProcessorParams p;
  p.msg_src = Linear::create(ps, prefix + "msg_src", h, h, rng, true, 4 * h);
  p.msg_dst = Linear::create(ps, prefix + "msg_dst", h, h, rng, false, 4 * h);
  p.msg_edge = Linear::create(ps, prefix + "msg_edge", h, h, rng, false, 4 * h);
  p.msg_graph = Linear::create(ps, prefix + "msg_graph", h, h, rng, false, 4 * h);
  p.msg_out = Linear::create(ps, prefix + "msg_out", h, h, rng);
  p.trip_src = Linear::create(ps, prefix + "trip_src", h, h, rng, true, 4 * h);
  p.trip_dst = Linear::create(ps, prefix + "trip_dst", h, h, rng, false, 4 * h);
  p.trip_edge = Linear::create(ps, prefix + "trip_edge", h, h, rng, false, 4 * h);
  p.trip_node = Linear::create(ps, prefix + "trip_node", h, h, rng, false, 4 * h);
  p.trip_out = Linear::create(ps, prefix + "trip_out", h, t, rng);
  p.edge_out = Linear::create(ps, prefix + "edge_out", t, h, rng, false);
  p.update = Mlp::create(ps, prefix + "update", 2 * h, h, h, rng);
  return p;
}

ProcessorParams ProcessorParams::bind(ParamSet& ps, const std::string& prefix) {
  ProcessorParams p;
  p.msg_src = Linear::bind(ps, prefix + "msg_src");
  p.msg_dst = Linear::bind(ps, prefix + "msg_dst", false);
  p.msg_edge = Linear::bind(ps, prefix + "msg_edge", false);
  p.msg_graph = Linear::bind(ps, prefix + "msg_graph", false);
  p.msg_out = Linear::bind(ps, prefix + "msg_out");
  p.trip_src = Linear::bind(ps, prefix + "trip_src");
  p.trip_dst = Linear::bind(ps, prefix + "trip_dst", false);
  p.trip_edge = Linear::bind(ps, prefix + "trip_edge", false);
  p.trip_node = Linear::bind(ps, prefix + "trip_node", false);
  p.trip_out = Linear::bind(ps, prefix + "trip_out");
  p.edge_out = Linear::bind(ps, prefix + "edge_out", false);
  p.update = {Linear::bind(ps, prefix + "update.l1"), Linear::bind(ps, prefix + "update.l2")};
  return p;
}

std::vector<Parameter*> ProcessorParams::params() const {
  std::vector<Parameter*> out;
  for (const Linear* l : {&msg_src, &msg_dst, &msg_edge, &msg_graph, &msg_out, &trip_src, &trip_dst, &trip_edge,
                          &trip_node, &trip_out, &edge_out})
    l->collect(out);
  update.collect(out);
  return out;
}

void ProcessorParams::zero_triplet() const {
  std::vector<Parameter*> ps;
  for (const Linear* l : {&trip_src, &trip_dst, &trip_edge, &trip_node, &trip_out, &edge_out}) l->collect(ps);
  for (auto* p : ps)
    for (Real& v : p->value.storage()) v = Real(0);
}

Var message_step(Tape& tape, const Latent& in, const ProcessorParams& proc, const Topology& topo) {
  Var pre = add(add(gather_rows(proc.msg_src(tape, in.nodes), topo.src),
                    gather_rows(proc.msg_dst(tape, in.nodes), topo.dst)),
                add(proc.msg_edge(tape, in.edges), gather_rows(proc.msg_graph(tape, in.graph), topo.edge_graph)));
  Var msg = proc.msg_out(tape, relu(pre));
  Var agg = segment_reduce(ReduceOp::Max, msg, topo.dst, topo.num_nodes);
  return proc.update(tape, concat_cols(in.nodes, agg));
}

Latent triplet_step(Tape& tape, const Latent& in, const ProcessorParams& proc, const Topology& topo) {
  require(topo.max_graph_nodes <= kMaxTripletNodes, ErrorKind::Config,
          "triplet layer supports graphs up to " + std::to_string(kMaxTripletNodes) + " nodes, got " +
              std::to_string(topo.max_graph_nodes));
  Var u = add(add(gather_rows(proc.trip_src(tape, in.nodes), topo.src),
                  gather_rows(proc.trip_dst(tape, in.nodes), topo.dst)),
              proc.trip_edge(tape, in.edges));
  Var c = proc.trip_node(tape, in.nodes);
  Var t = triplet_max(u, c, tape.param(*proc.trip_out.w), tape.param(*proc.trip_out.b), topo.k_begin,
                      topo.k_end);
  Latent out = in;
  out.edges = add(in.edges, proc.edge_out(tape, t));
  out.nodes = message_step(tape, out, proc, topo);
  return out;
}

}  // namespace narx
