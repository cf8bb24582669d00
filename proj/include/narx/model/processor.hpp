#pragma once

#include "narx/graph/graph.hpp"
#include "narx/model/params.hpp"

namespace narx {

struct ModelConfig {
  std::size_t hidden_dim = 64;
  std::size_t triplet_dim = 8;
  /// Processor rounds for CLRS tasks; 0 picks the trace length (or n).
  std::size_t num_steps = 0;
};

void validate(const ModelConfig& cfg);

/// Largest graph the triplet layer accepts.
inline constexpr std::size_t kMaxTripletNodes = 64;

/// Index structure of a batch shared by all layers of one forward pass.
struct Topology {
  std::size_t num_nodes = 0;
  std::size_t num_graphs = 0;
  std::size_t max_graph_nodes = 0;
  IndexList src, dst;      // per edge
  IndexList edge_graph;    // per edge
  IndexList node_graph;    // per node
  IndexList k_begin, k_end;  // node range of each edge's graph
  std::vector<std::size_t> node_offsets;

  static Topology from(const GraphBatch& b);
};

/// Node, edge and graph embeddings, all [rows, hidden].
struct Latent {
  Var nodes;
  Var edges;
  Var graph;
};

/// One triplet message-passing layer. Input and output widths are both
/// hidden_dim so the same weights fit any position in a stack.
struct ProcessorParams {
  // The first layer of each two-layer MLP over concatenated inputs is kept
  // as one block per input so node terms are computed once per node rather
  // than once per edge. Blocks share one bias and the concatenation's
  // fan-in.
  Linear msg_src;    // h_src block, carries the bias
  Linear msg_dst;    // h_dst block
  Linear msg_edge;   // h_edge block
  Linear msg_graph;  // h_graph block
  Linear msg_out;    // second message layer
  Linear trip_src;   // triplet MLP: h_i block, carries the bias
  Linear trip_dst;   // h_j block
  Linear trip_edge;  // h_ij block
  Linear trip_node;  // h_k block
  Linear trip_out;   // hidden -> triplet_dim
  Linear edge_out;   // triplet_dim -> hidden, bias-free
  Mlp update;        // (h, aggregated message) -> hidden

  static ProcessorParams create(ParamSet& ps, const std::string& prefix, const ModelConfig& cfg, Rng& rng);
  static ProcessorParams bind(ParamSet& ps, const std::string& prefix);

  std::vector<Parameter*> params() const;
  /// Zeroes every triplet-path weight, which makes triplet_step collapse to
  /// message_step.
  void zero_triplet() const;
  std::size_t hidden_dim() const { return update.second.out_dim(); }
  std::size_t triplet_dim() const { return trip_out.out_dim(); }
};

/// Processor parameter names relative to the prefix, in creation order.
std::vector<std::string> processor_param_names();

/// Max-aggregated messages followed by the node update; returns new nodes.
Var message_step(Tape& tape, const Latent& in, const ProcessorParams& proc, const Topology& topo);

/// Triplet edge update followed by message_step on the updated edges. Edge
/// states are residual: h_ij + edge_out(max_k t_ijk).
Latent triplet_step(Tape& tape, const Latent& in, const ProcessorParams& proc, const Topology& topo);

}  // namespace narx
