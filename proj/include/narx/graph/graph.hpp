#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "narx/tensor/kernels.hpp"
#include "narx/tensor/tensor.hpp"

namespace narx {

using kernels::Index;

struct Edge {
  Index src = 0;
  Index dst = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// One directed graph with dense features. Undirected inputs carry both
/// (u, v) and (v, u).
struct GraphInstance {
  std::size_t num_nodes = 0;
  std::vector<Edge> edges;
  Tensor node_feats;   // [num_nodes, d_n]
  Tensor edge_feats;   // [num_edges, d_e]
  Tensor graph_feats;  // [d_g]
  std::optional<std::vector<Real>> label;

  std::size_t num_edges() const noexcept { return edges.size(); }
  std::size_t node_dim() const noexcept { return node_feats.rank() == 2 ? node_feats.shape()[1] : 0; }
  std::size_t edge_dim() const noexcept { return edge_feats.rank() == 2 ? edge_feats.shape()[1] : 0; }
  std::size_t graph_dim() const noexcept { return graph_feats.size(); }

  friend bool operator==(const GraphInstance&, const GraphInstance&) = default;
};

struct Violation {
  enum class Kind { Index, Shape };
  Kind kind;
  std::string message;
};

/// All invariant violations of `g`; empty means valid.
std::vector<Violation> validate(const GraphInstance& g);

/// Several graphs concatenated into one disjoint graph. Edges of graph i are
/// shifted by the number of nodes in graphs 0..i-1.
struct GraphBatch {
  std::size_t num_graphs = 0;
  std::size_t num_nodes = 0;
  std::vector<Edge> edges;
  Tensor node_feats;   // [num_nodes, d_n]
  Tensor edge_feats;   // [num_edges, d_e]
  Tensor graph_feats;  // [num_graphs, d_g]
  std::vector<Index> graph_index;  // node -> graph, nondecreasing
  std::vector<Index> edge_graph;   // edge -> graph
  std::vector<std::size_t> node_offsets;  // num_graphs + 1
  std::vector<std::size_t> edge_offsets;  // num_graphs + 1
  std::vector<std::optional<std::vector<Real>>> labels;

  std::size_t num_edges() const noexcept { return edges.size(); }
  std::size_t nodes_in(std::size_t g) const { return node_offsets[g + 1] - node_offsets[g]; }
};

GraphBatch batch(std::span<const GraphInstance> graphs);
std::vector<GraphInstance> unbatch(const GraphBatch& b);

/// Complete digraph on n nodes without self-loops, edges in (src, dst) order.
std::vector<Edge> complete_digraph(std::size_t n);

}  // namespace narx
