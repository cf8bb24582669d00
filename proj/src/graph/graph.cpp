#include "narx/graph/graph.hpp"

#include <algorithm>

#include "narx/core/error.hpp"

namespace narx {

std::vector<Violation> validate(const GraphInstance& g) {
  std::vector<Violation> out;
  const auto n = static_cast<Index>(g.num_nodes);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto [s, d] = g.edges[e];
    if (s < 0 || s >= n || d < 0 || d >= n)
      out.push_back({Violation::Kind::Index, "edge " + std::to_string(e) + " (" +
                                                 std::to_string(s) + "," + std::to_string(d) +
                                                 ") outside [0, " + std::to_string(n) + ")"});
  }
  if (g.node_feats.rank() != 2 || g.node_feats.shape()[0] != g.num_nodes)
    out.push_back({Violation::Kind::Shape, "node_feats shape " + shape_str(g.node_feats.shape()) +
                                               " does not have " + std::to_string(g.num_nodes) +
                                               " rows"});
  if (g.edge_feats.rank() != 2 || g.edge_feats.shape()[0] != g.edges.size())
    out.push_back({Violation::Kind::Shape, "edge_feats shape " + shape_str(g.edge_feats.shape()) +
                                               " does not have " + std::to_string(g.edges.size()) +
                                               " rows"});
  if (g.graph_feats.rank() != 1)
    out.push_back({Violation::Kind::Shape,
                   "graph_feats must be a vector, got " + shape_str(g.graph_feats.shape())});
  return out;
}

GraphBatch batch(std::span<const GraphInstance> graphs) {
  require(!graphs.empty(), ErrorKind::Contract, "batch: no graphs");
  const std::size_t dn = graphs[0].node_dim(), de = graphs[0].edge_dim(),
                    dg = graphs[0].graph_dim();
  GraphBatch b;
  b.num_graphs = graphs.size();
  b.node_offsets.assign(1, 0);
  b.edge_offsets.assign(1, 0);
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const auto& g = graphs[i];
    require(g.node_dim() == dn && g.edge_dim() == de && g.graph_dim() == dg,
            ErrorKind::Dimension,
            "batch: graph " + std::to_string(i) + " has feature dims (" +
                std::to_string(g.node_dim()) + "," + std::to_string(g.edge_dim()) + "," +
                std::to_string(g.graph_dim()) + "), expected (" + std::to_string(dn) + "," +
                std::to_string(de) + "," + std::to_string(dg) + ")");
    b.node_offsets.push_back(b.node_offsets.back() + g.num_nodes);
    b.edge_offsets.push_back(b.edge_offsets.back() + g.edges.size());
  }
  b.num_nodes = b.node_offsets.back();
  const std::size_t num_edges = b.edge_offsets.back();
  b.node_feats = Tensor({b.num_nodes, dn});
  b.edge_feats = Tensor({num_edges, de});
  b.graph_feats = Tensor({b.num_graphs, dg});
  b.edges.reserve(num_edges);
  b.graph_index.reserve(b.num_nodes);
  b.edge_graph.reserve(num_edges);
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const auto& g = graphs[i];
    const auto shift = static_cast<Index>(b.node_offsets[i]);
    for (const auto& e : g.edges) {
      b.edges.push_back({e.src + shift, e.dst + shift});
      b.edge_graph.push_back(static_cast<Index>(i));
    }
    b.graph_index.insert(b.graph_index.end(), g.num_nodes, static_cast<Index>(i));
    std::copy(g.node_feats.data().begin(), g.node_feats.data().end(),
              b.node_feats.data().begin() + static_cast<std::ptrdiff_t>(b.node_offsets[i] * dn));
    std::copy(g.edge_feats.data().begin(), g.edge_feats.data().end(),
              b.edge_feats.data().begin() + static_cast<std::ptrdiff_t>(b.edge_offsets[i] * de));
    std::copy(g.graph_feats.data().begin(), g.graph_feats.data().end(),
              b.graph_feats.data().begin() + static_cast<std::ptrdiff_t>(i * dg));
    b.labels.push_back(g.label);
  }
  return b;
}

std::vector<GraphInstance> unbatch(const GraphBatch& b) {
  std::vector<GraphInstance> out;
  const std::size_t dn = b.node_feats.cols(), de = b.edge_feats.cols(), dg = b.graph_feats.cols();
  for (std::size_t i = 0; i < b.num_graphs; ++i) {
    GraphInstance g;
    const std::size_t n0 = b.node_offsets[i], n1 = b.node_offsets[i + 1];
    const std::size_t e0 = b.edge_offsets[i], e1 = b.edge_offsets[i + 1];
    g.num_nodes = n1 - n0;
    const auto shift = static_cast<Index>(n0);
    for (std::size_t e = e0; e < e1; ++e)
      g.edges.push_back({b.edges[e].src - shift, b.edges[e].dst - shift});
    auto slice = [](const Tensor& t, std::size_t r0, std::size_t r1, std::size_t d) {
      std::vector<Real> v(t.data().begin() + static_cast<std::ptrdiff_t>(r0 * d),
                          t.data().begin() + static_cast<std::ptrdiff_t>(r1 * d));
      return Tensor({r1 - r0, d}, std::move(v));
    };
    g.node_feats = slice(b.node_feats, n0, n1, dn);
    g.edge_feats = slice(b.edge_feats, e0, e1, de);
    g.graph_feats = slice(b.graph_feats, i, i + 1, dg).reshaped({dg});
    g.label = b.labels[i];
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<Edge> complete_digraph(std::size_t n) {
  std::vector<Edge> edges;
  edges.reserve(n * (n ? n - 1 : 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) edges.push_back({static_cast<Index>(i), static_cast<Index>(j)});
  return edges;
}

}  // namespace narx
