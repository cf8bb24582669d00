#pragma once

#include "narx/clrs/probes.hpp"
#include "narx/model/processor.hpp"

namespace narx {

/// Linear maps from raw node / edge / graph features to hidden_dim.
struct EncoderParams {
  Linear node;
  Linear edge;
  Linear graph;

  static EncoderParams create(ParamSet& ps, const std::string& prefix, std::size_t node_dim,
                              std::size_t edge_dim, std::size_t graph_dim, std::size_t hidden, Rng& rng);
  void collect(std::vector<Parameter*>& out) const;
};

/// Feature widths that do not match the encoder raise a dimension error.
Latent encode(Tape& tape, const GraphBatch& batch, const EncoderParams& enc);

/// Every ordered node pair (i, j) inside one graph, row-major per graph, so
/// the scores of row i are the contiguous range [row_start[i], row_start[i] + n_g).
struct PairIndex {
  IndexList row, col;
  std::vector<std::size_t> row_start;  // per node
  std::size_t size() const { return row->size(); }

  static PairIndex from(const Topology& topo);
};

/// Output head for one probe. Which linear maps are used depends on the kind:
/// node mask/scalar `a`: h -> 1; pointer `a`, `b`: bilinear query/key;
/// edge mask `a`: (h_i, h_j, h_ij) -> 1; graph heads `a`: (max, mean pool) -> k.
struct DecoderHead {
  clrs::ProbeSpec spec;
  Linear a;
  Linear b;

  /// Unsupported probe shapes raise a config error.
  static DecoderHead create(ParamSet& ps, const std::string& prefix, const clrs::ProbeSpec& spec,
                            std::size_t hidden, Rng& rng);
  void collect(std::vector<Parameter*>& out) const;
};

/// Max-pooled node embeddings next to mean-pooled ones, [graphs, 2 * hidden].
Var pool_nodes(Var nodes, const Topology& topo);

/// Logits: node heads [nodes, 1], pointer [pairs, 1], edge [edges, 1],
/// graph [graphs, k]. `pairs` is required for pointer heads.
Var decode(Tape& tape, const DecoderHead& head, const Latent& latent, const Topology& topo,
           const PairIndex* pairs = nullptr);

}  // namespace narx
