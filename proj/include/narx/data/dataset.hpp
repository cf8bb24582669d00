#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "narx/graph/graph.hpp"

namespace narx {

struct Split {
  std::vector<std::size_t> train, valid, test;

  friend bool operator==(const Split&, const Split&) = default;
};

/// Distinct values of one integer feature column, ascending. Value
/// values[i] maps to one-hot slot i.
struct OneHotColumn {
  std::vector<std::int64_t> values;

  friend bool operator==(const OneHotColumn&, const OneHotColumn&) = default;
};

/// How integer feature columns were expanded into one-hot node and edge
/// features. Without edge columns every edge carries the constant [1].
struct FeatureExpansion {
  std::vector<OneHotColumn> node;
  std::vector<OneHotColumn> edge;

  std::size_t node_width() const;
  std::size_t edge_width() const;

  friend bool operator==(const FeatureExpansion&, const FeatureExpansion&) = default;
};

/// Binary graph classification data. Undirected edges are stored as
/// consecutive (u, v), (v, u) pairs; graph features are the constant [1].
struct MolDataset {
  std::string name;
  std::vector<GraphInstance> graphs;
  std::vector<int> labels;
  Split split;
  FeatureExpansion expansion;
  std::size_t dropped_missing_labels = 0;

  std::size_t node_dim() const { return expansion.node_width(); }
  std::size_t edge_dim() const { return expansion.edge_width(); }
};

/// Builds the expansion table from raw integer rows and applies it.
/// `node_rows` / `edge_rows` hold one row per node / undirected edge.
FeatureExpansion make_expansion(const std::vector<std::vector<std::int64_t>>& node_rows,
                                const std::vector<std::vector<std::int64_t>>& edge_rows);
std::vector<Real> expand_row(const std::vector<OneHotColumn>& cols, const std::vector<std::int64_t>& row);

struct LoadOptions {
  /// Column of graph-label.csv used as the label; -1 picks 1 for
  /// clintox-named directories (the toxicity column) and 0 otherwise.
  int label_column = -1;
};

/// Reads an OGB raw-CSV directory:
///   edge.csv, num-node-list.csv, num-edge-list.csv, node-feat.csv,
///   graph-label.csv, optional edge-feat.csv, optional split/{train,valid,test}.csv.
/// Edge endpoints are graph-local. Graphs whose label is missing (nan or
/// empty) are dropped and counted; split indices are remapped. Malformed
/// rows raise an ingestion error naming the file and line.
MolDataset load_ogb_csv_dir(const std::string& dir, const LoadOptions& opts = {});

/// Writes `ds` in the layout read by load_ogb_csv_dir. Only the first edge of
/// each undirected pair is written.
void export_ogb_csv_dir(const MolDataset& ds, const std::string& dir);

/// Shuffled split with sizes round(n * f) for train and valid and the rest
/// in test. Fractions must be non-negative and sum to 1.
Split make_split(std::size_t n, std::array<double, 3> fractions, std::uint64_t seed);

enum class LabelRule { PathLength, FiveCycle };

struct SyntheticSpec {
  std::size_t num_graphs = 500;
  std::size_t min_nodes = 8;
  std::size_t max_nodes = 16;
  LabelRule rule = LabelRule::PathLength;
  /// PathLength: positive when the two marked nodes are more than
  /// `threshold` hops apart.
  std::size_t threshold = 3;
  /// Extra random edges per node on top of a spanning tree.
  double extra_edge_rate = 0.15;
  std::uint64_t seed = 0;
  std::array<double, 3> split{0.8, 0.1, 0.1};
};

/// Random connected sparse graphs with node features (marked flag, type in
/// 0..3) and edge features (bond type in 0..2). Labels are balanced to
/// exactly half positive (rounded down) by rejection; when that fails
/// within the attempt budget a generation error is raised.
MolDataset gen_synthetic(const SyntheticSpec& spec);

/// Nodes whose marked flag (node column 0) is 1.
std::vector<std::size_t> marked_nodes(const MolDataset& ds, std::size_t graph);
/// Hop distance from a to b, or -1 when unreachable.
int hop_distance(const GraphInstance& g, std::size_t a, std::size_t b);
/// Whether the graph has a simple cycle through exactly five nodes.
bool has_five_cycle(const GraphInstance& g);

}  // namespace narx
