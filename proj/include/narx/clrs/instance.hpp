#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "narx/clrs/probes.hpp"
#include "narx/graph/graph.hpp"

namespace narx::clrs {

inline constexpr std::size_t kMinSize = 4;
inline constexpr std::size_t kMaxSize = 64;
/// Geometry coordinates are integers on a 2^20 grid over the unit square.
inline constexpr std::int64_t kCoordScale = std::int64_t{1} << 20;

struct GraphProblem {
  std::size_t n = 0;
  std::vector<Edge> edges;      // directed; undirected graphs hold both arcs
  std::vector<double> weights;  // one per directed edge
  Index source = 0;
  bool undirected = true;
};

/// Arrays. Meaning of `a`, `b`, `target` depends on the algorithm:
/// sorts/minimum/kadane use `a`; binary search adds `target`; activity
/// selector holds start/finish in a/b; task scheduling deadline/penalty;
/// matrix chain the dimension vector in `a`; optimal BST key weights in `a`
/// (a[0] unused) and dummy weights in `b`.
struct ArrayProblem {
  std::vector<double> a;
  std::vector<double> b;
  double target = 0;
};

struct StringProblem {
  std::vector<int> text;
  std::vector<int> pattern;
};
inline constexpr int kAlphabet = 4;

struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct GeometryProblem {
  std::vector<Point> points;
};

using Problem = std::variant<GraphProblem, ArrayProblem, StringProblem, GeometryProblem>;

/// A sampled problem plus its model-facing graph encoding. Node features are
/// the node-located input probes concatenated (categoricals one-hot), same
/// for edges; graph features fall back to a constant 1.
struct AlgoInstance {
  AlgoName algo = AlgoName::BFS;
  std::uint64_t seed = 0;
  std::size_t size = 0;
  Problem problem;
  ProbeSet inputs;
  GraphInstance graph;
};

/// Deterministic in (algo, size, seed). Sizes outside [4, 64] raise a config
/// error.
AlgoInstance sample_instance(AlgoName algo, std::size_t size, std::uint64_t seed);

/// Rebuilds inputs and graph encoding from a problem (used by the sampler and
/// by tests that construct problems by hand).
AlgoInstance make_instance(AlgoName algo, Problem problem, std::uint64_t seed = 0);

GraphInstance encode_inputs(const ProbeSet& inputs, std::size_t num_nodes,
                            std::vector<Edge> edges);

/// Feature widths the encoding of `algo` produces.
struct FeatureDims {
  std::size_t node = 0, edge = 0, graph = 0;
};
FeatureDims feature_dims(AlgoName algo);

/// Nodes of the encoded graph (4 for segments intersect, the size otherwise).
std::size_t encoded_nodes(const AlgoInstance& inst);

}  // namespace narx::clrs
