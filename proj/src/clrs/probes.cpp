#include "narx/clrs/probes.hpp"

namespace narx::clrs {

std::string_view to_string(Location loc) {
  switch (loc) {
    case Location::Node: return "node";
    case Location::Edge: return "edge";
    case Location::Graph: return "graph";
  }
  return "?";
}

std::string_view to_string(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::Pointer: return "pointer";
    case ProbeKind::Mask: return "mask";
    case ProbeKind::Categorical: return "categorical";
    case ProbeKind::Scalar: return "scalar";
  }
  return "?";
}

const ProbeValue* find_probe(const ProbeSet& set, std::string_view name) {
  for (const auto& p : set)
    if (p.spec.name == name) return &p;
  return nullptr;
}

ProbeSpec output_spec(AlgoName algo) {
  using A = AlgoName;
  const auto node_ptr = [](std::string n) { return ProbeSpec{std::move(n), Location::Node, ProbeKind::Pointer}; };
  const auto node_mask = [](std::string n) { return ProbeSpec{std::move(n), Location::Node, ProbeKind::Mask}; };
  const auto edge_mask = [](std::string n) { return ProbeSpec{std::move(n), Location::Edge, ProbeKind::Mask}; };
  const auto graph_scalar = [](std::string n, double scale) {
    return ProbeSpec{std::move(n), Location::Graph, ProbeKind::Scalar, 0, scale};
  };
  switch (algo) {
    case A::ActivitySelector: return node_mask("selected");
    case A::ArticulationPoints: return node_mask("is_cut");
    case A::BellmanFord:
    case A::BFS:
    case A::DAGShortestPaths:
    case A::Dijkstra:
    case A::MSTPrim: return node_ptr("pi");
    case A::BinarySearch: return node_mask("return");
    case A::Bridges: return edge_mask("is_bridge");
    case A::BubbleSort:
    case A::InsertionSort:
    case A::Quicksort: return node_ptr("pred");
    case A::FindMaxSubarray: return node_mask("in_subarray");
    case A::GrahamScan:
    case A::JarvisMarch: return node_mask("in_hull");
    case A::LCSLength: return graph_scalar("length", 4.0);
    case A::MatrixChainOrder: return graph_scalar("cost", 100.0);
    case A::Minimum: return node_mask("min");
    case A::MSTKruskal: return edge_mask("in_mst");
    case A::NaiveStringMatcher: return node_ptr("match");
    case A::OptimalBST: return graph_scalar("cost", 100.0);
    case A::SegmentsIntersect:
      return ProbeSpec{"intersect", Location::Graph, ProbeKind::Categorical, 2};
    case A::TaskScheduling: return node_mask("on_time");
    case A::TopologicalSort: return node_ptr("order_pred");
  }
  return {};
}

std::vector<ProbeSpec> hint_specs(AlgoName algo) {
  using A = AlgoName;
  const auto ptr = [](std::string n) { return ProbeSpec{std::move(n), Location::Node, ProbeKind::Pointer}; };
  const auto mask = [](std::string n) { return ProbeSpec{std::move(n), Location::Node, ProbeKind::Mask}; };
  switch (algo) {
    case A::BFS: return {mask("reach_h"), ptr("pi_h")};
    case A::BellmanFord: return {mask("reach_h"), ptr("pi_h")};
    case A::Dijkstra: return {mask("settled_h"), ptr("pi_h")};
    case A::BubbleSort:
    case A::InsertionSort: return {ptr("pred_h")};
    case A::NaiveStringMatcher: return {ptr("s_h")};
    default: return {};
  }
}

}  // namespace narx::clrs
