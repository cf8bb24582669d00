#pragma once

#include <array>
#include <string>
#include <string_view>

namespace narx::clrs {

enum class AlgoName {
  ActivitySelector,
  ArticulationPoints,
  BellmanFord,
  BFS,
  BinarySearch,
  Bridges,
  BubbleSort,
  DAGShortestPaths,
  Dijkstra,
  FindMaxSubarray,
  GrahamScan,
  InsertionSort,
  JarvisMarch,
  LCSLength,
  MatrixChainOrder,
  Minimum,
  MSTKruskal,
  MSTPrim,
  NaiveStringMatcher,
  OptimalBST,
  Quicksort,
  SegmentsIntersect,
  TaskScheduling,
  TopologicalSort,
};

inline constexpr std::size_t kNumAlgorithms = 24;

const std::array<AlgoName, kNumAlgorithms>& all_algorithms();

/// snake_case identifier used on the command line and in trace files.
std::string_view to_string(AlgoName algo);

/// Parses a snake_case name (case-insensitive). Unknown names raise a usage
/// error listing the valid ones.
AlgoName parse_algo(std::string_view name);

std::string valid_algo_names();

/// Algorithms that can emit per-step hint trajectories.
bool hints_enabled(AlgoName algo);

}  // namespace narx::clrs
