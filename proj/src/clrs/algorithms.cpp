#include "narx/clrs/algorithms.hpp"

#include <algorithm>
#include <cctype>

#include "narx/core/error.hpp"

namespace narx::clrs {

namespace {

constexpr std::array<std::string_view, kNumAlgorithms> kNames = {
    "activity_selector", "articulation_points", "bellman_ford", "bfs",
    "binary_search",     "bridges",             "bubble_sort",  "dag_shortest_paths",
    "dijkstra",          "find_maximum_subarray_kadane", "graham_scan", "insertion_sort",
    "jarvis_march",      "lcs_length",          "matrix_chain_order", "minimum",
    "mst_kruskal",       "mst_prim",            "naive_string_matcher", "optimal_bst",
    "quicksort",         "segments_intersect",  "task_scheduling", "topological_sort",
};

}  // namespace

const std::array<AlgoName, kNumAlgorithms>& all_algorithms() {
  static const auto algos = [] {
    std::array<AlgoName, kNumAlgorithms> a{};
    for (std::size_t i = 0; i < kNumAlgorithms; ++i) a[i] = static_cast<AlgoName>(i);
    return a;
  }();
  return algos;
}

std::string_view to_string(AlgoName algo) { return kNames[static_cast<std::size_t>(algo)]; }

std::string valid_algo_names() {
  std::string s;
  for (auto n : kNames) {
    if (!s.empty()) s += ", ";
    s += n;
  }
  return s;
}

AlgoName parse_algo(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "find_maximum_subarray" || lower == "kadane") lower = kNames[9];
  for (std::size_t i = 0; i < kNumAlgorithms; ++i)
    if (kNames[i] == lower) return static_cast<AlgoName>(i);
  fail(ErrorKind::Usage, "unknown algorithm '" + std::string(name) +
                             "'; valid names: " + valid_algo_names());
}

bool hints_enabled(AlgoName algo) {
  switch (algo) {
    case AlgoName::BFS:
    case AlgoName::BellmanFord:
    case AlgoName::Dijkstra:
    case AlgoName::BubbleSort:
    case AlgoName::InsertionSort:
    case AlgoName::NaiveStringMatcher:
      return true;
    default:
      return false;
  }
}

}  // namespace narx::clrs
