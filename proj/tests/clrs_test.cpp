#include <functional>
#include <random>
#include <sstream>

#include "doctest.h"
#include "narx/clrs/execute.hpp"
#include "narx/clrs/geometry.hpp"
#include "narx/clrs/trace_io.hpp"
#include "narx/core/error.hpp"

using namespace narx;
using namespace narx::clrs;

namespace {

GraphProblem path3() {
  GraphProblem g;
  g.n = 3;
  g.edges = {{0, 1}, {1, 0}, {1, 2}, {2, 1}};
  g.weights = {1, 1, 1, 1};
  g.source = 0;
  return g;
}

const std::vector<double>& output_values(const AlgoTrace& t) { return t.outputs.at(0).values; }

std::vector<double> mask_of_set(std::size_t n, std::initializer_list<std::size_t> on) {
  std::vector<double> m(n, 0.0);
  for (auto i : on) m[i] = 1.0;
  return m;
}

bool has_cycle(const GraphProblem& g) {
  std::vector<int> colour(g.n, 0);
  std::function<bool(std::size_t)> visit = [&](std::size_t u) {
    colour[u] = 1;
    for (auto e : g.edges) {
      if (static_cast<std::size_t>(e.src) != u) continue;
      const auto v = static_cast<std::size_t>(e.dst);
      if (colour[v] == 1 || (colour[v] == 0 && visit(v))) return true;
    }
    colour[u] = 2;
    return false;
  };
  for (std::size_t v = 0; v < g.n; ++v)
    if (colour[v] == 0 && visit(v)) return true;
  return false;
}

double pointer_path_length(const GraphProblem& g, const std::vector<double>& pi, std::size_t v) {
  double total = 0;
  while (pi[v] != static_cast<double>(v)) {
    const auto u = static_cast<std::size_t>(pi[v]);
    double w = -1;
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      if (static_cast<std::size_t>(g.edges[e].src) == u && static_cast<std::size_t>(g.edges[e].dst) == v)
        w = g.weights[e];
    REQUIRE(w > 0);
    total += w;
    v = u;
  }
  return total;
}

AlgoInstance segments(Point a, Point b, Point c, Point d) {
  return make_instance(AlgoName::SegmentsIntersect, GeometryProblem{{a, b, c, d}});
}

}  // namespace

TEST_CASE("sampling is deterministic and validates size") {
  const auto a = sample_instance(AlgoName::BFS, 8, 42);
  const auto b = sample_instance(AlgoName::BFS, 8, 42);
  CHECK(a.graph == b.graph);
  CHECK(a.inputs == b.inputs);
  CHECK(sample_instance(AlgoName::BFS, 8, 43).graph != a.graph);
  for (auto algo : all_algorithms()) {
    const auto x = execute(sample_instance(algo, 10, 7));
    const auto y = execute(sample_instance(algo, 10, 7));
    CHECK(x == y);
  }
  CHECK_THROWS_AS(sample_instance(AlgoName::BFS, 3, 0), Error);
  CHECK_THROWS_AS(sample_instance(AlgoName::BFS, 65, 0), Error);
  try {
    sample_instance(AlgoName::Minimum, 100, 0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
}

TEST_CASE("every encoded instance is a valid graph with stable feature widths") {
  for (auto algo : all_algorithms()) {
    const auto dims = feature_dims(algo);
    for (std::size_t n : {4, 9, 16}) {
      const auto inst = sample_instance(algo, n, n * 31);
      CAPTURE(to_string(algo));
      CHECK(validate(inst.graph).empty());
      CHECK(inst.graph.node_dim() == dims.node);
      CHECK(inst.graph.edge_dim() == dims.edge);
      CHECK(inst.graph.graph_dim() == dims.graph);
      CHECK(encoded_nodes(inst) == (algo == AlgoName::SegmentsIntersect ? 4 : n));
    }
  }
}

TEST_CASE("sampled graphs meet algorithm preconditions") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto dj = std::get<GraphProblem>(sample_instance(AlgoName::Dijkstra, 8, s).problem);
    for (double w : dj.weights) CHECK(w > 0);
    for (std::size_t n : {4, 8, 16}) {
      const auto dag = std::get<GraphProblem>(sample_instance(AlgoName::DAGShortestPaths, n, s).problem);
      CHECK_FALSE(has_cycle(dag));
    }
  }
}

TEST_CASE("BFS on a path") {
  const auto inst = make_instance(AlgoName::BFS, path3());
  const auto trace = execute(inst);
  CHECK(output_values(trace) == std::vector<double>{0, 0, 1});
  REQUIRE(trace.hints.size() == 3);
  CHECK(trace.hints[0][0].values == mask_of_set(3, {0}));
  CHECK(trace.hints[1][0].values == mask_of_set(3, {0, 1}));
  CHECK(trace.hints[2][0].values == mask_of_set(3, {0, 1, 2}));
  CHECK(trace.steps == 3);
}

TEST_CASE("segment intersection examples") {
  CHECK(output_values(execute(segments({0, 0}, {2, 2}, {0, 2}, {2, 0}))) == std::vector<double>{1});
  CHECK(output_values(execute(segments({0, 0}, {1, 0}, {2, 0}, {3, 0}))) == std::vector<double>{0});
}

TEST_CASE("maximum subarray prefers leftmost then shortest") {
  const auto inst = make_instance(AlgoName::FindMaxSubarray, ArrayProblem{{-2, 1, -3, 4, -1, 2, 1, -5, 4}, {}, 0});
  CHECK(output_values(execute(inst)) == mask_of_set(9, {3, 4, 5, 6}));
  // [1, 0, -2, 1] has sum-1 windows at {0}, {0,1} and {3}: leftmost, then shortest.
  const auto tie = make_instance(AlgoName::FindMaxSubarray, ArrayProblem{{1, 0, -2, 1}, {}, 0});
  CHECK(output_values(execute(tie)) == mask_of_set(4, {0}));
}

TEST_CASE("Dijkstra distances match Bellman-Ford relaxation") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const auto inst = sample_instance(AlgoName::Dijkstra, 8, rng());
    const auto& g = std::get<GraphProblem>(inst.problem);
    std::vector<double> d(g.n, 1e300);
    d[static_cast<std::size_t>(g.source)] = 0;
    for (std::size_t r = 0; r < g.n; ++r)
      for (std::size_t e = 0; e < g.edges.size(); ++e)
        d[static_cast<std::size_t>(g.edges[e].dst)] =
            std::min(d[static_cast<std::size_t>(g.edges[e].dst)], d[static_cast<std::size_t>(g.edges[e].src)] + g.weights[e]);
    const auto pi = output_values(execute(inst));
    for (std::size_t v = 0; v < g.n; ++v) CHECK(pointer_path_length(g, pi, v) == doctest::Approx(d[v]).epsilon(1e-12));
  }
}

TEST_CASE("executors agree with oracles on 200 instances per algorithm") {
  for (auto algo : all_algorithms()) {
    std::size_t failures = 0, skipped = 0;
    std::string first;
    for (std::uint64_t i = 0; i < 200; ++i) {
      const std::size_t n = 4 + i % 9;
      const auto inst = sample_instance(algo, n, 1000 + i);
      const auto report = oracle_check(algo, inst, execute(inst));
      skipped += report.skipped;
      if (!report.pass) {
        if (failures++ == 0) first = report.message;
      }
    }
    CAPTURE(to_string(algo));
    CAPTURE(first);
    CHECK(failures == 0);
    CHECK(skipped == 0);
  }
}

TEST_CASE("oracle reports a corrupted pointer") {
  const auto inst = sample_instance(AlgoName::BellmanFord, 8, 3);
  auto trace = execute(inst);
  auto& pi = trace.outputs[0].values;
  const auto src = static_cast<std::size_t>(std::get<GraphProblem>(inst.problem).source);
  const std::size_t victim = src == 0 ? 1 : 0;
  pi[victim] = static_cast<double>(victim);
  const auto report = oracle_check(AlgoName::BellmanFord, inst, trace);
  CHECK_FALSE(report.pass);
  CHECK(report.message.find("pi[") != std::string::npos);
}

TEST_CASE("Kruskal and Prim trees weigh the same") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto k = sample_instance(AlgoName::MSTKruskal, 10, s);
    const auto& g = std::get<GraphProblem>(k.problem);
    const auto mask = output_values(execute(k));
    double wk = 0;
    for (std::size_t e = 0; e < g.edges.size(); ++e) wk += mask[e] * g.weights[e];
    const auto p = make_instance(AlgoName::MSTPrim, g);
    const auto pi = output_values(execute(p));
    double wp = 0;
    for (std::size_t v = 0; v < g.n; ++v)
      if (pi[v] != static_cast<double>(v))
        for (std::size_t e = 0; e < g.edges.size(); ++e)
          if (g.edges[e].src == static_cast<Index>(pi[v]) && static_cast<std::size_t>(g.edges[e].dst) == v)
            wp += g.weights[e];
    CHECK(wk / 2 == doctest::Approx(wp));
  }
}

TEST_CASE("segment predicate agrees with exact parametric oracle") {
  std::mt19937_64 rng(17);
  auto check = [](const AlgoInstance& inst) {
    const auto r = oracle_check(AlgoName::SegmentsIntersect, inst, execute(inst));
    CHECK_MESSAGE(r.pass, r.message);
  };
  for (std::uint64_t s = 0; s < 1000; ++s) check(sample_instance(AlgoName::SegmentsIntersect, 4, s));
  // Adversarial: collinear overlap, touching, disjoint collinear, zero length.
  std::vector<std::array<Point, 4>> cases = {
      {{{0, 0}, {4, 0}, {2, 0}, {6, 0}}}, {{{0, 0}, {2, 0}, {2, 0}, {5, 0}}}, {{{0, 0}, {1, 0}, {2, 0}, {3, 0}}},
      {{{0, 0}, {2, 2}, {1, 1}, {1, 1}}}, {{{0, 0}, {2, 2}, {3, 3}, {3, 3}}}, {{{1, 1}, {1, 1}, {1, 1}, {1, 1}}},
      {{{0, 0}, {0, 4}, {0, 2}, {3, 2}}}, {{{0, 0}, {4, 4}, {4, 0}, {2, 2}}}, {{{0, 0}, {4, 0}, {0, 1}, {4, 1}}},
      {{{0, 0}, {0, 0}, {1, 1}, {1, 1}}},
  };
  for (const auto& c : cases) check(segments(c[0], c[1], c[2], c[3]));
  // Tiny grid coordinates produce many touching and collinear configurations.
  for (int i = 0; i < 40; ++i) {
    std::array<Point, 4> p;
    for (auto& q : p) q = {static_cast<std::int64_t>(rng() % 3), static_cast<std::int64_t>(rng() % 3)};
    check(segments(p[0], p[1], p[2], p[3]));
  }
}

TEST_CASE("hull scans agree on degenerate point sets") {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<Point> pts;
    const std::size_t n = 4 + rng() % 10;
    while (pts.size() < n) {
      Point p{static_cast<std::int64_t>(rng() % 5), static_cast<std::int64_t>(rng() % 5)};
      if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    }
    for (auto algo : {AlgoName::GrahamScan, AlgoName::JarvisMarch}) {
      const auto inst = make_instance(algo, GeometryProblem{pts});
      const auto r = oracle_check(algo, inst, execute(inst));
      CHECK_MESSAGE(r.pass, r.message);
    }
  }
  std::vector<Point> line{{0, 0}, {3, 3}, {1, 1}, {2, 2}};
  CHECK(geometry::graham_scan(line) == std::vector<bool>{true, true, false, false});
  CHECK(geometry::jarvis_march(line) == std::vector<bool>{true, true, false, false});
}

TEST_CASE("hint trajectories") {
  SUBCASE("bubble sort ends sorted") {
    const auto inst = make_instance(AlgoName::BubbleSort, ArrayProblem{{3, 1, 2}, {}, 0});
    const auto hints = emit_hints(AlgoName::BubbleSort, inst);
    REQUIRE(hints.size() == 3);
    // arrangement [3, 1, 2] by index: 0, 1, 2; after one swap 1, 0, 2.
    CHECK(hints[0][0].values == std::vector<double>{0, 0, 1});
    CHECK(hints[1][0].values == std::vector<double>{1, 1, 0});
    // sorted: 1 (idx 1), 2 (idx 2), 3 (idx 0)
    CHECK(hints[2][0].values == std::vector<double>{2, 1, 1});
  }
  SUBCASE("final hint equals outputs") {
    for (auto algo : all_algorithms()) {
      if (!hints_enabled(algo)) continue;
      for (std::uint64_t s = 0; s < 100; ++s) {
        const auto trace = execute(sample_instance(algo, 4 + s % 9, s));
        REQUIRE_FALSE(trace.hints.empty());
        const auto& last = trace.hints.back();
        const auto ptr = std::find_if(last.begin(), last.end(), [&](const ProbeValue& p) {
          return p.spec.kind == trace.outputs[0].spec.kind;
        });
        REQUIRE(ptr != last.end());
        CHECK(ptr->values == output_values(trace));
      }
    }
  }
  SUBCASE("unsupported algorithms") {
    const auto inst = sample_instance(AlgoName::Quicksort, 6, 1);
    try {
      emit_hints(AlgoName::Quicksort, inst);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::FeatureNotEnabled);
    }
    CHECK(execute(inst).hints.empty());
  }
}

TEST_CASE("pointer outputs form valid structures") {
  for (auto algo : all_algorithms()) {
    const auto spec = output_spec(algo);
    if (spec.kind != ProbeKind::Pointer) continue;
    for (std::uint64_t s = 0; s < 40; ++s) {
      const auto trace = execute(sample_instance(algo, 4 + s % 13, s));
      const auto& p = output_values(trace);
      const std::size_t n = p.size();
      std::size_t roots = 0;
      for (std::size_t v = 0; v < n; ++v) {
        REQUIRE(p[v] >= 0);
        REQUIRE(p[v] < static_cast<double>(n));
        roots += p[v] == static_cast<double>(v);
        // Following pointers reaches a root within n hops.
        std::size_t x = v, hops = 0;
        while (p[x] != static_cast<double>(x) && hops <= n) {
          x = static_cast<std::size_t>(p[x]);
          ++hops;
        }
        CHECK(hops <= n);
      }
      if (algo == AlgoName::BubbleSort || algo == AlgoName::InsertionSort || algo == AlgoName::Quicksort ||
          algo == AlgoName::TopologicalSort) {
        CHECK(roots == 1);
        std::vector<int> children(n, 0);
        for (std::size_t v = 0; v < n; ++v)
          if (p[v] != static_cast<double>(v)) ++children[static_cast<std::size_t>(p[v])];
        for (int c : children) CHECK(c <= 1);
      }
    }
  }
}

TEST_CASE("invalid instances raise contract errors") {
  auto g = path3();
  g.weights[0] = -1;
  try {
    execute(make_instance(AlgoName::Dijkstra, g));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Contract);
  }
  const auto bfs = make_instance(AlgoName::BFS, path3());
  CHECK_THROWS_AS(execute(AlgoName::Minimum, bfs), Error);
  GraphProblem cyc;
  cyc.n = 2;
  cyc.edges = {{0, 1}, {1, 0}};
  cyc.weights = {1, 1};
  cyc.undirected = false;
  CHECK_THROWS_AS(execute(make_instance(AlgoName::TopologicalSort, cyc)), Error);
}

TEST_CASE("trace lines round trip with stable field order") {
  for (auto algo : {AlgoName::BFS, AlgoName::LCSLength, AlgoName::SegmentsIntersect, AlgoName::BinarySearch}) {
    const auto inst = sample_instance(algo, 6, 11);
    const auto rec = make_record(inst, execute(inst));
    const auto line = to_json_line(rec);
    CHECK(line.rfind("{\"algo\":", 0) == 0);
    CHECK(line.find("\"seed\"") < line.find("\"n\""));
    CHECK(line.find("\"inputs\"") < line.find("\"hints\""));
    CHECK(line.find("\"hints\"") < line.find("\"outputs\""));
    CHECK(parse_json_line(line) == rec);
  }
  std::istringstream bad("{\"algo\":\"bfs\"}\n");
  try {
    read_trace_file(bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Format);
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
}
