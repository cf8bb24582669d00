#include "narx/clrs/instance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <queue>
#include <random>

#include "narx/core/error.hpp"

namespace narx::clrs {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {  // inclusive
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Values fed to the model are f32; keep the problem data on the same grid.
double f32(double v) { return static_cast<double>(static_cast<float>(v)); }

double edge_probability(std::size_t n) {
  return std::min(1.0, 1.5 * std::log(static_cast<double>(n)) / static_cast<double>(n));
}

bool connected(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<Index>> adj(n);
  for (auto e : edges) {
    adj[static_cast<std::size_t>(e.src)].push_back(e.dst);
    adj[static_cast<std::size_t>(e.dst)].push_back(e.src);
  }
  std::vector<char> seen(n, 0);
  std::vector<Index> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    auto u = static_cast<std::size_t>(stack.back());
    stack.pop_back();
    for (Index v : adj[u])
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++count;
        stack.push_back(v);
      }
  }
  return count == n;
}

GraphProblem sample_undirected(Rng& rng, std::size_t n, bool weighted) {
  const double p = edge_probability(n);
  for (;;) {
    std::vector<std::pair<Edge, double>> arcs;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (uniform(rng, 0.0, 1.0) < p) {
          const double w = weighted ? f32(uniform(rng, 0.1, 1.0)) : 1.0;
          arcs.push_back({{static_cast<Index>(i), static_cast<Index>(j)}, w});
          arcs.push_back({{static_cast<Index>(j), static_cast<Index>(i)}, w});
        }
    std::sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) {
      return std::pair(a.first.src, a.first.dst) < std::pair(b.first.src, b.first.dst);
    });
    GraphProblem g;
    g.n = n;
    for (auto& [e, w] : arcs) {
      g.edges.push_back(e);
      g.weights.push_back(w);
    }
    if (connected(n, g.edges)) {
      g.source = static_cast<Index>(uniform_int(rng, 0, static_cast<int>(n) - 1));
      return g;
    }
  }
}

GraphProblem sample_dag(Rng& rng, std::size_t n, bool weighted) {
  const double p = edge_probability(n);
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::pair<Edge, double>> arcs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (uniform(rng, 0.0, 1.0) < p)
        arcs.push_back({{order[i], order[j]}, weighted ? f32(uniform(rng, 0.1, 1.0)) : 1.0});
  std::sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) {
    return std::pair(a.first.src, a.first.dst) < std::pair(b.first.src, b.first.dst);
  });
  GraphProblem g;
  g.n = n;
  g.undirected = false;
  for (auto& [e, w] : arcs) {
    g.edges.push_back(e);
    g.weights.push_back(w);
  }
  g.source = static_cast<Index>(uniform_int(rng, 0, static_cast<int>(n) - 1));
  return g;
}

std::vector<double> uniform_array(Rng& rng, std::size_t n) {
  std::vector<double> a(n);
  for (auto& v : a) v = f32(uniform(rng, 0.0, 1.0));
  return a;
}

std::vector<int> random_string(Rng& rng, std::size_t len) {
  std::vector<int> s(len);
  for (auto& c : s) c = uniform_int(rng, 0, kAlphabet - 1);
  return s;
}

Point random_point(Rng& rng) {
  const double x = uniform(rng, 0.0, 1.0), y = uniform(rng, 0.0, 1.0);
  return {std::llround(x * static_cast<double>(kCoordScale)),
          std::llround(y * static_cast<double>(kCoordScale))};
}

Problem sample_problem(AlgoName algo, std::size_t n, Rng& rng) {
  using A = AlgoName;
  switch (algo) {
    case A::BFS:
    case A::ArticulationPoints:
    case A::Bridges: return sample_undirected(rng, n, false);
    case A::BellmanFord:
    case A::Dijkstra:
    case A::MSTKruskal:
    case A::MSTPrim: return sample_undirected(rng, n, true);
    case A::DAGShortestPaths: return sample_dag(rng, n, true);
    case A::TopologicalSort: return sample_dag(rng, n, false);
    case A::BubbleSort:
    case A::InsertionSort:
    case A::Quicksort:
    case A::Minimum: return ArrayProblem{uniform_array(rng, n), {}, 0};
    case A::BinarySearch: {
      auto a = uniform_array(rng, n);
      std::sort(a.begin(), a.end());
      return ArrayProblem{a, {}, f32(uniform(rng, 0.0, a.back()))};
    }
    case A::FindMaxSubarray: {
      std::vector<double> a(n);
      for (auto& v : a) v = uniform_int(rng, -10, 10);
      return ArrayProblem{a, {}, 0};
    }
    case A::ActivitySelector: {
      std::vector<double> s(n), f(n);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = uniform_int(rng, 0, 2 * static_cast<int>(n) - 1);
        f[i] = s[i] + uniform_int(rng, 1, static_cast<int>(n));
      }
      return ArrayProblem{s, f, 0};
    }
    case A::TaskScheduling: {
      std::vector<double> d(n), w(n);
      for (auto& v : d) v = uniform_int(rng, 1, static_cast<int>(n));
      std::iota(w.begin(), w.end(), 1.0);
      std::shuffle(w.begin(), w.end(), rng);
      return ArrayProblem{d, w, 0};
    }
    case A::MatrixChainOrder: {
      std::vector<double> p(n);
      for (auto& v : p) v = uniform_int(rng, 1, 9);
      return ArrayProblem{p, {}, 0};
    }
    case A::OptimalBST: {
      std::vector<double> p(n, 0.0), q(n);
      for (std::size_t i = 1; i < n; ++i) p[i] = uniform_int(rng, 1, 9);
      for (auto& v : q) v = uniform_int(rng, 1, 9);
      return ArrayProblem{p, q, 0};
    }
    case A::LCSLength: {
      const std::size_t la = n / 2;
      return StringProblem{random_string(rng, la), random_string(rng, n - la)};
    }
    case A::NaiveStringMatcher: {
      const std::size_t m = std::max<std::size_t>(1, n / 4);
      StringProblem sp{random_string(rng, n - m), random_string(rng, m)};
      const auto at = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(n - 2 * m)));
      std::copy(sp.pattern.begin(), sp.pattern.end(), sp.text.begin() + static_cast<std::ptrdiff_t>(at));
      return sp;
    }
    case A::GrahamScan:
    case A::JarvisMarch: {
      std::vector<Point> pts;
      while (pts.size() < n) {
        auto p = random_point(rng);
        if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
      }
      return GeometryProblem{pts};
    }
    case A::SegmentsIntersect: {
      std::vector<Point> pts(4);
      for (auto& p : pts) p = random_point(rng);
      return GeometryProblem{pts};
    }
  }
  fail(ErrorKind::Contract, "unhandled algorithm");
}

ProbeValue node_scalar(std::string name, std::vector<double> v) {
  return {{std::move(name), Location::Node, ProbeKind::Scalar}, std::move(v)};
}
ProbeValue node_mask(std::string name, std::vector<double> v) {
  return {{std::move(name), Location::Node, ProbeKind::Mask}, std::move(v)};
}
ProbeValue edge_probe(std::string name, ProbeKind kind, std::vector<double> v) {
  return {{std::move(name), Location::Edge, kind}, std::move(v)};
}

std::vector<double> positions(std::size_t n) {
  std::vector<double> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[i] = f32(static_cast<double>(i) / static_cast<double>(n));
  return pos;
}

std::vector<double> scaled(const std::vector<double>& v, double by) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = f32(v[i] / by);
  return out;
}

bool uses_source(AlgoName algo) {
  using A = AlgoName;
  return algo == A::BFS || algo == A::BellmanFord || algo == A::Dijkstra ||
         algo == A::DAGShortestPaths || algo == A::MSTPrim;
}

}  // namespace

GraphInstance encode_inputs(const ProbeSet& inputs, std::size_t num_nodes,
                            std::vector<Edge> edges) {
  auto width = [](const ProbeSpec& s) {
    return s.kind == ProbeKind::Categorical ? static_cast<std::size_t>(s.categories) : 1;
  };
  std::size_t dn = 0, de = 0, dg = 0;
  for (const auto& p : inputs) {
    switch (p.spec.location) {
      case Location::Node: dn += width(p.spec); break;
      case Location::Edge: de += width(p.spec); break;
      case Location::Graph: dg += width(p.spec); break;
    }
  }
  GraphInstance g;
  g.num_nodes = num_nodes;
  g.edges = std::move(edges);
  const bool const_graph = dg == 0;
  g.node_feats = Tensor({num_nodes, dn});
  g.edge_feats = Tensor({g.edges.size(), de});
  g.graph_feats = Tensor({const_graph ? std::size_t{1} : dg}, const_graph ? Real(1) : Real(0));
  std::size_t cn = 0, ce = 0, cg = 0;
  for (const auto& p : inputs) {
    const std::size_t w = width(p.spec);
    Tensor* target = nullptr;
    std::size_t* col = nullptr;
    std::size_t rows = 1, stride = 1;
    switch (p.spec.location) {
      case Location::Node: target = &g.node_feats; col = &cn; rows = num_nodes; stride = dn; break;
      case Location::Edge: target = &g.edge_feats; col = &ce; rows = g.edges.size(); stride = de; break;
      case Location::Graph: target = &g.graph_feats; col = &cg; rows = 1; stride = dg; break;
    }
    require(p.values.size() == rows, ErrorKind::Dimension,
            "input probe '" + p.spec.name + "' has " + std::to_string(p.values.size()) +
                " values, expected " + std::to_string(rows));
    for (std::size_t r = 0; r < rows; ++r) {
      if (p.spec.kind == ProbeKind::Categorical) {
        const auto c = static_cast<std::size_t>(p.values[r]);
        (*target)[r * stride + *col + c] = Real(1);
      } else {
        (*target)[r * stride + *col] = static_cast<Real>(p.values[r]);
      }
    }
    *col += w;
  }
  return g;
}

AlgoInstance make_instance(AlgoName algo, Problem problem, std::uint64_t seed) {
  AlgoInstance inst;
  inst.algo = algo;
  inst.seed = seed;
  inst.problem = std::move(problem);
  std::size_t n = 0;
  std::vector<Edge> edges;
  ProbeSet& in = inst.inputs;
  if (const auto* g = std::get_if<GraphProblem>(&inst.problem)) {
    n = g->n;
    edges = g->edges;
    in.push_back(node_scalar("pos", positions(n)));
    if (uses_source(algo)) {
      std::vector<double> s(n, 0.0);
      s[static_cast<std::size_t>(g->source)] = 1.0;
      in.push_back(node_mask("s", s));
    }
    in.push_back(edge_probe("w", ProbeKind::Scalar, g->weights));
  } else if (const auto* a = std::get_if<ArrayProblem>(&inst.problem)) {
    using A = AlgoName;
    n = algo == A::OptimalBST ? a->b.size() : a->a.size();
    edges = complete_digraph(n);
    in.push_back(node_scalar("pos", positions(n)));
    const double dn = static_cast<double>(n);
    switch (algo) {
      case A::ActivitySelector:
        in.push_back(node_scalar("s", scaled(a->a, 3 * dn)));
        in.push_back(node_scalar("f", scaled(a->b, 3 * dn)));
        break;
      case A::TaskScheduling:
        in.push_back(node_scalar("d", scaled(a->a, dn)));
        in.push_back(node_scalar("w", scaled(a->b, dn)));
        break;
      case A::FindMaxSubarray: in.push_back(node_scalar("key", scaled(a->a, 10))); break;
      case A::MatrixChainOrder: in.push_back(node_scalar("p", scaled(a->a, 10))); break;
      case A::OptimalBST:
        in.push_back(node_scalar("p", scaled(a->a, 10)));
        in.push_back(node_scalar("q", scaled(a->b, 10)));
        break;
      default: in.push_back(node_scalar("key", a->a)); break;
    }
    if (algo == A::BinarySearch)
      in.push_back({{"target", Location::Graph, ProbeKind::Scalar}, {a->target}});
    in.push_back(edge_probe("adj", ProbeKind::Mask, std::vector<double>(edges.size(), 1.0)));
  } else if (const auto* s = std::get_if<StringProblem>(&inst.problem)) {
    const std::size_t lt = s->text.size(), lp = s->pattern.size();
    n = lt + lp;
    std::vector<double> pos(n), group(n), chars(n);
    for (std::size_t i = 0; i < lt; ++i) {
      pos[i] = f32(static_cast<double>(i) / static_cast<double>(lt));
      chars[i] = s->text[i];
    }
    for (std::size_t i = 0; i < lp; ++i) {
      pos[lt + i] = f32(static_cast<double>(i) / static_cast<double>(lp));
      group[lt + i] = 1.0;
      chars[lt + i] = s->pattern[i];
    }
    std::vector<double> chain;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const bool same = (i < lt) == (j < lt);
        const bool adjacent = (i > j ? i - j : j - i) == 1;
        if (same && !adjacent) continue;
        edges.push_back({static_cast<Index>(i), static_cast<Index>(j)});
        chain.push_back(same ? 1.0 : 0.0);
      }
    in.push_back(node_scalar("pos", pos));
    in.push_back(node_mask("pattern", group));
    in.push_back({{"char", Location::Node, ProbeKind::Categorical, kAlphabet}, chars});
    in.push_back(edge_probe("chain", ProbeKind::Mask, chain));
  } else {
    const auto& geo = std::get<GeometryProblem>(inst.problem);
    n = geo.points.size();
    edges = complete_digraph(n);
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = f32(static_cast<double>(geo.points[i].x) / static_cast<double>(kCoordScale));
      ys[i] = f32(static_cast<double>(geo.points[i].y) / static_cast<double>(kCoordScale));
    }
    in.push_back(node_scalar("pos", positions(n)));
    in.push_back(node_scalar("x", xs));
    in.push_back(node_scalar("y", ys));
    if (algo == AlgoName::SegmentsIntersect) in.push_back(node_mask("seg", {0, 0, 1, 1}));
    in.push_back(edge_probe("adj", ProbeKind::Mask, std::vector<double>(edges.size(), 1.0)));
  }
  inst.size = n;
  inst.graph = encode_inputs(in, n, std::move(edges));
  return inst;
}

AlgoInstance sample_instance(AlgoName algo, std::size_t size, std::uint64_t seed) {
  require(size >= kMinSize && size <= kMaxSize, ErrorKind::Config,
          "instance size " + std::to_string(size) + " outside [" + std::to_string(kMinSize) +
              ", " + std::to_string(kMaxSize) + "]");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(algo), static_cast<std::uint32_t>(size)};
  Rng rng(seq);
  auto inst = make_instance(algo, sample_problem(algo, size, rng), seed);
  inst.size = size;
  return inst;
}

FeatureDims feature_dims(AlgoName algo) {
  static std::mutex mu;
  static std::map<AlgoName, FeatureDims> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(algo); it != cache.end()) return it->second;
  const auto inst = sample_instance(algo, kMinSize, 0);
  FeatureDims d{inst.graph.node_dim(), inst.graph.edge_dim(), inst.graph.graph_dim()};
  cache.emplace(algo, d);
  return d;
}

std::size_t encoded_nodes(const AlgoInstance& inst) { return inst.graph.num_nodes; }

}  // namespace narx::clrs
