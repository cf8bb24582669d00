#include "narx/clrs/execute.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

#include "narx/clrs/geometry.hpp"
#include "narx/core/error.hpp"

namespace narx::clrs {

namespace {

using A = AlgoName;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Arc {
  std::size_t to;
  double w;
  std::size_t id;
};

std::vector<std::vector<Arc>> out_arcs(const GraphProblem& g) {
  std::vector<std::vector<Arc>> adj(g.n);
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    adj[static_cast<std::size_t>(g.edges[e].src)].push_back(
        {static_cast<std::size_t>(g.edges[e].dst), g.weights[e], e});
  return adj;
}

std::vector<double> self_pointers(std::size_t n) {
  std::vector<double> p(n);
  std::iota(p.begin(), p.end(), 0.0);
  return p;
}

// Smallest-index predecessor u with d[u] + w == d[v]; roots and unreached
// nodes point to themselves.
std::vector<double> tight_pointers(const GraphProblem& g, const std::vector<double>& d,
                                   const std::vector<bool>& allowed) {
  auto pi = self_pointers(g.n);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto u = static_cast<std::size_t>(g.edges[e].src);
    const auto v = static_cast<std::size_t>(g.edges[e].dst);
    if (!allowed[u] || d[v] == kInf || v == static_cast<std::size_t>(g.source)) continue;
    if (d[u] + g.weights[e] == d[v]) {
      if (pi[v] == static_cast<double>(v) || static_cast<double>(u) < pi[v]) pi[v] = static_cast<double>(u);
    }
  }
  return pi;
}

ProbeValue value_of(ProbeSpec spec, std::vector<double> v) { return {std::move(spec), std::move(v)}; }

// ---- graphs ---------------------------------------------------------------

// Synchronous relaxation rounds; each round is one hint state.
std::vector<ProbeSet> relaxation_states(A algo, const GraphProblem& g, bool unit) {
  const auto specs = hint_specs(algo);
  std::vector<double> d(g.n, kInf);
  d[static_cast<std::size_t>(g.source)] = 0;
  std::vector<ProbeSet> states;
  auto snapshot = [&](const std::vector<double>& prev, const std::vector<double>& cur) {
    std::vector<double> reach(g.n);
    for (std::size_t v = 0; v < g.n; ++v) reach[v] = cur[v] < kInf ? 1.0 : 0.0;
    std::vector<double> pi = self_pointers(g.n);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const auto u = static_cast<std::size_t>(g.edges[e].src);
      const auto v = static_cast<std::size_t>(g.edges[e].dst);
      const double w = unit ? 1.0 : g.weights[e];
      if (v == static_cast<std::size_t>(g.source) || prev[u] == kInf) continue;
      if (prev[u] + w == cur[v] && (pi[v] == static_cast<double>(v) || static_cast<double>(u) < pi[v]))
        pi[v] = static_cast<double>(u);
    }
    return ProbeSet{value_of(specs[0], reach), value_of(specs[1], pi)};
  };
  states.push_back(snapshot(d, d));
  for (;;) {
    auto next = d;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const auto u = static_cast<std::size_t>(g.edges[e].src);
      const auto v = static_cast<std::size_t>(g.edges[e].dst);
      const double w = unit ? 1.0 : g.weights[e];
      if (d[u] < kInf) next[v] = std::min(next[v], d[u] + w);
    }
    auto state = snapshot(d, next);
    if (next == d) {
      if (state != states.back()) states.push_back(std::move(state));
      break;
    }
    states.push_back(std::move(state));
    d = std::move(next);
  }
  return states;
}

std::vector<ProbeSet> dijkstra_states(const GraphProblem& g) {
  const auto specs = hint_specs(A::Dijkstra);
  const auto adj = out_arcs(g);
  std::vector<double> d(g.n, kInf);
  std::vector<bool> settled(g.n, false);
  d[static_cast<std::size_t>(g.source)] = 0;
  auto snapshot = [&] {
    std::vector<double> mask(g.n);
    for (std::size_t v = 0; v < g.n; ++v) mask[v] = settled[v] ? 1.0 : 0.0;
    return ProbeSet{value_of(specs[0], mask), value_of(specs[1], tight_pointers(g, d, settled))};
  };
  std::vector<ProbeSet> states{snapshot()};
  for (;;) {
    std::size_t best = g.n;
    for (std::size_t v = 0; v < g.n; ++v)
      if (!settled[v] && d[v] < kInf && (best == g.n || d[v] < d[best])) best = v;
    if (best == g.n) break;
    settled[best] = true;
    for (const auto& a : adj[best])
      if (!settled[a.to]) d[a.to] = std::min(d[a.to], d[best] + a.w);
    states.push_back(snapshot());
  }
  return states;
}

std::vector<double> dag_shortest_paths(const GraphProblem& g) {
  const auto adj = out_arcs(g);
  std::vector<std::size_t> indeg(g.n, 0);
  for (auto e : g.edges) ++indeg[static_cast<std::size_t>(e.dst)];
  std::vector<std::size_t> order;
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < g.n; ++v)
    if (indeg[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    const auto u = ready.back();
    ready.pop_back();
    order.push_back(u);
    for (const auto& a : adj[u])
      if (--indeg[a.to] == 0) ready.push_back(a.to);
  }
  require(order.size() == g.n, ErrorKind::Contract, "graph has a cycle");
  std::vector<double> d(g.n, kInf);
  d[static_cast<std::size_t>(g.source)] = 0;
  for (auto u : order)
    if (d[u] < kInf)
      for (const auto& a : adj[u]) d[a.to] = std::min(d[a.to], d[u] + a.w);
  return tight_pointers(g, d, std::vector<bool>(g.n, true));
}

std::vector<double> topological_sort(const GraphProblem& g) {
  const auto adj = out_arcs(g);
  std::vector<std::size_t> indeg(g.n, 0);
  for (auto e : g.edges) ++indeg[static_cast<std::size_t>(e.dst)];
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t v = 0; v < g.n; ++v)
    if (indeg[v] == 0) ready.push(v);
  auto pred = self_pointers(g.n);
  std::size_t prev = g.n, placed = 0;
  while (!ready.empty()) {
    const auto u = ready.top();
    ready.pop();
    if (prev != g.n) pred[u] = static_cast<double>(prev);
    prev = u;
    ++placed;
    for (const auto& a : adj[u])
      if (--indeg[a.to] == 0) ready.push(a.to);
  }
  require(placed == g.n, ErrorKind::Contract, "graph has a cycle");
  return pred;
}

// Edges of an undirected problem as (w, lo, hi) in the canonical total order.
struct UEdge {
  double w;
  std::size_t lo, hi;
  auto key() const { return std::tuple(w, lo, hi); }
};

std::vector<UEdge> undirected_edges(const GraphProblem& g) {
  std::vector<UEdge> out;
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (g.edges[e].src < g.edges[e].dst)
      out.push_back({g.weights[e], static_cast<std::size_t>(g.edges[e].src),
                     static_cast<std::size_t>(g.edges[e].dst)});
  std::sort(out.begin(), out.end(), [](const UEdge& a, const UEdge& b) { return a.key() < b.key(); });
  return out;
}

std::vector<double> kruskal(const GraphProblem& g) {
  std::vector<std::size_t> parent(g.n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  std::vector<std::vector<bool>> in(g.n, std::vector<bool>(g.n, false));
  for (const auto& e : undirected_edges(g)) {
    const auto a = find(e.lo), b = find(e.hi);
    if (a == b) continue;
    parent[a] = b;
    in[e.lo][e.hi] = in[e.hi][e.lo] = true;
  }
  std::vector<double> mask(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    mask[e] = in[static_cast<std::size_t>(g.edges[e].src)][static_cast<std::size_t>(g.edges[e].dst)] ? 1.0 : 0.0;
  return mask;
}

std::vector<double> prim(const GraphProblem& g) {
  const auto adj = out_arcs(g);
  std::vector<bool> in_tree(g.n, false);
  auto pi = self_pointers(g.n);
  in_tree[static_cast<std::size_t>(g.source)] = true;
  for (;;) {
    bool found = false;
    UEdge best{};
    std::size_t from = 0, to = 0;
    for (std::size_t u = 0; u < g.n; ++u) {
      if (!in_tree[u]) continue;
      for (const auto& a : adj[u]) {
        if (in_tree[a.to]) continue;
        const UEdge cand{a.w, std::min(u, a.to), std::max(u, a.to)};
        if (!found || cand.key() < best.key()) {
          found = true;
          best = cand;
          from = u;
          to = a.to;
        }
      }
    }
    if (!found) break;
    in_tree[to] = true;
    pi[to] = static_cast<double>(from);
  }
  return pi;
}

// Depth-first lowpoint computation shared by cut vertices and bridges.
struct Lowpoints {
  std::vector<double> cut;
  std::vector<double> bridge;
};

Lowpoints lowpoints(const GraphProblem& g) {
  const auto adj = out_arcs(g);
  std::vector<int> disc(g.n, -1), low(g.n, 0);
  Lowpoints out{std::vector<double>(g.n, 0.0), std::vector<double>(g.edges.size(), 0.0)};
  int timer = 0;
  std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t u, std::size_t parent) {
    disc[u] = low[u] = timer++;
    std::size_t children = 0;
    for (const auto& a : adj[u]) {
      if (a.to == parent) continue;
      if (disc[a.to] >= 0) {
        low[u] = std::min(low[u], disc[a.to]);
        continue;
      }
      ++children;
      dfs(a.to, u);
      low[u] = std::min(low[u], low[a.to]);
      if (parent != g.n && low[a.to] >= disc[u]) out.cut[u] = 1.0;
      if (low[a.to] > disc[u]) {
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
          const auto s = static_cast<std::size_t>(g.edges[e].src);
          const auto t = static_cast<std::size_t>(g.edges[e].dst);
          if ((s == u && t == a.to) || (s == a.to && t == u)) out.bridge[e] = 1.0;
        }
      }
    }
    if (parent == g.n && children > 1) out.cut[u] = 1.0;
  };
  for (std::size_t v = 0; v < g.n; ++v)
    if (disc[v] < 0) dfs(v, g.n);
  return out;
}

// ---- arrays ---------------------------------------------------------------

// Order by (value, index).
bool key_less(const std::vector<double>& a, std::size_t i, std::size_t j) {
  return a[i] < a[j] || (a[i] == a[j] && i < j);
}

std::vector<double> pred_of_arrangement(const std::vector<std::size_t>& arr) {
  std::vector<double> pred(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i)
    pred[arr[i]] = static_cast<double>(arr[i == 0 ? 0 : i - 1]);
  return pred;
}

std::vector<std::size_t> identity(std::size_t n) {
  std::vector<std::size_t> arr(n);
  std::iota(arr.begin(), arr.end(), 0);
  return arr;
}

std::vector<ProbeSet> bubble_states(const std::vector<double>& a) {
  const auto spec = hint_specs(A::BubbleSort)[0];
  auto arr = identity(a.size());
  std::vector<ProbeSet> states{{value_of(spec, pred_of_arrangement(arr))}};
  for (std::size_t pass = 0; pass + 1 < arr.size(); ++pass)
    for (std::size_t i = 0; i + 1 < arr.size() - pass; ++i)
      if (key_less(a, arr[i + 1], arr[i])) {
        std::swap(arr[i], arr[i + 1]);
        states.push_back({value_of(spec, pred_of_arrangement(arr))});
      }
  return states;
}

// One state per outer iteration (one element shifted into place).
std::vector<ProbeSet> insertion_states(const std::vector<double>& a) {
  const auto spec = hint_specs(A::InsertionSort)[0];
  auto arr = identity(a.size());
  std::vector<ProbeSet> states{{value_of(spec, pred_of_arrangement(arr))}};
  for (std::size_t j = 1; j < arr.size(); ++j) {
    const auto key = arr[j];
    std::size_t i = j;
    while (i > 0 && key_less(a, key, arr[i - 1])) {
      arr[i] = arr[i - 1];
      --i;
    }
    arr[i] = key;
    states.push_back({value_of(spec, pred_of_arrangement(arr))});
  }
  return states;
}

std::vector<double> quicksort(const std::vector<double>& a) {
  auto arr = identity(a.size());
  std::function<void(std::ptrdiff_t, std::ptrdiff_t)> sort = [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    if (lo >= hi) return;
    const auto pivot = arr[static_cast<std::size_t>(hi)];
    std::ptrdiff_t i = lo - 1;
    for (std::ptrdiff_t j = lo; j < hi; ++j)
      if (key_less(a, arr[static_cast<std::size_t>(j)], pivot))
        std::swap(arr[static_cast<std::size_t>(++i)], arr[static_cast<std::size_t>(j)]);
    std::swap(arr[static_cast<std::size_t>(i + 1)], arr[static_cast<std::size_t>(hi)]);
    sort(lo, i);
    sort(i + 2, hi);
  };
  sort(0, static_cast<std::ptrdiff_t>(arr.size()) - 1);
  return pred_of_arrangement(arr);
}

std::vector<double> one_hot(std::size_t n, std::size_t at) {
  std::vector<double> v(n, 0.0);
  v[at] = 1.0;
  return v;
}

std::vector<double> minimum(const std::vector<double>& a) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < a.size(); ++i)
    if (a[i] < a[best]) best = i;
  return one_hot(a.size(), best);
}

// Position of the first element not less than the target.
std::vector<double> binary_search(const std::vector<double>& a, double target) {
  std::size_t lo = 0, hi = a.size() - 1;
  while (lo < hi) {
    const auto mid = lo + (hi - lo) / 2;
    if (a[mid] < target) lo = mid + 1;
    else hi = mid;
  }
  return one_hot(a.size(), lo);
}

std::vector<double> kadane(const std::vector<double>& a) {
  double best = a[0], cur = a[0];
  std::size_t best_lo = 0, best_hi = 0, cur_lo = 0;
  for (std::size_t j = 1; j < a.size(); ++j) {
    if (cur >= 0) {
      cur += a[j];
    } else {
      cur = a[j];
      cur_lo = j;
    }
    if (cur > best || (cur == best && (cur_lo < best_lo || (cur_lo == best_lo && j < best_hi)))) {
      best = cur;
      best_lo = cur_lo;
      best_hi = j;
    }
  }
  std::vector<double> mask(a.size(), 0.0);
  for (auto i = best_lo; i <= best_hi; ++i) mask[i] = 1.0;
  return mask;
}

std::vector<double> activity_selector(const std::vector<double>& s, const std::vector<double>& f) {
  auto order = identity(s.size());
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return key_less(f, i, j); });
  std::vector<double> mask(s.size(), 0.0);
  double last = -kInf;
  for (auto i : order)
    if (s[i] >= last) {
      mask[i] = 1.0;
      last = f[i];
    }
  return mask;
}

std::vector<double> task_scheduling(const std::vector<double>& deadline, const std::vector<double>& penalty) {
  const std::size_t n = deadline.size();
  auto order = identity(n);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return penalty[i] > penalty[j] || (penalty[i] == penalty[j] && i < j);
  });
  // load[t] = tasks accepted with deadline <= t
  std::vector<double> mask(n, 0.0);
  std::vector<std::size_t> count(n + 1, 0);
  for (auto i : order) {
    const auto d = std::min(n, static_cast<std::size_t>(deadline[i]));
    bool ok = true;
    std::size_t running = 0;
    for (std::size_t t = 1; t <= n && ok; ++t) {
      running += count[t] + (t == d ? 1 : 0);
      ok = running <= t;
    }
    if (ok) {
      ++count[d];
      mask[i] = 1.0;
    }
  }
  return mask;
}

double matrix_chain(const std::vector<double>& p) {
  const std::size_t k = p.size() - 1;  // matrices
  if (k <= 1) return 0;
  std::vector<std::vector<double>> m(k, std::vector<double>(k, 0.0));
  for (std::size_t len = 2; len <= k; ++len)
    for (std::size_t i = 0; i + len <= k; ++i) {
      const auto j = i + len - 1;
      m[i][j] = kInf;
      for (std::size_t s = i; s < j; ++s)
        m[i][j] = std::min(m[i][j], m[i][s] + m[s + 1][j] + p[i] * p[s + 1] * p[j + 1]);
    }
  return m[0][k - 1];
}

// Keys 1..k weighted by p[1..k], dummies 0..k by q.
double optimal_bst(const std::vector<double>& p, const std::vector<double>& q) {
  const std::size_t k = q.size() - 1;
  // e[i][j] and w[i][j] for 1 <= i <= k + 1, i - 1 <= j <= k
  std::vector<std::vector<double>> e(k + 2, std::vector<double>(k + 1, 0.0)), w = e;
  for (std::size_t i = 1; i <= k + 1; ++i) e[i][i - 1] = w[i][i - 1] = q[i - 1];
  for (std::size_t len = 1; len <= k; ++len)
    for (std::size_t i = 1; i + len - 1 <= k; ++i) {
      const auto j = i + len - 1;
      w[i][j] = w[i][j - 1] + p[j] + q[j];
      e[i][j] = kInf;
      for (std::size_t r = i; r <= j; ++r) e[i][j] = std::min(e[i][j], e[i][r - 1] + e[r + 1][j] + w[i][j]);
    }
  return e[1][k];
}

double lcs_length(const std::vector<int>& x, const std::vector<int>& y) {
  std::vector<std::vector<int>> c(x.size() + 1, std::vector<int>(y.size() + 1, 0));
  for (std::size_t i = 1; i <= x.size(); ++i)
    for (std::size_t j = 1; j <= y.size(); ++j)
      c[i][j] = x[i - 1] == y[j - 1] ? c[i - 1][j - 1] + 1 : std::max(c[i - 1][j], c[i][j - 1]);
  return c[x.size()][y.size()];
}

std::vector<ProbeSet> string_matcher_states(const StringProblem& s) {
  const auto spec = hint_specs(A::NaiveStringMatcher)[0];
  const std::size_t n = s.text.size() + s.pattern.size();
  std::vector<ProbeSet> states;
  const std::size_t last = s.text.size() - s.pattern.size();
  for (std::size_t shift = 0; shift <= last; ++shift) {
    states.push_back({value_of(spec, std::vector<double>(n, static_cast<double>(shift)))});
    bool match = true;
    for (std::size_t i = 0; i < s.pattern.size() && match; ++i) match = s.text[shift + i] == s.pattern[i];
    if (match) return states;
  }
  fail(ErrorKind::Contract, "pattern does not occur in text");
}

// ---- dispatch ---------------------------------------------------------------

enum class Family { Graph, Array, String, Geometry };

Family family(A algo) {
  switch (algo) {
    case A::BFS: case A::BellmanFord: case A::Dijkstra: case A::DAGShortestPaths:
    case A::MSTPrim: case A::MSTKruskal: case A::ArticulationPoints: case A::Bridges:
    case A::TopologicalSort:
      return Family::Graph;
    case A::LCSLength: case A::NaiveStringMatcher: return Family::String;
    case A::GrahamScan: case A::JarvisMarch: case A::SegmentsIntersect: return Family::Geometry;
    default: return Family::Array;
  }
}

void validate(A algo, const AlgoInstance& inst) {
  const auto name = std::string(to_string(algo));
  auto check = [&](bool ok, std::string_view what) {
    if (!ok) fail(ErrorKind::Contract, name + ": " + std::string(what));
  };
  check(inst.algo == algo, "instance was built for " + std::string(to_string(inst.algo)));
  switch (family(algo)) {
    case Family::Graph: {
      const auto* g = std::get_if<GraphProblem>(&inst.problem);
      check(g != nullptr, "expected a graph problem");
      check(g->n >= 1 && g->weights.size() == g->edges.size(), "malformed graph");
      check(g->source >= 0 && static_cast<std::size_t>(g->source) < g->n, "source out of range");
      for (std::size_t e = 0; e < g->edges.size(); ++e) {
        const auto [s, t] = g->edges[e];
        check(s >= 0 && t >= 0 && static_cast<std::size_t>(s) < g->n && static_cast<std::size_t>(t) < g->n,
              "edge endpoint out of range");
        check(s != t, "self loop");
        check(std::isfinite(g->weights[e]), "non-finite weight");
        if (algo == A::Dijkstra || algo == A::BellmanFord || algo == A::MSTPrim || algo == A::MSTKruskal)
          check(g->weights[e] > 0, "weights must be positive");
      }
      break;
    }
    case Family::Array: {
      const auto* a = std::get_if<ArrayProblem>(&inst.problem);
      check(a != nullptr, "expected an array problem");
      check(!a->a.empty(), "empty array");
      if (algo == A::ActivitySelector || algo == A::TaskScheduling)
        check(a->b.size() == a->a.size(), "paired arrays differ in length");
      if (algo == A::OptimalBST) check(a->b.size() == a->a.size(), "key and dummy weights differ in length");
      if (algo == A::MatrixChainOrder) check(a->a.size() >= 2, "need at least one matrix");
      if (algo == A::BinarySearch) {
        check(std::is_sorted(a->a.begin(), a->a.end()), "array not sorted");
        check(a->target <= a->a.back(), "target above every element");
      }
      if (algo == A::TaskScheduling)
        for (double d : a->a) check(d >= 1, "deadlines start at 1");
      break;
    }
    case Family::String: {
      const auto* s = std::get_if<StringProblem>(&inst.problem);
      check(s != nullptr, "expected a string problem");
      check(!s->text.empty() && !s->pattern.empty(), "empty string");
      if (algo == A::NaiveStringMatcher) check(s->pattern.size() <= s->text.size(), "pattern longer than text");
      break;
    }
    case Family::Geometry: {
      const auto* g = std::get_if<GeometryProblem>(&inst.problem);
      check(g != nullptr, "expected a point set");
      if (algo == A::SegmentsIntersect) check(g->points.size() == 4, "segments need exactly 4 points");
      else {
        check(!g->points.empty(), "empty point set");
        for (std::size_t i = 0; i < g->points.size(); ++i)
          for (std::size_t j = i + 1; j < g->points.size(); ++j)
            check(!(g->points[i] == g->points[j]), "duplicate points");
      }
      break;
    }
  }
}

std::vector<double> from_mask(const std::vector<bool>& m) {
  std::vector<double> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] ? 1.0 : 0.0;
  return out;
}

std::vector<double> run(A algo, const AlgoInstance& inst) {
  switch (family(algo)) {
    case Family::Graph: {
      const auto& g = std::get<GraphProblem>(inst.problem);
      switch (algo) {
        case A::BFS: return relaxation_states(algo, g, true).back()[1].values;
        case A::BellmanFord: return relaxation_states(algo, g, false).back()[1].values;
        case A::Dijkstra: return dijkstra_states(g).back()[1].values;
        case A::DAGShortestPaths: return dag_shortest_paths(g);
        case A::MSTPrim: return prim(g);
        case A::MSTKruskal: return kruskal(g);
        case A::ArticulationPoints: return lowpoints(g).cut;
        case A::Bridges: return lowpoints(g).bridge;
        default: return topological_sort(g);
      }
    }
    case Family::Array: {
      const auto& a = std::get<ArrayProblem>(inst.problem);
      switch (algo) {
        case A::BubbleSort: return bubble_states(a.a).back()[0].values;
        case A::InsertionSort: return insertion_states(a.a).back()[0].values;
        case A::Quicksort: return quicksort(a.a);
        case A::Minimum: return minimum(a.a);
        case A::BinarySearch: return binary_search(a.a, a.target);
        case A::FindMaxSubarray: return kadane(a.a);
        case A::ActivitySelector: return activity_selector(a.a, a.b);
        case A::TaskScheduling: return task_scheduling(a.a, a.b);
        case A::MatrixChainOrder: return {matrix_chain(a.a)};
        default: return {optimal_bst(a.a, a.b)};
      }
    }
    case Family::String: {
      const auto& s = std::get<StringProblem>(inst.problem);
      if (algo == A::LCSLength) return {lcs_length(s.text, s.pattern)};
      return string_matcher_states(s).back()[0].values;
    }
    case Family::Geometry: {
      const auto& pts = std::get<GeometryProblem>(inst.problem).points;
      if (algo == A::GrahamScan) return from_mask(geometry::graham_scan(pts));
      if (algo == A::JarvisMarch) return from_mask(geometry::jarvis_march(pts));
      return {geometry::segments_intersect(pts[0], pts[1], pts[2], pts[3]) ? 1.0 : 0.0};
    }
  }
  fail(ErrorKind::Contract, "unhandled algorithm");
}

}  // namespace

std::vector<ProbeSet> emit_hints(AlgoName algo, const AlgoInstance& inst) {
  require(hints_enabled(algo), ErrorKind::FeatureNotEnabled,
          "hints are not available for " + std::string(to_string(algo)));
  validate(algo, inst);
  switch (algo) {
    case A::BFS: return relaxation_states(algo, std::get<GraphProblem>(inst.problem), true);
    case A::BellmanFord: return relaxation_states(algo, std::get<GraphProblem>(inst.problem), false);
    case A::Dijkstra: return dijkstra_states(std::get<GraphProblem>(inst.problem));
    case A::BubbleSort: return bubble_states(std::get<ArrayProblem>(inst.problem).a);
    case A::InsertionSort: return insertion_states(std::get<ArrayProblem>(inst.problem).a);
    default: return string_matcher_states(std::get<StringProblem>(inst.problem));
  }
}

AlgoTrace execute(AlgoName algo, const AlgoInstance& inst) {
  validate(algo, inst);
  AlgoTrace trace;
  trace.algo = algo;
  trace.inputs = inst.inputs;
  trace.outputs = {value_of(output_spec(algo), run(algo, inst))};
  if (hints_enabled(algo)) {
    trace.hints = emit_hints(algo, inst);
    trace.steps = trace.hints.size();
  }
  return trace;
}

}  // namespace narx::clrs
