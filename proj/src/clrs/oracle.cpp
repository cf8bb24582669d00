// Naive reference implementations. None of these share code with the
// executors; they are slow on purpose.
#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "narx/clrs/execute.hpp"

namespace narx::clrs {

namespace {

using A = AlgoName;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> relax_distances(const GraphProblem& g, bool unit) {
  std::vector<double> d(g.n, kInf);
  d[static_cast<std::size_t>(g.source)] = 0;
  for (std::size_t round = 0; round < g.n; ++round)
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const auto u = static_cast<std::size_t>(g.edges[e].src);
      const auto v = static_cast<std::size_t>(g.edges[e].dst);
      const double cand = d[u] + (unit ? 1.0 : g.weights[e]);
      if (cand < d[v]) d[v] = cand;
    }
  return d;
}

std::vector<double> shortest_path_parents(const GraphProblem& g, bool unit) {
  const auto d = relax_distances(g, unit);
  std::vector<double> pi(g.n);
  for (std::size_t v = 0; v < g.n; ++v) {
    pi[v] = static_cast<double>(v);
    if (v == static_cast<std::size_t>(g.source) || d[v] == kInf) continue;
    for (std::size_t u = 0; u < g.n; ++u) {
      bool tight = false;
      for (std::size_t e = 0; e < g.edges.size(); ++e)
        if (static_cast<std::size_t>(g.edges[e].src) == u && static_cast<std::size_t>(g.edges[e].dst) == v &&
            d[u] + (unit ? 1.0 : g.weights[e]) == d[v])
          tight = true;
      if (tight) {
        pi[v] = static_cast<double>(u);
        break;
      }
    }
  }
  return pi;
}

using Adjacency = std::vector<std::vector<bool>>;

Adjacency adjacency(const GraphProblem& g) {
  Adjacency adj(g.n, std::vector<bool>(g.n, false));
  for (auto e : g.edges) adj[static_cast<std::size_t>(e.src)][static_cast<std::size_t>(e.dst)] = true;
  return adj;
}

std::size_t components(const Adjacency& adj, std::size_t skip_node = SIZE_MAX) {
  const std::size_t n = adj.size();
  std::vector<bool> seen(n, false);
  std::size_t count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s] || s == skip_node) continue;
    ++count;
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v)
        if (adj[u][v] && !seen[v] && v != skip_node) {
          seen[v] = true;
          stack.push_back(v);
        }
    }
  }
  return count;
}

// Edge {u, v} is in the MST iff no u-v path uses only edges that precede it
// in the (weight, low endpoint, high endpoint) order.
Adjacency mst_by_cycle_property(const GraphProblem& g) {
  Adjacency in(g.n, std::vector<bool>(g.n, false));
  auto key = [&](std::size_t e) {
    const auto s = static_cast<std::size_t>(g.edges[e].src), t = static_cast<std::size_t>(g.edges[e].dst);
    return std::tuple(g.weights[e], std::min(s, t), std::max(s, t));
  };
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto u = static_cast<std::size_t>(g.edges[e].src), v = static_cast<std::size_t>(g.edges[e].dst);
    Adjacency lighter(g.n, std::vector<bool>(g.n, false));
    for (std::size_t f = 0; f < g.edges.size(); ++f)
      if (key(f) < key(e))
        lighter[static_cast<std::size_t>(g.edges[f].src)][static_cast<std::size_t>(g.edges[f].dst)] = true;
    std::vector<bool> seen(g.n, false);
    std::vector<std::size_t> stack{u};
    seen[u] = true;
    while (!stack.empty()) {
      const auto x = stack.back();
      stack.pop_back();
      for (std::size_t y = 0; y < g.n; ++y)
        if (lighter[x][y] && !seen[y]) {
          seen[y] = true;
          stack.push_back(y);
        }
    }
    if (!seen[v]) in[u][v] = true;
  }
  return in;
}

std::vector<double> edge_mask(const GraphProblem& g, const Adjacency& in) {
  std::vector<double> m(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    m[e] = in[static_cast<std::size_t>(g.edges[e].src)][static_cast<std::size_t>(g.edges[e].dst)] ? 1.0 : 0.0;
  return m;
}

std::vector<double> rooted_parents(const Adjacency& tree, std::size_t root) {
  const std::size_t n = tree.size();
  std::vector<double> pi(n);
  std::iota(pi.begin(), pi.end(), 0.0);
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{root};
  seen[root] = true;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (std::size_t v = 0; v < n; ++v)
      if (tree[u][v] && !seen[v]) {
        seen[v] = true;
        pi[v] = static_cast<double>(u);
        stack.push_back(v);
      }
  }
  return pi;
}

std::vector<double> cut_vertices(const GraphProblem& g) {
  const auto adj = adjacency(g);
  const auto base = components(adj);
  std::vector<double> cut(g.n, 0.0);
  for (std::size_t v = 0; v < g.n; ++v) cut[v] = components(adj, v) > base ? 1.0 : 0.0;
  return cut;
}

std::vector<double> bridge_edges(const GraphProblem& g) {
  const auto adj = adjacency(g);
  const auto base = components(adj);
  std::vector<double> out(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto cut = adj;
    const auto u = static_cast<std::size_t>(g.edges[e].src), v = static_cast<std::size_t>(g.edges[e].dst);
    cut[u][v] = cut[v][u] = false;
    out[e] = components(cut) > base ? 1.0 : 0.0;
  }
  return out;
}

std::vector<double> smallest_first_order(const GraphProblem& g) {
  std::vector<bool> placed(g.n, false);
  std::vector<double> pred(g.n);
  std::size_t prev = SIZE_MAX;
  for (std::size_t step = 0; step < g.n; ++step) {
    std::size_t pick = SIZE_MAX;
    for (std::size_t v = 0; v < g.n && pick == SIZE_MAX; ++v) {
      if (placed[v]) continue;
      bool free = true;
      for (auto e : g.edges)
        if (static_cast<std::size_t>(e.dst) == v && !placed[static_cast<std::size_t>(e.src)]) free = false;
      if (free) pick = v;
    }
    if (pick == SIZE_MAX) return {};
    placed[pick] = true;
    pred[pick] = static_cast<double>(prev == SIZE_MAX ? pick : prev);
    prev = pick;
  }
  return pred;
}

std::vector<double> sorted_predecessors(const std::vector<double>& a) {
  std::vector<std::size_t> idx(a.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return a[i] < a[j]; });
  std::vector<double> pred(a.size());
  for (std::size_t k = 0; k < idx.size(); ++k) pred[idx[k]] = static_cast<double>(idx[k == 0 ? 0 : k - 1]);
  return pred;
}

std::vector<double> best_subarray(const std::vector<double>& a) {
  double best = -kInf;
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i; j < a.size(); ++j) {
      const double s = std::accumulate(a.begin() + static_cast<std::ptrdiff_t>(i),
                                       a.begin() + static_cast<std::ptrdiff_t>(j) + 1, 0.0);
      // Visiting (i, j) in lexicographic order keeps the first maximum found,
      // which is leftmost then shortest.
      if (s > best) {
        best = s;
        lo = i;
        hi = j;
      }
    }
  std::vector<double> m(a.size(), 0.0);
  for (auto i = lo; i <= hi; ++i) m[i] = 1.0;
  return m;
}

std::vector<std::size_t> members(std::uint64_t subset, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (subset >> i & 1U) out.push_back(i);
  return out;
}

std::vector<double> mask_of(const std::vector<std::size_t>& items, std::size_t n) {
  std::vector<double> m(n, 0.0);
  for (auto i : items) m[i] = 1.0;
  return m;
}

// Largest pairwise-compatible set; among those, the one whose members sorted
// by (finish, index) are lexicographically smallest.
std::vector<double> best_activity_set(const std::vector<double>& s, const std::vector<double>& f) {
  const std::size_t n = s.size();
  auto by_finish = [&](std::size_t i, std::size_t j) { return f[i] < f[j] || (f[i] == f[j] && i < j); };
  std::vector<std::size_t> best;
  bool have = false;
  for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << n); ++sub) {
    auto m = members(sub, n);
    bool ok = true;
    for (std::size_t x = 0; x < m.size() && ok; ++x)
      for (std::size_t y = x + 1; y < m.size() && ok; ++y)
        ok = s[m[x]] >= f[m[y]] || s[m[y]] >= f[m[x]];
    if (!ok) continue;
    std::sort(m.begin(), m.end(), by_finish);
    if (!have || m.size() > best.size() ||
        (m.size() == best.size() &&
         std::lexicographical_compare(m.begin(), m.end(), best.begin(), best.end(), by_finish))) {
      best = m;
      have = true;
    }
  }
  return mask_of(best, n);
}

std::vector<double> best_schedule(const std::vector<double>& deadline, const std::vector<double>& penalty) {
  const std::size_t n = deadline.size();
  double best = -1;
  std::vector<std::size_t> pick;
  for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << n); ++sub) {
    auto m = members(sub, n);
    std::vector<double> d;
    for (auto i : m) d.push_back(deadline[i]);
    std::sort(d.begin(), d.end());
    bool ok = true;
    for (std::size_t k = 0; k < d.size(); ++k) ok = ok && d[k] >= static_cast<double>(k + 1);
    if (!ok) continue;
    double total = 0;
    for (auto i : m) total += penalty[i];
    if (total > best) {
      best = total;
      pick = m;
    }
  }
  return mask_of(pick, n);
}

double chain_cost(const std::vector<double>& p, std::size_t i, std::size_t j) {
  if (i == j) return 0;
  double best = kInf;
  for (std::size_t k = i; k < j; ++k)
    best = std::min(best, chain_cost(p, i, k) + chain_cost(p, k + 1, j) + p[i] * p[k + 1] * p[j + 1]);
  return best;
}

// Cost of the best tree over keys lo..hi whose root sits at `depth`; empty
// ranges are the dummy leaf lo - 1.
double bst_cost(const std::vector<double>& p, const std::vector<double>& q, std::size_t lo, std::size_t hi,
                double depth) {
  if (lo > hi) return q[lo - 1] * (depth + 1);
  double best = kInf;
  for (std::size_t r = lo; r <= hi; ++r)
    best = std::min(best, p[r] * (depth + 1) + bst_cost(p, q, lo, r - 1, depth + 1) +
                              bst_cost(p, q, r + 1, hi, depth + 1));
  return best;
}

bool is_subsequence(const std::vector<int>& sub, const std::vector<int>& of) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < of.size() && k < sub.size(); ++i)
    if (of[i] == sub[k]) ++k;
  return k == sub.size();
}

double longest_common(const std::vector<int>& x, const std::vector<int>& y) {
  const auto& shorter = x.size() <= y.size() ? x : y;
  const auto& longer = x.size() <= y.size() ? y : x;
  std::size_t best = 0;
  for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << shorter.size()); ++sub) {
    std::vector<int> seq;
    for (auto i : members(sub, shorter.size())) seq.push_back(shorter[i]);
    if (seq.size() > best && is_subsequence(seq, longer)) best = seq.size();
  }
  return static_cast<double>(best);
}

__int128 cross(Point o, Point a, Point b) {
  return static_cast<__int128>(a.x - o.x) * (b.y - o.y) - static_cast<__int128>(a.y - o.y) * (b.x - o.x);
}

bool in_box(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

// A point is a hull vertex iff it is not a convex combination of the others,
// i.e. it lies in no closed triangle and on no segment spanned by them.
std::vector<double> extreme_points(const std::vector<Point>& pts) {
  const std::size_t n = pts.size();
  std::vector<double> mask(n, 1.0);
  for (std::size_t p = 0; p < n; ++p) {
    bool inside = false;
    for (std::size_t a = 0; a < n && !inside; ++a)
      for (std::size_t b = a + 1; b < n && !inside; ++b) {
        if (a == p || b == p) continue;
        if (cross(pts[a], pts[b], pts[p]) == 0 && in_box(pts[a], pts[b], pts[p])) inside = true;
        for (std::size_t c = b + 1; c < n && !inside; ++c) {
          if (c == p || cross(pts[a], pts[b], pts[c]) == 0) continue;
          const auto d1 = cross(pts[a], pts[b], pts[p]);
          const auto d2 = cross(pts[b], pts[c], pts[p]);
          const auto d3 = cross(pts[c], pts[a], pts[p]);
          inside = (d1 >= 0 && d2 >= 0 && d3 >= 0) || (d1 <= 0 && d2 <= 0 && d3 <= 0);
        }
      }
    if (inside) mask[p] = 0.0;
  }
  return mask;
}

// Solves p + t r = q + u s exactly; 0 <= t, u <= 1 means the segments meet.
bool segments_meet(Point p, Point p2, Point q, Point q2) {
  const __int128 rx = p2.x - p.x, ry = p2.y - p.y, sx = q2.x - q.x, sy = q2.y - q.y;
  const __int128 qpx = q.x - p.x, qpy = q.y - p.y;
  const __int128 denom = rx * sy - ry * sx;
  const __int128 t_num = qpx * sy - qpy * sx;
  const __int128 u_num = qpx * ry - qpy * rx;
  auto within = [](__int128 num, __int128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    return 0 <= num && num <= den;
  };
  if (denom != 0) return within(t_num, denom) && within(u_num, denom);
  // Parallel. Degenerate segments reduce to point-on-segment tests.
  if (rx == 0 && ry == 0 && sx == 0 && sy == 0) return p == q;
  if (rx == 0 && ry == 0) return cross(q, q2, p) == 0 && in_box(q, q2, p);
  if (sx == 0 && sy == 0) return cross(p, p2, q) == 0 && in_box(p, p2, q);
  if (u_num != 0) return false;  // parallel, not collinear
  // Collinear: project onto r and compare intervals.
  const __int128 rr = rx * rx + ry * ry;
  const __int128 t0 = qpx * rx + qpy * ry;
  const __int128 t1 = t0 + sx * rx + sy * ry;
  const __int128 lo = std::min(t0, t1), hi = std::max(t0, t1);
  return lo <= rr && hi >= 0;
}

bool needs_exhaustive(A algo) {
  switch (algo) {
    case A::ActivitySelector: case A::TaskScheduling: case A::MatrixChainOrder:
    case A::OptimalBST: case A::LCSLength:
      return true;
    default: return false;
  }
}

std::vector<double> reference_output(A algo, const AlgoInstance& inst) {
  if (const auto* g = std::get_if<GraphProblem>(&inst.problem)) {
    switch (algo) {
      case A::BFS: return shortest_path_parents(*g, true);
      case A::BellmanFord: case A::Dijkstra: case A::DAGShortestPaths: return shortest_path_parents(*g, false);
      case A::MSTPrim: return rooted_parents(mst_by_cycle_property(*g), static_cast<std::size_t>(g->source));
      case A::MSTKruskal: return edge_mask(*g, mst_by_cycle_property(*g));
      case A::ArticulationPoints: return cut_vertices(*g);
      case A::Bridges: return bridge_edges(*g);
      default: return smallest_first_order(*g);
    }
  }
  if (const auto* a = std::get_if<ArrayProblem>(&inst.problem)) {
    const auto n = a->a.size();
    switch (algo) {
      case A::BubbleSort: case A::InsertionSort: case A::Quicksort: return sorted_predecessors(a->a);
      case A::Minimum: {
        std::vector<double> m(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          bool smallest = true;
          for (std::size_t j = 0; j < n; ++j)
            if (a->a[j] < a->a[i] || (a->a[j] == a->a[i] && j < i)) smallest = false;
          if (smallest) m[i] = 1.0;
        }
        return m;
      }
      case A::BinarySearch: {
        std::vector<double> m(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
          if (a->a[i] >= a->target) {
            m[i] = 1.0;
            break;
          }
        return m;
      }
      case A::FindMaxSubarray: return best_subarray(a->a);
      case A::ActivitySelector: return best_activity_set(a->a, a->b);
      case A::TaskScheduling: return best_schedule(a->a, a->b);
      case A::MatrixChainOrder: return {n < 2 ? 0.0 : chain_cost(a->a, 0, n - 2)};
      default: return {bst_cost(a->a, a->b, 1, n - 1, 0)};
    }
  }
  if (const auto* s = std::get_if<StringProblem>(&inst.problem)) {
    if (algo == A::LCSLength) return {longest_common(s->text, s->pattern)};
    const auto at = std::search(s->text.begin(), s->text.end(), s->pattern.begin(), s->pattern.end());
    return std::vector<double>(s->text.size() + s->pattern.size(),
                               static_cast<double>(at - s->text.begin()));
  }
  const auto& pts = std::get<GeometryProblem>(inst.problem).points;
  if (algo == A::SegmentsIntersect) return {segments_meet(pts[0], pts[1], pts[2], pts[3]) ? 1.0 : 0.0};
  return extreme_points(pts);
}

}  // namespace

OracleReport oracle_check(AlgoName algo, const AlgoInstance& inst, const AlgoTrace& trace) {
  OracleReport report;
  const auto name = output_spec(algo).name;
  const auto* got = find_probe(trace.outputs, name);
  if (trace.algo != algo || got == nullptr) {
    report.pass = false;
    report.message = "trace has no '" + name + "' output for " + std::string(to_string(algo));
    return report;
  }
  if (needs_exhaustive(algo) && encoded_nodes(inst) > kMaxExhaustiveSize) {
    report.skipped = true;
    report.message = "instance too large for the exhaustive oracle";
    return report;
  }
  const auto want = reference_output(algo, inst);
  if (want.size() != got->values.size()) {
    report.pass = false;
    report.message = name + ": expected " + std::to_string(want.size()) + " values, got " +
                     std::to_string(got->values.size());
    return report;
  }
  for (std::size_t i = 0; i < want.size(); ++i)
    if (want[i] != got->values[i]) {
      std::ostringstream os;
      os << to_string(algo) << " " << name << "[" << i << "]: oracle " << want[i] << ", trace "
         << got->values[i];
      report.pass = false;
      report.message = os.str();
      return report;
    }
  return report;
}

}  // namespace narx::clrs
