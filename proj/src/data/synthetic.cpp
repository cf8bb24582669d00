#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <set>

#include "narx/core/error.hpp"
#include "narx/data/dataset.hpp"
#include "narx/model/params.hpp"

namespace narx {

Split make_split(std::size_t n, std::array<double, 3> fractions, std::uint64_t seed) {
  double sum = 0;
  for (double f : fractions) {
    require(f >= 0 && std::isfinite(f), ErrorKind::Config, "split fractions must be non-negative");
    sum += f;
  }
  require(std::abs(sum - 1.0) <= 1e-9, ErrorKind::Config, "split fractions must sum to 1, got " + std::to_string(sum));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  const auto n_train = std::min<std::size_t>(n, static_cast<std::size_t>(std::llround(n * fractions[0])));
  const auto n_valid = std::min<std::size_t>(n - n_train, static_cast<std::size_t>(std::llround(n * fractions[1])));
  Split s;
  s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.valid.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train),
                 idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid));
  s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid), idx.end());
  return s;
}

std::vector<std::size_t> marked_nodes(const MolDataset& ds, std::size_t graph) {
  const auto& g = ds.graphs.at(graph);
  require(!ds.expansion.node.empty(), ErrorKind::Contract, "dataset has no node feature columns");
  // Column 0 expands to one slot per distinct value; slot of value 1 is hot.
  const auto& vals = ds.expansion.node[0].values;
  const auto it = std::find(vals.begin(), vals.end(), 1);
  std::vector<std::size_t> out;
  if (it == vals.end()) return out;
  const auto slot = static_cast<std::size_t>(it - vals.begin());
  for (std::size_t i = 0; i < g.num_nodes; ++i)
    if (g.node_feats.row(i)[slot] == Real(1)) out.push_back(i);
  return out;
}

namespace {

std::vector<std::vector<std::size_t>> adjacency(const GraphInstance& g) {
  std::vector<std::vector<std::size_t>> adj(g.num_nodes);
  for (const auto& e : g.edges) adj[static_cast<std::size_t>(e.src)].push_back(static_cast<std::size_t>(e.dst));
  return adj;
}

}  // namespace

int hop_distance(const GraphInstance& g, std::size_t a, std::size_t b) {
  require(a < g.num_nodes && b < g.num_nodes, ErrorKind::Index, "node outside graph");
  const auto adj = adjacency(g);
  std::vector<int> dist(g.num_nodes, -1);
  std::deque<std::size_t> queue{a};
  dist[a] = 0;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (auto v : adj[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
  }
  return dist[b];
}

bool has_five_cycle(const GraphInstance& g) {
  const auto adj = adjacency(g);
  std::vector<std::set<std::size_t>> nb(g.num_nodes);
  for (std::size_t u = 0; u < g.num_nodes; ++u) nb[u].insert(adj[u].begin(), adj[u].end());
  // Paths start at their smallest node s and only visit larger nodes; a
  // path of five nodes closes when its last node neighbours s.
  std::vector<std::size_t> path;
  std::vector<char> on_path(g.num_nodes, 0);
  auto extend = [&](auto&& self, std::size_t s) -> bool {
    const auto u = path.back();
    if (path.size() == 5) return nb[u].count(s) > 0;
    for (auto v : nb[u]) {
      if (v <= s || on_path[v]) continue;
      path.push_back(v);
      on_path[v] = 1;
      const bool found = self(self, s);
      on_path[v] = 0;
      path.pop_back();
      if (found) return true;
    }
    return false;
  };
  for (std::size_t s = 0; s < g.num_nodes; ++s) {
    path = {s};
    on_path[s] = 1;
    const bool found = extend(extend, s);
    on_path[s] = 0;
    if (found) return true;
  }
  return false;
}

namespace {

constexpr std::int64_t kNodeTypes = 4;
constexpr std::int64_t kBondTypes = 3;

FeatureExpansion synthetic_expansion() {
  FeatureExpansion ex;
  ex.node = {{{0, 1}}, {{0, 1, 2, 3}}};
  ex.edge = {{{0, 1, 2}}};
  return ex;
}

GraphInstance random_graph(const SyntheticSpec& spec, const FeatureExpansion& ex, Rng& rng) {
  std::uniform_int_distribution<std::size_t> size(spec.min_nodes, spec.max_nodes);
  const std::size_t n = size(rng);
  std::set<std::pair<std::size_t, std::size_t>> und;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    und.insert({j, i});
  }
  const auto extra = static_cast<std::size_t>(std::llround(spec.extra_edge_rate * static_cast<double>(n)));
  const std::size_t max_edges = n * (n - 1) / 2;
  std::uniform_int_distribution<std::size_t> node(0, n - 1);
  for (std::size_t k = 0; k < extra && und.size() < max_edges; ++k) {
    std::size_t a = node(rng), b = node(rng);
    while (a == b || und.count({std::min(a, b), std::max(a, b)})) {
      a = node(rng);
      b = node(rng);
    }
    und.insert({std::min(a, b), std::max(a, b)});
  }
  const std::size_t m1 = node(rng);
  std::size_t m2 = node(rng);
  while (m2 == m1) m2 = node(rng);

  GraphInstance g;
  g.num_nodes = n;
  g.node_feats = Tensor({n, ex.node_width()});
  std::uniform_int_distribution<std::int64_t> type(0, kNodeTypes - 1), bond(0, kBondTypes - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = expand_row(ex.node, {i == m1 || i == m2 ? 1 : 0, type(rng)});
    std::copy(row.begin(), row.end(), g.node_feats.row(i).begin());
  }
  g.edge_feats = Tensor({2 * und.size(), ex.edge_width()});
  std::size_t e = 0;
  for (const auto& [u, v] : und) {
    g.edges.push_back({static_cast<Index>(u), static_cast<Index>(v)});
    g.edges.push_back({static_cast<Index>(v), static_cast<Index>(u)});
    const auto row = expand_row(ex.edge, {bond(rng)});
    std::copy(row.begin(), row.end(), g.edge_feats.row(e++).begin());
    std::copy(row.begin(), row.end(), g.edge_feats.row(e++).begin());
  }
  g.graph_feats = Tensor({1}, Real(1));
  return g;
}

}  // namespace

MolDataset gen_synthetic(const SyntheticSpec& spec) {
  require(spec.min_nodes >= 2 && spec.min_nodes <= spec.max_nodes, ErrorKind::Config,
          "synthetic graphs need 2 <= min_nodes <= max_nodes");
  require(spec.max_nodes <= 64, ErrorKind::Config, "synthetic graphs are limited to 64 nodes");
  require(spec.extra_edge_rate >= 0, ErrorKind::Config, "extra_edge_rate must be non-negative");
  MolDataset ds;
  ds.name = spec.rule == LabelRule::PathLength ? "synthetic_path_length" : "synthetic_five_cycle";
  ds.expansion = synthetic_expansion();
  const std::size_t want_pos = spec.num_graphs / 2, want_neg = spec.num_graphs - want_pos;
  std::size_t pos = 0, neg = 0;
  const std::size_t budget = 100 * spec.num_graphs + 1000;
  Rng rng(spec.seed);
  for (std::size_t attempt = 0; attempt < budget && pos + neg < spec.num_graphs; ++attempt) {
    GraphInstance g = random_graph(spec, ds.expansion, rng);
    bool label = false;
    if (spec.rule == LabelRule::PathLength) {
      std::vector<std::size_t> marked;
      for (std::size_t i = 0; i < g.num_nodes; ++i)
        if (g.node_feats.row(i)[1] == Real(1)) marked.push_back(i);
      label = hop_distance(g, marked[0], marked[1]) > static_cast<int>(spec.threshold);
    } else {
      label = has_five_cycle(g);
    }
    if (label ? pos == want_pos : neg == want_neg) continue;
    (label ? pos : neg)++;
    ds.graphs.push_back(std::move(g));
    ds.labels.push_back(label ? 1 : 0);
  }
  if (pos + neg < spec.num_graphs)
    fail(ErrorKind::Generation, "could not balance labels within " + std::to_string(budget) + " attempts (" +
                                    std::to_string(pos) + "/" + std::to_string(want_pos) + " positive, " +
                                    std::to_string(neg) + "/" + std::to_string(want_neg) + " negative)");
  ds.split = make_split(ds.graphs.size(), spec.split, spec.seed ^ 0x5eedULL);
  return ds;
}

}  // namespace narx
