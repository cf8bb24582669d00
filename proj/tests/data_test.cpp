#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "narx/core/error.hpp"
#include "narx/data/dataset.hpp"

using namespace narx;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("narx_data_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

// Two graphs: a 2-node graph with one bond and a 3-node path.
void write_example(const fs::path& dir) {
  write_file(dir / "num-node-list.csv", "2\n3\n");
  write_file(dir / "num-edge-list.csv", "1\n2\n");
  write_file(dir / "edge.csv", "0,1\n0,1\n1,2\n");
  write_file(dir / "node-feat.csv", "6,0\n8,1\n6,0\n7,0\n6,2\n");
  write_file(dir / "edge-feat.csv", "1\n0\n2\n");
  write_file(dir / "graph-label.csv", "1\n0\n");
}

void check_ingestion_error(const fs::path& dir, const std::string& file, const std::string& line) {
  try {
    load_ogb_csv_dir(dir.string());
    FAIL("expected an ingestion error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Ingestion);
    const std::string msg = e.what();
    INFO(msg);
    CHECK(msg.find(file) != std::string::npos);
    CHECK(msg.find("line " + line) != std::string::npos);
  }
}

// All-pairs hop distances by relaxation over the edge list.
std::vector<std::vector<int>> floyd_warshall(const GraphInstance& g) {
  const int inf = 1 << 20;
  const std::size_t n = g.num_nodes;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges) d[static_cast<std::size_t>(e.src)][static_cast<std::size_t>(e.dst)] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  for (auto& row : d)
    for (auto& v : row)
      if (v == inf) v = -1;
  return d;
}

// Tries every 5-node subset in every cyclic order.
bool brute_five_cycle(const GraphInstance& g) {
  std::set<std::pair<std::size_t, std::size_t>> adj;
  for (const auto& e : g.edges) adj.insert({static_cast<std::size_t>(e.src), static_cast<std::size_t>(e.dst)});
  const std::size_t n = g.num_nodes;
  if (n < 5) return false;
  std::vector<char> pick(n, 0);
  std::fill(pick.begin(), pick.begin() + 5, 1);
  do {
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < n; ++i)
      if (pick[i]) nodes.push_back(i);
    std::sort(nodes.begin() + 1, nodes.end());
    do {
      bool cycle = true;
      for (std::size_t i = 0; i < 5 && cycle; ++i) cycle = adj.count({nodes[i], nodes[(i + 1) % 5]}) > 0;
      if (cycle) return true;
    } while (std::next_permutation(nodes.begin() + 1, nodes.end()));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return false;
}

GraphInstance cycle_graph(std::size_t n) {
  GraphInstance g;
  g.num_nodes = n;
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = (i + 1) % n;
    g.edges.push_back({static_cast<Index>(i), static_cast<Index>(j)});
    g.edges.push_back({static_cast<Index>(j), static_cast<Index>(i)});
  }
  return g;
}

}  // namespace

TEST_CASE("one-hot expansion uses sorted distinct values per column") {
  const auto ex = make_expansion({{6, 0}, {8, 1}, {6, 2}}, {});
  REQUIRE(ex.node.size() == 2);
  CHECK(ex.node[0].values == std::vector<std::int64_t>{6, 8});
  CHECK(ex.node[1].values == std::vector<std::int64_t>{0, 1, 2});
  CHECK(ex.node_width() == 5);
  CHECK(ex.edge_width() == 1);
  CHECK(expand_row(ex.node, {8, 2}) == std::vector<Real>{0, 1, 0, 0, 1});
  CHECK(expand_row(ex.edge, {}) == std::vector<Real>{1});
  CHECK_THROWS_AS(expand_row(ex.node, {7, 0}), Error);
}

TEST_CASE("OGB directory example loads") {
  TempDir tmp;
  write_example(tmp.path);
  const auto ds = load_ogb_csv_dir(tmp.path.string());
  REQUIRE(ds.graphs.size() == 2);
  CHECK(ds.graphs[0].num_nodes == 2);
  CHECK(ds.graphs[1].num_nodes == 3);
  CHECK(ds.graphs[0].num_edges() == 2);
  CHECK(ds.graphs[1].num_edges() == 4);
  CHECK(ds.labels == std::vector<int>{1, 0});
  CHECK(ds.node_dim() == 6);  // {6,7,8} + {0,1,2}
  CHECK(ds.edge_dim() == 3);
  // Graph 1, edge 1 -> 2 and its reverse carry bond value 2.
  CHECK(ds.graphs[1].edges[2] == Edge{1, 2});
  CHECK(ds.graphs[1].edges[3] == Edge{2, 1});
  CHECK(std::vector<Real>(ds.graphs[1].edge_feats.row(3).begin(), ds.graphs[1].edge_feats.row(3).end()) ==
        std::vector<Real>{0, 0, 1});
  CHECK(ds.graphs[0].graph_feats.size() == 1);
  CHECK(ds.split.train.size() + ds.split.valid.size() + ds.split.test.size() == 2);
}

TEST_CASE("missing labels drop graphs and remap the split") {
  TempDir tmp;
  write_example(tmp.path);
  write_file(tmp.path / "num-node-list.csv", "2\n3\n2\n");
  write_file(tmp.path / "num-edge-list.csv", "1\n2\n1\n");
  write_file(tmp.path / "edge.csv", "0,1\n0,1\n1,2\n1,0\n");
  write_file(tmp.path / "node-feat.csv", "6,0\n8,1\n6,0\n7,0\n6,2\n6,0\n6,0\n");
  write_file(tmp.path / "edge-feat.csv", "1\n0\n2\n0\n");
  write_file(tmp.path / "graph-label.csv", "1.0\nnan\n0\n");
  write_file(tmp.path / "split/train.csv", "0\n1\n");
  write_file(tmp.path / "split/valid.csv", "2\n");
  write_file(tmp.path / "split/test.csv", "");
  const auto ds = load_ogb_csv_dir(tmp.path.string());
  CHECK(ds.graphs.size() == 2);
  CHECK(ds.dropped_missing_labels == 1);
  CHECK(ds.labels == std::vector<int>{1, 0});
  CHECK(ds.split.train == std::vector<std::size_t>{0});
  CHECK(ds.split.valid == std::vector<std::size_t>{1});
  CHECK(ds.split.test.empty());
}

TEST_CASE("label column defaults to 1 for clintox") {
  TempDir tmp;
  const auto dir = tmp.path / "ogbg_molclintox";
  write_example(dir);
  write_file(dir / "graph-label.csv", "1,0\n0,1\n");
  CHECK(load_ogb_csv_dir(dir.string()).labels == std::vector<int>{0, 1});
  LoadOptions opts;
  opts.label_column = 0;
  CHECK(load_ogb_csv_dir(dir.string(), opts).labels == std::vector<int>{1, 0});
}

TEST_CASE("malformed files name the file and line") {
  SUBCASE("endpoint outside its graph") {
    TempDir tmp;
    write_example(tmp.path);
    write_file(tmp.path / "edge.csv", "0,1\n0,1\n1,3\n");
    check_ingestion_error(tmp.path, "edge.csv", "3");
  }
  SUBCASE("non-integer feature") {
    TempDir tmp;
    write_example(tmp.path);
    write_file(tmp.path / "node-feat.csv", "6,0\n8,1\n6,x\n7,0\n6,2\n");
    check_ingestion_error(tmp.path, "node-feat.csv", "3");
  }
  SUBCASE("ragged feature row") {
    TempDir tmp;
    write_example(tmp.path);
    write_file(tmp.path / "node-feat.csv", "6,0\n8,1\n6\n7,0\n6,2\n");
    check_ingestion_error(tmp.path, "node-feat.csv", "3");
  }
  SUBCASE("too few edges") {
    TempDir tmp;
    write_example(tmp.path);
    write_file(tmp.path / "edge.csv", "0,1\n0,1\n");
    check_ingestion_error(tmp.path, "edge.csv", "2");
  }
  SUBCASE("bad label") {
    TempDir tmp;
    write_example(tmp.path);
    write_file(tmp.path / "graph-label.csv", "1\n2\n");
    check_ingestion_error(tmp.path, "graph-label.csv", "2");
  }
  SUBCASE("count files disagree") {
    TempDir tmp;
    write_example(tmp.path);
    write_file(tmp.path / "num-edge-list.csv", "1\n");
    check_ingestion_error(tmp.path, "num-edge-list.csv", "2");
  }
}

TEST_CASE("export then ingest is exact") {
  TempDir tmp;
  write_example(tmp.path / "in");
  const auto a = load_ogb_csv_dir((tmp.path / "in").string());
  export_ogb_csv_dir(a, (tmp.path / "out").string());
  const auto b = load_ogb_csv_dir((tmp.path / "out").string());
  CHECK(a.graphs == b.graphs);
  CHECK(a.labels == b.labels);
  CHECK(a.split == b.split);
  CHECK(a.expansion == b.expansion);

  SyntheticSpec spec;
  spec.num_graphs = 40;
  spec.seed = 3;
  const auto s = gen_synthetic(spec);
  export_ogb_csv_dir(s, (tmp.path / "syn").string());
  const auto t = load_ogb_csv_dir((tmp.path / "syn").string());
  CHECK(s.graphs == t.graphs);
  CHECK(s.labels == t.labels);
  CHECK(s.split == t.split);
}

TEST_CASE("split sizes and validation") {
  const auto s = make_split(10, {0.8, 0.1, 0.1}, 7);
  CHECK(s.train.size() == 8);
  CHECK(s.valid.size() == 1);
  CHECK(s.test.size() == 1);
  std::vector<std::size_t> all = s.train;
  all.insert(all.end(), s.valid.begin(), s.valid.end());
  all.insert(all.end(), s.test.begin(), s.test.end());
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> want(10);
  std::iota(want.begin(), want.end(), 0);
  CHECK(all == want);
  CHECK(make_split(10, {0.8, 0.1, 0.1}, 7) == s);
  CHECK_THROWS_AS(make_split(10, {0.8, 0.3, 0.1}, 0), Error);
  CHECK_THROWS_AS(make_split(10, {1.1, -0.1, 0.0}, 0), Error);
}

TEST_CASE("synthetic path-length labels match an all-pairs oracle") {
  SyntheticSpec spec;
  spec.num_graphs = 200;
  spec.seed = 11;
  const auto ds = gen_synthetic(spec);
  REQUIRE(ds.graphs.size() == 200);
  CHECK(std::count(ds.labels.begin(), ds.labels.end(), 1) == 100);
  CHECK(ds.split.train.size() == 160);
  for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
    const auto& g = ds.graphs[i];
    CHECK(validate(g).empty());
    CHECK(g.num_nodes >= spec.min_nodes);
    CHECK(g.num_nodes <= spec.max_nodes);
    const auto marked = marked_nodes(ds, i);
    REQUIRE(marked.size() == 2);
    const auto d = floyd_warshall(g);
    // Spanning tree: everything reachable.
    for (const auto& row : d) CHECK(std::find(row.begin(), row.end(), -1) == row.end());
    CHECK(hop_distance(g, marked[0], marked[1]) == d[marked[0]][marked[1]]);
    CHECK(ds.labels[i] == (d[marked[0]][marked[1]] > 3 ? 1 : 0));
  }
  const auto again = gen_synthetic(spec);
  CHECK(again.graphs == ds.graphs);
  CHECK(again.labels == ds.labels);
}

TEST_CASE("five-cycle detection matches brute force") {
  CHECK(has_five_cycle(cycle_graph(5)));
  CHECK_FALSE(has_five_cycle(cycle_graph(4)));
  CHECK_FALSE(has_five_cycle(cycle_graph(6)));
  SyntheticSpec spec;
  spec.rule = LabelRule::FiveCycle;
  spec.num_graphs = 60;
  spec.min_nodes = 6;
  spec.max_nodes = 10;
  spec.extra_edge_rate = 0.5;
  spec.seed = 5;
  const auto ds = gen_synthetic(spec);
  CHECK(std::count(ds.labels.begin(), ds.labels.end(), 1) == 30);
  for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
    CHECK(has_five_cycle(ds.graphs[i]) == brute_five_cycle(ds.graphs[i]));
    CHECK(ds.labels[i] == (brute_five_cycle(ds.graphs[i]) ? 1 : 0));
  }
}

TEST_CASE("unbalanceable rule raises a generation error") {
  SyntheticSpec spec;
  spec.num_graphs = 20;
  spec.threshold = 0;  // every pair of distinct nodes is positive
  try {
    gen_synthetic(spec);
    FAIL("expected a generation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Generation);
  }
  spec.threshold = 3;
  spec.max_nodes = 65;
  CHECK_THROWS_AS(gen_synthetic(spec), Error);
}
