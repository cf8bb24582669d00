#include <random>

#include "doctest.h"
#include "narx/core/error.hpp"
#include "narx/graph/graph.hpp"
#include "support.hpp"

using namespace narx;

namespace {

GraphInstance two_node_graph() {
  GraphInstance g;
  g.num_nodes = 2;
  g.edges = {{0, 1}};
  g.node_feats = Tensor::matrix(2, 1, {0.5, 1.5});
  g.edge_feats = Tensor::matrix(1, 1, {2});
  g.graph_feats = Tensor::vector({1});
  return g;
}

GraphInstance random_graph(std::mt19937_64& rng) {
  GraphInstance g;
  g.num_nodes = 1 + rng() % 7;
  const std::size_t m = rng() % 12;
  for (std::size_t e = 0; e < m; ++e)
    g.edges.push_back({static_cast<Index>(rng() % g.num_nodes),
                       static_cast<Index>(rng() % g.num_nodes)});
  g.node_feats = testing::random_tensor({g.num_nodes, 3}, rng);
  g.edge_feats = testing::random_tensor({m, 2}, rng);
  g.graph_feats = testing::random_tensor({1}, rng);
  if (rng() % 2) g.label = std::vector<Real>{Real(rng() % 2)};
  return g;
}

}  // namespace

TEST_CASE("validate") {
  auto g = two_node_graph();
  CHECK(validate(g).empty());

  auto bad_edge = g;
  bad_edge.edges = {{0, 5}};
  auto v = validate(bad_edge);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == Violation::Kind::Index);

  auto bad_rows = g;
  bad_rows.node_feats = Tensor({3, 1});
  v = validate(bad_rows);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == Violation::Kind::Shape);
}

TEST_CASE("batch") {
  auto g = two_node_graph();
  SUBCASE("single graph") {
    std::vector<GraphInstance> gs{g};
    auto b = batch(gs);
    CHECK(b.edges == g.edges);
    CHECK(b.graph_index == std::vector<Index>{0, 0});
  }
  SUBCASE("offsets shift edges") {
    std::vector<GraphInstance> gs{g, g};
    auto b = batch(gs);
    REQUIRE(b.edges.size() == 2);
    CHECK(b.edges[1] == Edge{2, 3});
    CHECK(b.graph_index == std::vector<Index>{0, 0, 1, 1});
  }
  SUBCASE("mixed dims") {
    auto h = g;
    h.node_feats = Tensor({2, 4});
    std::vector<GraphInstance> gs{g, h};
    CHECK_THROWS_AS(batch(gs), Error);
  }
}

TEST_CASE("unbatch(batch(gs)) == gs") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<GraphInstance> gs;
    const std::size_t count = 1 + rng() % 6;
    for (std::size_t i = 0; i < count; ++i) gs.push_back(random_graph(rng));
    auto b = batch(gs);
    std::size_t nodes = 0, edges = 0;
    for (const auto& g : gs) {
      nodes += g.num_nodes;
      edges += g.num_edges();
    }
    CHECK(b.num_nodes == nodes);
    CHECK(b.num_edges() == edges);
    CHECK(std::is_sorted(b.graph_index.begin(), b.graph_index.end()));
    CHECK(unbatch(b) == gs);
  }
}
