#include <doctest.h>

#include <praag/errors.hpp>
#include <praag/graph.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "test_util.hpp"

using namespace praag;
using namespace praag::testutil;

TEST_CASE("graph validation rejects malformed graphs") {
  Graph ok{{"a", "b"}, {{0, 1}}};
  CHECK_NOTHROW(ok.validate());
  Graph reversed{{"a", "b"}, {{1, 0}}}; // orientation is free
  CHECK_NOTHROW(reversed.validate());
  Graph dup_vertex{{"a", "a"}, {}};
  CHECK_THROWS_AS(dup_vertex.validate(), ValidationError);
  Graph loop{{"a"}, {{0, 0}}};
  CHECK_THROWS_AS(loop.validate(), ValidationError);
  Graph dup_edge{{"a", "b"}, {{0, 1}, {0, 1}}};
  CHECK_THROWS_AS(dup_edge.validate(), ValidationError);
  Graph antiparallel{{"a", "b"}, {{0, 1}, {1, 0}}};
  CHECK_THROWS_AS(antiparallel.validate(), ValidationError);
  Graph bad_index{{"a", "b"}, {{0, 2}}};
  CHECK_THROWS_AS(bad_index.validate(), ValidationError);
}

TEST_CASE("adjacency is symmetric and matches the edge list") {
  Graph g{{"a", "b", "c"}, {{0, 1}, {2, 1}}};
  CHECK(g.adjacent(0, 1));
  CHECK(g.adjacent(1, 0));
  CHECK(g.adjacent(1, 2));
  CHECK_FALSE(g.adjacent(0, 2));
  auto adj = g.adjacency();
  CHECK(adj[1].size() == 2);
  CHECK(adj[0] == std::vector<std::size_t>{1});
}

TEST_CASE("clique counts match subset enumeration on all small graphs") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::uint64_t mask = 0; mask < edge_masks(n); ++mask) {
      auto g = mask_graph(n, mask);
      CHECK(clique_polynomial(g.graph) == clique_counts_oracle(g.graph));
    }
  }
  Graph k4{{"a", "b", "c", "d"}, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  CHECK(clique_polynomial(k4) == std::vector<long long>{1, 4, 6, 4, 1});
  Graph c4{{"a", "b", "c", "d"}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}};
  CHECK(clique_polynomial(c4) == std::vector<long long>{1, 4, 4});
}

TEST_CASE("triangle detection matches brute force on all 4-vertex graphs") {
  for (std::uint64_t mask = 0; mask < edge_masks(4); ++mask) {
    auto g = mask_graph(4, mask);
    CHECK(is_triangle_free(g.graph) == triangle_free_oracle(g.graph));
  }
}

TEST_CASE("opposite graph complements the edge set") {
  std::mt19937 rng(67);
  for (int t = 0; t < 20; ++t) {
    auto g = mask_graph(5, std::uniform_int_distribution<std::uint64_t>(0, edge_masks(5) - 1)(rng));
    auto op = opposite_graph(g.graph);
    CHECK_NOTHROW(op.validate());
    CHECK(op.vertices == g.graph.vertices);
    CHECK(op.edges.size() + g.graph.edges.size() == 10);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = i + 1; j < 5; ++j)
        CHECK(op.adjacent(i, j) == !g.graph.adjacent(i, j));
  }
}

TEST_CASE("induced subgraphs keep order and edges") {
  Graph g{{"a", "b", "c", "d"}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}};
  auto sub = full_subgraph(g, {2, 0, 3});
  CHECK(sub.vertices == std::vector<std::string>{"c", "a", "d"});
  CHECK(sub.edges.size() == 2); // c-d and d-a survive
  CHECK(sub.adjacent(0, 2));
  CHECK(sub.adjacent(1, 2));
  CHECK_FALSE(sub.adjacent(0, 1));
}

TEST_CASE("completeness and connectivity") {
  Graph k3{{"a", "b", "c"}, {{0, 1}, {1, 2}, {2, 0}}};
  CHECK(is_complete(k3));
  CHECK(is_connected(k3));
  Graph path{{"a", "b", "c"}, {{0, 1}, {1, 2}}};
  CHECK_FALSE(is_complete(path));
  CHECK(is_connected(path));
  Graph split{{"a", "b", "c", "d"}, {{0, 1}, {2, 3}}};
  CHECK_FALSE(is_connected(split));
  auto comps = connected_components(split);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == std::vector<std::size_t>{0, 1});
  CHECK(comps[1] == std::vector<std::size_t>{2, 3});
  Graph single{{"a"}, {}};
  CHECK(is_complete(single));
  CHECK(is_connected(single));
}

// later neighbors of each vertex in the order must form a clique
static bool is_perfect_elimination(const Graph& g, const std::vector<std::size_t>& order) {
  std::vector<std::size_t> pos(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::vector<std::size_t> later;
    for (std::size_t u = 0; u < g.size(); ++u)
      if (g.adjacent(order[i], u) && pos[u] > i) later.push_back(u);
    for (std::size_t a = 0; a < later.size(); ++a)
      for (std::size_t b = a + 1; b < later.size(); ++b)
        if (!g.adjacent(later[a], later[b])) return false;
  }
  return true;
}

static void collect_leaf_vertices(const PastingNode* node, std::set<std::size_t>& out) {
  if (!node) return;
  if (node->leaf) {
    out.insert(node->vertices.begin(), node->vertices.end());
    return;
  }
  collect_leaf_vertices(node->left.get(), out);
  collect_leaf_vertices(node->right.get(), out);
}

static void check_pasting_tree(const Graph& g, const PastingNode* node) {
  REQUIRE(node != nullptr);
  if (node->leaf) {
    for (std::size_t a = 0; a < node->vertices.size(); ++a)
      for (std::size_t b = a + 1; b < node->vertices.size(); ++b)
        CHECK(g.adjacent(node->vertices[a], node->vertices[b]));
    return;
  }
  for (std::size_t a = 0; a < node->separator.size(); ++a)
    for (std::size_t b = a + 1; b < node->separator.size(); ++b)
      CHECK(g.adjacent(node->separator[a], node->separator[b]));
  std::set<std::size_t> left, right;
  collect_leaf_vertices(node->left.get(), left);
  collect_leaf_vertices(node->right.get(), right);
  for (std::size_t s : node->separator) {
    CHECK(left.count(s) == 1);
    CHECK(right.count(s) == 1);
  }
  check_pasting_tree(g, node->left.get());
  check_pasting_tree(g, node->right.get());
}

TEST_CASE("chordal recognition on fixed graphs") {
  Graph book{{"x", "y", "z", "w"}, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}}};
  auto cs = chordal_structure(book);
  CHECK(cs.chordal);
  CHECK(is_perfect_elimination(book, cs.elimination_order));
  check_pasting_tree(book, cs.tree.get());
  std::set<std::size_t> all;
  collect_leaf_vertices(cs.tree.get(), all);
  CHECK(all.size() == 4);

  for (std::size_t len : {4u, 5u, 6u}) {
    Graph cyc;
    for (std::size_t i = 0; i < len; ++i) {
      cyc.vertices.push_back("v" + std::to_string(i));
      cyc.edges.emplace_back(i, (i + 1) % len);
    }
    auto ncs = chordal_structure(cyc);
    CHECK_FALSE(ncs.chordal);
    REQUIRE(ncs.chordless_cycle.size() >= 4);
    // the witness really is a cycle with no chord
    const auto& w = ncs.chordless_cycle;
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(cyc.adjacent(w[i], w[(i + 1) % w.size()]));
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t j = i + 2; j < w.size(); ++j)
        if (!(i == 0 && j == w.size() - 1)) CHECK_FALSE(cyc.adjacent(w[i], w[j]));
  }
}

TEST_CASE("chordal recognition on random chordal constructions") {
  std::mt19937 rng(71);
  for (int t = 0; t < 30; ++t) {
    // grow a graph vertex by vertex, each new vertex glued onto a known clique
    Graph g{{"v0"}, {}};
    std::vector<std::vector<std::size_t>> cliques = {{0}};
    std::uniform_int_distribution<std::size_t> nv(4, 8);
    const std::size_t n = nv(rng);
    for (std::size_t v = 1; v < n; ++v) {
      g.vertices.push_back("v" + std::to_string(v));
      auto base = cliques[std::uniform_int_distribution<std::size_t>(0, cliques.size() - 1)(rng)];
      for (std::size_t u : base) g.edges.emplace_back(u, v);
      base.push_back(v);
      cliques.push_back(base);
      cliques.push_back({v});
    }
    g.validate();
    if (!is_connected(g)) continue;
    auto cs = chordal_structure(g);
    CHECK(cs.chordal);
    CHECK(is_perfect_elimination(g, cs.elimination_order));
    check_pasting_tree(g, cs.tree.get());
  }
}

TEST_CASE("p-graph label windows follow the prime") {
  auto g5 = pg("pgraph v1\np 5\nvertices a b\nedge a b 0 5\n");
  CHECK_NOTHROW(g5.validate());
  CHECK_THROWS_AS(pg("pgraph v1\np 5\nvertices a b\nedge a b 0 3\n"), ValidationError);
  // p = 2 needs valuation >= 2
  CHECK_THROWS_AS(pg("pgraph v1\np 2\nvertices a b\nedge a b 0 2\n"), ValidationError);
  CHECK_NOTHROW(pg("pgraph v1\np 2\nvertices a b\nedge a b 0 4\n"));
  CHECK_THROWS_AS(pg("pgraph v1\np 4\nvertices a b\n"), ValidationError); // p must be prime
}

TEST_CASE("p-graph parsing diagnostics carry line numbers") {
  auto expect_throw_mentions = [](const std::string& text, const std::string& needle) {
    try {
      parse_pgraph_string(text);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_throw_mentions("vertices a b\n", "pgraph");
  expect_throw_mentions("pgraph v1\nvertices a b\nedge a c 0 0\n", "line 3");
  expect_throw_mentions("pgraph v1\nvertices a b\nedge a b 0\n", "line 3");
  expect_throw_mentions("pgraph v1\nvertices a b\nedge a b 0 x\n", "line 3");
}

TEST_CASE("p-graph serialization round-trips") {
  const std::string text =
      "pgraph v1\np 5\nprecision 4\nvertices x y z\nedge x y 0 -5\nedge y z 25~ 0\nedge z x 0 5\n";
  auto g = pg(text);
  auto canon = serialize_pgraph(g);
  auto g2 = parse_pgraph_string(canon);
  CHECK(serialize_pgraph(g2) == canon);
  CHECK(g2.p == g.p);
  CHECK(g2.precision == g.precision);
  CHECK(g2.graph.vertices == g.graph.vertices);
  CHECK(g2.graph.edges == g.graph.edges);
  for (std::size_t e = 0; e < g.labels.size(); ++e) {
    CHECK(g2.labels[e].first.to_string() == g.labels[e].first.to_string());
    CHECK(g2.labels[e].second.to_string() == g.labels[e].second.to_string());
  }
  // comments and defaults
  auto d = pg("pgraph v1\n# comment\nvertices a\n");
  CHECK(d.p == 5);
  CHECK(d.precision == 4);
}

TEST_CASE("p-graph induced subgraphs keep labels aligned") {
  auto g = pg("pgraph v1\nvertices a b c\nedge a b 0 -5\nedge b c 0 25\n");
  auto sub = g.induced({1, 2});
  CHECK(sub.graph.vertices == std::vector<std::string>{"b", "c"});
  REQUIRE(sub.labels.size() == 1);
  CHECK(sub.labels[0].second.exact_value() == 25);
}
