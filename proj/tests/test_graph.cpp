#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "hclab/graph.hpp"

using namespace hclab;

TEST(Torus, SmallShapes) {
  auto k2 = build_torus({2, 1});
  EXPECT_EQ(k2.vertex_count(), 2u);
  EXPECT_EQ(k2.edge_count(), 1u);
  EXPECT_EQ(k2.regular_degree(), 1u);

  auto c4 = build_torus({4, 1});
  EXPECT_EQ(c4.edge_count(), 4u);
  EXPECT_EQ(c4.regular_degree(), 2u);

  auto q3 = build_torus({2, 3});
  EXPECT_EQ(q3.vertex_count(), 8u);
  EXPECT_EQ(q3.edge_count(), 12u);
  EXPECT_EQ(q3.regular_degree(), 3u);
  EXPECT_EQ(q3, build_hypercube(3));
}

TEST(Torus, RowMajorCoordinates) {
  TorusSpec s{4, 2};
  for (Vertex v = 0; v < 16; ++v) {
    auto c = s.coords(v);
    EXPECT_EQ(s.index(c), v);
  }
  auto g = build_torus(s);
  EXPECT_TRUE(g.is_connected());
  EXPECT_EQ(g.edge_count(), 32u);
  for (Vertex v = 0; v < 16; ++v) {
    auto c = s.coords(v);
    EXPECT_EQ(g.parity(v), (c[0] + c[1]) % 2 ? Parity::Odd : Parity::Even);
  }
}

TEST(Torus, OddSideHasNoParity) {
  auto g = build_torus({3, 2});
  EXPECT_EQ(g.vertex_count(), 9u);
  EXPECT_EQ(g.regular_degree(), 4u);
  EXPECT_FALSE(g.has_parity());
  EXPECT_THROW(build_torus({1, 2}), GraphError);
  EXPECT_THROW(build_torus({4, 0}), GraphError);
}

TEST(Graph, FromEdgesErrors) {
  EXPECT_THROW(BipartiteGraph::from_edges(2, {{0, 0}}), GraphError);
  EXPECT_THROW(BipartiteGraph::from_edges(2, {{0, 1}, {0, 1}}), GraphError);
  EXPECT_THROW(BipartiteGraph::from_edges(2, {{0, 2}}), GraphError);
  EXPECT_THROW(BipartiteGraph::from_edges(2, {{0, 1}}, std::vector<Parity>{Parity::Even, Parity::Even}),
               GraphError);
}

TEST(Graph, TwoColoring) {
  auto tri = BipartiteGraph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_FALSE(tri.two_coloring().has_value());
  EXPECT_THROW(tri.with_bfs_parity(), GraphError);
  auto p = BipartiteGraph::from_edges(3, {{0, 1}, {1, 2}}).with_bfs_parity();
  EXPECT_EQ(p.parity(0), Parity::Even);
  EXPECT_EQ(p.parity(1), Parity::Odd);
}

TEST(Hamming, CodeSizes) {
  EXPECT_EQ(hamming_code(1).size(), 1u);
  auto h2 = hamming_code(2);
  EXPECT_EQ(h2.size(), 2u);
  EXPECT_EQ(hamming_code(3).size(), 16u);
  // 010 has the unique nearest codeword 000
  int best = 99, ties = 0;
  for (auto w : h2) {
    int dist = hamming_distance(w, 0b010);
    if (dist < best) best = dist, ties = 1;
    else if (dist == best) ++ties;
  }
  EXPECT_EQ(best, 1);
  EXPECT_EQ(ties, 1);
  // perfect code: every word within distance 1 of exactly one codeword
  auto h3 = hamming_code(3);
  for (std::uint32_t w = 0; w < 128; ++w) {
    int hits = 0;
    for (auto c : h3) hits += hamming_distance(w, c) <= 1;
    EXPECT_EQ(hits, 1) << w;
  }
}

TEST(Dominating, TorusSizes) {
  auto q3 = dominating_set_torus({2, 3});
  EXPECT_EQ(q3.vertices.size(), 2u);
  EXPECT_TRUE(is_dominating(build_hypercube(3), q3.vertices));

  auto z43 = dominating_set_torus({4, 3});
  EXPECT_EQ(z43.vertices.size(), 16u);
  EXPECT_TRUE(is_dominating(build_torus({4, 3}), z43.vertices));

  // odd L: the shifted lift, not necessarily perfect
  TorusSpec s33{3, 3};
  auto d33 = dominating_set_torus(s33);
  EXPECT_LE(d33.vertices.size(), 6u);
  auto g = build_torus(s33);
  EXPECT_TRUE(is_dominating(g, d33.vertices));
}

TEST(Dominating, NotDominating) {
  auto c6 = build_cycle(6);
  std::vector<Vertex> one{0};
  EXPECT_FALSE(is_dominating(c6, one));
}

TEST(Tree, DominatingTreeOnHypercube) {
  auto g = build_hypercube(3);
  auto d = dominating_set_torus({2, 3});
  auto t = dominating_tree(g, d.vertices);
  EXPECT_TRUE(t.is_tree_in(g));
  EXPECT_LE(t.vertices.size(), 6u);
  EXPECT_EQ(t.edges.size() + 1, t.vertices.size());
  for (auto v : d.vertices) EXPECT_TRUE(std::binary_search(t.vertices.begin(), t.vertices.end(), v));
  EXPECT_TRUE(is_dominating(g, t.vertices));
}

TEST(Tree, TorusTreeBound) {
  auto g = build_torus({4, 2});
  auto d = dominating_set_torus({4, 2});
  auto t = dominating_tree(g, d.vertices);
  EXPECT_TRUE(t.is_tree_in(g));
  EXPECT_LE(t.vertices.size(), 3 * d.vertices.size());
}

TEST(Tree, RejectsNonDominating) {
  std::vector<Vertex> one{0};
  EXPECT_ANY_THROW(dominating_tree(build_cycle(4), one));
}

TEST(Automorphism, IdentityAndTranslation) {
  TorusSpec s{4, 2};
  auto id = TorusAutomorphism::identity(2);
  for (Vertex v = 0; v < 16; ++v) EXPECT_EQ(id.apply(s, v), v);
  TorusAutomorphism t = id;
  t.translation = {1, 0};
  std::vector<int> a{0, 0}, b{1, 0}, c{2, 0};
  EXPECT_EQ(t.apply(s, s.index(a)), s.index(b));
  EXPECT_EQ(t.apply(s, s.index(b)), s.index(c));
}

TEST(Automorphism, PreservesEdges) {
  TorusSpec s{4, 2};
  auto g = build_torus(s);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    auto a = sample_torus_automorphism(s, rng);
    for (const auto& e : g.edges()) EXPECT_TRUE(g.adjacent(a.apply(s, e.u), a.apply(s, e.v)));
  }
  EXPECT_EQ(all_torus_automorphisms(s).size(), 16u * 2 * 4);
}

TEST(Gadget, Shapes) {
  auto g1 = build_linear_gadget(1);
  EXPECT_EQ(g1.graph.vertex_count(), 8u);
  std::multiset<std::size_t> degs;
  for (Vertex v = 0; v < 8; ++v) degs.insert(g1.graph.degree(v));
  EXPECT_EQ(degs, (std::multiset<std::size_t>{1, 1, 3, 3, 3, 3, 3, 3}));
  EXPECT_EQ(g1.graph.degree(g1.left), 1u);
  EXPECT_EQ(g1.graph.degree(g1.right), 1u);

  auto g2 = build_linear_gadget(2);
  EXPECT_EQ(g2.graph.vertex_count(), 14u);
  EXPECT_TRUE(g2.graph.two_coloring().has_value());
  for (int m = 1; m <= 5; ++m) EXPECT_EQ(build_linear_gadget(m).graph.vertex_count(), 6u * m + 2);
}

TEST(BlowUp, Shapes) {
  auto c4 = blow_up(build_torus({2, 1}), 2);
  EXPECT_EQ(c4.vertex_count(), 4u);
  EXPECT_EQ(c4.regular_degree(), 2u);
  EXPECT_EQ(c4.edge_count(), 4u);
  auto b = blow_up(build_cycle(4), 2);
  EXPECT_EQ(b.vertex_count(), 8u);
  EXPECT_EQ(b.regular_degree(), 4u);
  auto c = blow_up(build_cycle(6), 3);
  EXPECT_EQ(c.vertex_count(), 18u);
  EXPECT_EQ(c.regular_degree(), 6u);
}

TEST(Stretch, K33) {
  auto h = complete_bipartite(3, 3);
  auto s = stretch_by_gadget(h, 1);
  EXPECT_EQ(s.vertex_count(), 60u);
  EXPECT_EQ(s.regular_degree(), 3u);
  EXPECT_TRUE(s.two_coloring().has_value());
  auto q3 = build_hypercube(3);
  auto s2 = stretch_by_gadget(q3, 2);
  EXPECT_EQ(s2.vertex_count(), 8u + 12 * 12);
  EXPECT_EQ(s2.regular_degree(), 3u);
  EXPECT_THROW(stretch_by_gadget(build_cycle(4), 1), GraphError);
}

TEST(RandomRegular, IsRegularBipartite) {
  std::mt19937_64 rng(11);
  auto g = random_regular_bipartite(6, 3, rng);
  EXPECT_EQ(g.vertex_count(), 12u);
  EXPECT_EQ(g.regular_degree(), 3u);
  EXPECT_EQ(g.even_vertices().size(), 6u);
}

TEST(GraphIo, RoundTrip) {
  for (const auto& g : {build_torus({2, 1}), build_torus({4, 2}), build_linear_gadget(1).graph}) {
    std::stringstream ss;
    save_graph(ss, g);
    EXPECT_EQ(load_graph(ss), g);
  }
}

TEST(GraphIo, Errors) {
  std::stringstream loop("n 2 delta 1\nparity EO\n0 0\n");
  EXPECT_ANY_THROW(load_graph(loop));
  std::stringstream bad_parity("n 2 delta 1\nparity EE\n0 1\n");
  EXPECT_ANY_THROW(load_graph(bad_parity));
  std::stringstream header("nodes 2\n");
  try {
    load_graph(header);
    FAIL() << "malformed header accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  std::stringstream dup("n 2 delta 1\nparity EO\n0 1\n0 1\n");
  EXPECT_ANY_THROW(load_graph(dup));
}
