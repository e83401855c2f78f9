#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "ibd/graph.hpp"
#include "ibd/harness/suites.hpp"

using namespace ibd;

TEST(Graph, FromEdgesDeduplicatesAndSorts) {
  const std::vector<Edge> edges{{2, 0}, {0, 1}, {1, 0}, {0, 2}};
  const Graph g = Graph::from_edges(3, edges);
  EXPECT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(g.edge_count(), 2u);
  const auto nb = g.neighbours(0);
  EXPECT_EQ(std::vector<Vertex>(nb.begin(), nb.end()), (std::vector<Vertex>{1, 2}));
  EXPECT_TRUE(g.adjacent(2, 0));
  EXPECT_FALSE(g.adjacent(1, 2));
}

TEST(Graph, RejectsSelfLoopsAndOutOfRange) {
  const std::vector<Edge> loop{{1, 1}};
  EXPECT_THROW(Graph::from_edges(2, loop), DomainError);
  const std::vector<Edge> far{{0, 5}};
  EXPECT_THROW(Graph::from_edges(3, far), DomainError);
}

TEST(Graph, BuilderDegrees) {
  const Graph k4 = build_complete(4);
  EXPECT_EQ(k4.edge_count(), 6u);
  for (Vertex x = 0; x < 4; ++x) EXPECT_EQ(k4.degree(x), 3u);

  const Graph s = build_star(4);
  EXPECT_EQ(s.vertex_count(), 5u);
  EXPECT_EQ(s.degree(0), 4u);
  for (Vertex x = 1; x < 5; ++x) EXPECT_EQ(s.degree(x), 1u);

  const Graph c = build_cycle(5);
  for (Vertex x = 0; x < 5; ++x) EXPECT_EQ(c.degree(x), 2u);

  const Graph p = build_path(3);
  EXPECT_EQ(p.degree(1), 2u);
  EXPECT_EQ(p.degree(0), 1u);
  EXPECT_EQ(build_path(1).edge_count(), 0u);
}

TEST(Graph, LatticeTorusIsRegularAndTriangleFree) {
  for (std::size_t d = 1; d <= 3; ++d) {
    const Graph t = build_lattice_torus(1, d);
    std::size_t expected_n = 1;
    for (std::size_t i = 0; i < d; ++i) expected_n *= 3;
    EXPECT_EQ(t.vertex_count(), expected_n);
    const StructureReport r = analyze(t);
    EXPECT_EQ(r.constant_degree, 2 * d);
    EXPECT_TRUE(r.is_connected);
    // side 3 torus: a 3-cycle along each axis is a triangle
    EXPECT_FALSE(r.is_triangle_free);
  }
  const StructureReport r = analyze(build_lattice_torus(2, 2));
  EXPECT_EQ(r.vertex_count, 25u);
  EXPECT_EQ(r.constant_degree, 4u);
  EXPECT_TRUE(r.is_triangle_free);
}

TEST(Graph, BuilderArgumentErrors) {
  EXPECT_THROW(build_complete(1), DomainError);
  EXPECT_THROW(build_cycle(2), DomainError);
  EXPECT_THROW(build_star(0), DomainError);
  EXPECT_THROW(build_lattice_torus(0, 2), DomainError);
}

TEST(Graph, AnalyzeFamilies) {
  const StructureReport k3 = analyze(build_complete(3));
  EXPECT_TRUE(k3.is_complete);
  EXPECT_FALSE(k3.is_triangle_free);
  EXPECT_FALSE(k3.star_leaf_count);

  const StructureReport k2 = analyze(build_complete(2));
  EXPECT_TRUE(k2.is_complete);
  EXPECT_EQ(k2.star_leaf_count, 1u);
  EXPECT_EQ(k2.constant_degree, 1u);

  const StructureReport s3 = analyze(build_star(3));
  EXPECT_EQ(s3.star_leaf_count, 3u);
  EXPECT_FALSE(s3.constant_degree);
  EXPECT_EQ(s3.max_degree, 3u);

  // path:3 is the star with two leaves
  EXPECT_EQ(analyze(build_path(3)).star_leaf_count, 2u);
  EXPECT_FALSE(analyze(build_path(4)).star_leaf_count);

  const StructureReport c4 = analyze(build_cycle(4));
  EXPECT_EQ(c4.constant_degree, 2u);
  EXPECT_TRUE(c4.is_triangle_free);
  EXPECT_FALSE(c4.is_complete);
}

TEST(Graph, DisconnectedDetected) {
  const std::vector<Edge> edges{{0, 1}, {2, 3}};
  EXPECT_FALSE(is_connected(Graph::from_edges(4, edges)));
  EXPECT_FALSE(analyze(Graph::from_edges(4, edges)).is_connected);
}

TEST(Graph, StructureReportIsLabelInvariant) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = harness::detail::random_connected_graph(rng, 7, 0.3);
    std::vector<Vertex> perm(g.vertex_count());
    std::iota(perm.begin(), perm.end(), Vertex{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    const Graph h = relabel(g, perm);
    EXPECT_EQ(analyze(g), analyze(h));
    for (auto [u, v] : g.edges()) EXPECT_TRUE(h.adjacent(perm[u], perm[v]));
  }
}

TEST(Graph, StarCentreAfterRelabel) {
  const Graph s = build_star(4);
  const std::vector<Vertex> perm{3, 0, 1, 2, 4};
  EXPECT_EQ(star_centre(relabel(s, perm)), 3u);
}

TEST(EdgeList, ParsesCommentsAndBlankLines) {
  std::istringstream in("# header\n0 1\n\n1 2  # trailing\n2 0\n");
  const Graph g = parse_edge_list(in);
  EXPECT_EQ(g, build_complete(3));
}

TEST(EdgeList, ReportsLineOfBadInput) {
  std::istringstream in("0 1\n1 x\n");
  try {
    parse_edge_list(in);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  std::istringstream loop("0 0\n");
  EXPECT_THROW(parse_edge_list(loop), DomainError);
}

TEST(EdgeList, LoadsSampleFile) {
  const Graph g = load_edge_list(std::string(IBD_DATA_DIR) + "/kite.edges");
  EXPECT_EQ(g.vertex_count(), 4u);
  EXPECT_EQ(g.edge_count(), 4u);
  EXPECT_FALSE(analyze(g).is_triangle_free);
  EXPECT_FALSE(is_connected(load_edge_list(std::string(IBD_DATA_DIR) + "/two_islands.edges")));
}
