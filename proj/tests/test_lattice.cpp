#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "secretnet/lattice.hpp"

namespace {

namespace lat = secretnet::lattice;
using secretnet::ValidationError;
using secretnet::testing::count_faces;
using secretnet::testing::simple_edge_count;

void expect_disjoint_nonempty_tags(const lat::NetworkGraph& g) {
  for (std::uint8_t t : {lat::tag::left, lat::tag::right, lat::tag::top, lat::tag::bottom})
    EXPECT_FALSE(g.nodes_with(t).empty()) << int(t);
  for (auto t : g.tags()) EXPECT_LE(__builtin_popcount(t), 1);
}

void expect_euler(const lat::NetworkGraph& g) {
  const auto v = static_cast<long>(g.node_count());
  const auto e = static_cast<long>(simple_edge_count(g));
  const auto f = static_cast<long>(count_faces(g));
  EXPECT_EQ(v - e + f, 2) << "V=" << v << " E=" << e << " F=" << f;
}

TEST(BuildSquare, CountsDegreesAndFaces) {
  for (auto [r, c] : {std::pair{2, 2}, {3, 5}, {7, 4}}) {
    const auto g = lat::build_square(r, c);
    EXPECT_EQ(g.node_count(), static_cast<std::size_t>(r * c));
    EXPECT_EQ(g.edge_count(), static_cast<std::size_t>(r * (c - 1) + c * (r - 1)));
    EXPECT_EQ(count_faces(g), static_cast<std::size_t>((r - 1) * (c - 1) + 1));
    expect_euler(g);
    expect_disjoint_nonempty_tags(g);
  }
  const auto g = lat::build_square(6, 6);
  const auto adj = g.adjacency();
  for (int r = 1; r < 5; ++r)
    for (int c = 1; c < 5; ++c) EXPECT_EQ(adj[r * 6 + c].size(), 4u);
  EXPECT_THROW(lat::build_square(1, 5), ValidationError);
}

TEST(BuildTriangular, CountsDegreesAndFaces) {
  for (auto [r, c] : {std::pair{2, 2}, {3, 3}, {6, 5}, {9, 12}}) {
    const auto g = lat::build_triangular(r, c);
    EXPECT_EQ(g.node_count(), static_cast<std::size_t>(r * c));
    EXPECT_EQ(g.edge_count(), static_cast<std::size_t>(r * (c - 1) + (r - 1) * (2 * c - 1)));
    EXPECT_EQ(count_faces(g), static_cast<std::size_t>(2 * (r - 1) * (c - 1) + 1));
    expect_euler(g);
    expect_disjoint_nonempty_tags(g);
    // Unit edge length everywhere.
    for (const auto& e : g.edges()) {
      const auto& a = g.positions()[e.u];
      const auto& b = g.positions()[e.v];
      EXPECT_NEAR(std::hypot(a.x - b.x, a.y - b.y), 1.0, 1e-12);
    }
  }
  const auto g = lat::build_triangular(8, 8);
  const auto adj = g.adjacency();
  for (int r = 1; r < 7; ++r)
    for (int c = 1; c < 7; ++c) EXPECT_EQ(adj[r * 8 + c].size(), 6u);
  EXPECT_THROW(lat::build_triangular(2, 1), ValidationError);
}

TEST(BuildHoneycomb, CountsDegreesAndFaces) {
  for (auto [r, c] : {std::pair{2, 2}, {3, 4}, {5, 8}, {8, 11}}) {
    for (int m : {1, 2}) {
      const auto g = lat::build_honeycomb(r, c, m);
      EXPECT_EQ(g.node_count(), static_cast<std::size_t>(r * c));
      std::size_t verticals = 0;
      for (int row = 0; row + 1 < r; ++row)
        for (int col = 0; col < c; ++col) verticals += (row + col) % 2 == 0;
      EXPECT_EQ(g.edge_count(), static_cast<std::size_t>(r * (c - 1)) + verticals);
      for (const auto& e : g.edges()) {
        EXPECT_EQ(e.multiplicity, m);
        const auto& a = g.positions()[e.u];
        const auto& b = g.positions()[e.v];
        EXPECT_NEAR(std::hypot(a.x - b.x, a.y - b.y), 1.0, 1e-12);
      }
      expect_euler(g);
      expect_disjoint_nonempty_tags(g);
    }
  }
  const auto g = lat::build_honeycomb(8, 10, 2);
  const auto adj = g.adjacency();
  for (int r = 1; r < 7; ++r)
    for (int c = 1; c < 9; ++c) EXPECT_EQ(adj[r * 10 + c].size(), 3u);
  EXPECT_THROW(lat::build_honeycomb(2, 2, 0), ValidationError);
  EXPECT_THROW(lat::build_honeycomb(1, 2, 1), ValidationError);
}

TEST(FamilyDimensions, SquareRegions) {
  EXPECT_EQ(lat::family_dimensions(lat::Family::square, 64), (std::pair{64, 65}));
  for (int size : {16, 32, 64, 128}) {
    for (auto f : {lat::Family::triangular, lat::Family::honeycomb}) {
      const auto g = lat::build_family(f, size);
      double min_x = 1e9, max_x = -1e9, min_y = 1e9, max_y = -1e9;
      for (const auto& pt : g.positions()) {
        min_x = std::min(min_x, pt.x);
        max_x = std::max(max_x, pt.x);
        min_y = std::min(min_y, pt.y);
        max_y = std::max(max_y, pt.y);
      }
      EXPECT_NEAR((max_y - min_y) / (max_x - min_x), 1.0, 0.05) << lat::to_string(f) << " " << size;
    }
  }
  EXPECT_THROW(lat::family_dimensions(lat::Family::square, 1), ValidationError);
  EXPECT_THROW(lat::family_from_string("kagome"), ValidationError);
}

TEST(NaiveEdgeProbability, Examples) {
  // 2 * 0.1792 * 1.8208
  EXPECT_NEAR(lat::naive_edge_probability(0.1792, 2), 0.65257472, 1e-12);
  EXPECT_NEAR(lat::naive_edge_probability(0.25, 1), 0.5, 1e-12);
  EXPECT_EQ(lat::naive_edge_probability(0.0, 1), 0.0);
  EXPECT_EQ(lat::naive_edge_probability(0.0, 2), 0.0);
  EXPECT_THROW(lat::naive_edge_probability(0.25, 3), ValidationError);
  EXPECT_THROW(lat::naive_edge_probability(0.7, 1), ValidationError);
}

TEST(Transform, ProducesTriangularLattice) {
  for (auto [r, c] : {std::pair{6, 8}, {9, 12}, {12, 17}}) {
    const auto hex = lat::build_honeycomb(r, c, 2);
    const auto res = lat::transform_to_triangular_detailed(hex, 0.2);
    const auto& tri = res.graph;
    EXPECT_EQ(tri.family(), lat::Family::transformed);
    EXPECT_EQ(tri.edge_count(), 3 * res.removed_full + res.removed_partial);
    EXPECT_EQ(res.removed_full + res.removed_partial + res.removed_dangling + tri.node_count(), hex.node_count());
    EXPECT_NEAR(static_cast<double>(tri.node_count()), hex.node_count() / 2.0, 1.0);
    // No duplicate edges and every edge spans sqrt(3): a triangular point set.
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : tri.edges()) {
      EXPECT_TRUE(seen.insert({std::min(e.u, e.v), std::max(e.u, e.v)}).second);
      const auto& a = tri.positions()[e.u];
      const auto& b = tri.positions()[e.v];
      EXPECT_NEAR(std::hypot(a.x - b.x, a.y - b.y), std::sqrt(3.0), 1e-12);
      EXPECT_NEAR(*e.open_probability, 0.4, 1e-12);
    }
    expect_euler(tri);
    expect_disjoint_nonempty_tags(tri);
    // Interior nodes (two honeycomb steps from the border) have degree 6.
    const auto adj = tri.adjacency();
    std::size_t interior = 0;
    for (std::size_t i = 0; i < tri.node_count(); ++i) {
      const int hr = static_cast<int>(res.origin[i]) / c;
      const int hc = static_cast<int>(res.origin[i]) % c;
      if (hr < 2 || hr > r - 3 || hc < 2 || hc > c - 3) continue;
      ++interior;
      EXPECT_EQ(adj[i].size(), 6u);
    }
    EXPECT_GT(interior, 0u);
  }
}

TEST(Transform, ChoosesSublatticeLeavingMoreBoundary) {
  const auto hex = lat::build_honeycomb(5, 7, 2);
  std::array<std::size_t, 2> tagged{0, 0};  // tagged nodes per parity
  for (std::size_t i = 0; i < hex.node_count(); ++i)
    if (hex.tags()[i]) ++tagged[(i / 7 + i % 7) % 2];
  const auto res = lat::transform_to_triangular_detailed(hex, 0.25);
  const int kept = 1 - res.removed_parity;
  EXPECT_GE(tagged[kept], tagged[res.removed_parity]);
  if (tagged[0] == tagged[1]) EXPECT_EQ(res.removed_parity, 0);
}

TEST(Transform, PerfectLinksGivePerfectEdges) {
  const auto tri = lat::transform_to_triangular(lat::build_honeycomb(6, 6, 2), 0.5);
  for (const auto& e : tri.edges()) EXPECT_EQ(*e.open_probability, 1.0);
}

TEST(Transform, RejectsWrongInput) {
  EXPECT_THROW(lat::transform_to_triangular(lat::build_honeycomb(4, 4, 1), 0.2), ValidationError);
  EXPECT_THROW(lat::transform_to_triangular(lat::build_square(4, 4), 0.2), ValidationError);
  EXPECT_THROW(lat::transform_to_triangular(lat::build_honeycomb(4, 4, 2), 1.5), ValidationError);
}

TEST(NetworkGraph, EdgeInvariants) {
  lat::NetworkGraph g;
  g.add_node({0, 0});
  g.add_node({1, 0});
  EXPECT_THROW(g.add_edge(0, 0), ValidationError);
  EXPECT_THROW(g.add_edge(0, 1, 0), ValidationError);
  EXPECT_THROW(g.add_edge(0, 1, 1, 1.5), ValidationError);
  EXPECT_THROW(g.add_edge(0, 2), ValidationError);
  g.add_edge(0, 1);
  EXPECT_FALSE(g.fully_resolved());
  EXPECT_TRUE(lat::with_open_probability(g, 0.3).fully_resolved());
}

}  // namespace
