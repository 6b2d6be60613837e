#pragma once

// Finite planar lattices with boundary tags, and the local one-time-pad
// rewrite that turns a doubled-edge honeycomb into a triangular lattice.
//
// Embeddings (node id = row * cols + col):
//   square      (x, y) = (c, r); rows * cols nodes,
//               rows * (cols - 1) + cols * (rows - 1) edges.
//   triangular  odd rows shifted right by 1/2, row spacing sqrt(3)/2;
//               rows * cols nodes, rows * (cols - 1) + (rows - 1) * (2 * cols - 1) edges.
//   honeycomb   brick wall: every horizontal neighbor is bonded, and (r, c)
//               bonds to (r + 1, c) when r + c is even. Positions are those of
//               the regular honeycomb with unit bond length:
//               x = c * sqrt(3)/2, y = 1.5 r + 0.25 (r + c even) or - 0.25 (odd).
//               rows * cols nodes, rows * (cols - 1) + sum_{r < rows-1} #{c : r + c even} edges.
//
// Boundary tags follow a pinwheel so the four sets are disjoint and each is
// nonempty: a corner belongs to the side that reaches it first going
// counterclockwise (bottom-left -> left, top-left -> top, top-right -> right,
// bottom-right -> bottom).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "secretnet/common.hpp"
#include "secretnet/secret_state.hpp"

namespace secretnet::lattice {

enum class Family { square, triangular, honeycomb, transformed, custom };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::square: return "square";
    case Family::triangular: return "triangular";
    case Family::honeycomb: return "honeycomb";
    case Family::transformed: return "transformed";
    case Family::custom: return "custom";
  }
  return "custom";
}

inline Family family_from_string(const std::string& name) {
  if (name == "square") return Family::square;
  if (name == "triangular") return Family::triangular;
  if (name == "honeycomb") return Family::honeycomb;
  throw ValidationError("unknown lattice family '" + name + "' (expected square, triangular or honeycomb)");
}

namespace tag {
inline constexpr std::uint8_t left = 1;
inline constexpr std::uint8_t right = 2;
inline constexpr std::uint8_t top = 4;
inline constexpr std::uint8_t bottom = 8;
}  // namespace tag

struct Point {
  double x;
  double y;
};

struct Edge {
  std::size_t u;
  std::size_t v;
  int multiplicity = 1;
  /// Probability that the bundle yields an sbit; unset until a strategy resolves it.
  std::optional<double> open_probability;
};

class NetworkGraph {
 public:
  NetworkGraph() = default;
  NetworkGraph(Family family, int rows, int cols) : family_(family), rows_(rows), cols_(cols) {}

  std::size_t add_node(Point position, std::uint8_t tags = 0) {
    positions_.push_back(position);
    tags_.push_back(tags);
    return positions_.size() - 1;
  }

  void add_edge(std::size_t u, std::size_t v, int multiplicity = 1, std::optional<double> open_probability = {}) {
    require(u < node_count() && v < node_count(), "edge endpoint is not a node");
    require(u != v, "self-loops are not allowed");
    require(multiplicity >= 1, "edge multiplicity must be at least 1");
    if (open_probability)
      require(*open_probability >= 0.0 && *open_probability <= 1.0, "edge probability must lie in [0, 1]");
    edges_.push_back({u, v, multiplicity, open_probability});
  }

  [[nodiscard]] std::size_t node_count() const noexcept { return positions_.size(); }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
  [[nodiscard]] const std::vector<Point>& positions() const noexcept { return positions_; }
  [[nodiscard]] const std::vector<std::uint8_t>& tags() const noexcept { return tags_; }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
  [[nodiscard]] std::vector<Edge>& edges() noexcept { return edges_; }
  [[nodiscard]] Family family() const noexcept { return family_; }
  [[nodiscard]] int rows() const noexcept { return rows_; }
  [[nodiscard]] int cols() const noexcept { return cols_; }

  void set_tags(std::size_t node, std::uint8_t tags) { tags_.at(node) = tags; }

  [[nodiscard]] std::vector<std::size_t> nodes_with(std::uint8_t t) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < tags_.size(); ++i)
      if (tags_[i] & t) out.push_back(i);
    return out;
  }

  /// Distinct neighbors per node (parallel bundles count once).
  [[nodiscard]] std::vector<std::vector<std::size_t>> adjacency() const {
    std::vector<std::vector<std::size_t>> adj(node_count());
    for (const auto& e : edges_) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    for (auto& list : adj) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return adj;
  }

  [[nodiscard]] bool fully_resolved() const {
    return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.open_probability.has_value(); });
  }

 private:
  Family family_ = Family::custom;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Point> positions_;
  std::vector<std::uint8_t> tags_;
  std::vector<Edge> edges_;
};

/// Tags nodes within `tol_x` / `tol_y` of the bounding box, then resolves
/// corners with the pinwheel rule.
inline void tag_boundary_by_position(NetworkGraph& g, double tol_x, double tol_y) {
  if (g.node_count() == 0) return;
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (const auto& pt : g.positions()) {
    min_x = std::min(min_x, pt.x);
    max_x = std::max(max_x, pt.x);
    min_y = std::min(min_y, pt.y);
    max_y = std::max(max_y, pt.y);
  }
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto& pt = g.positions()[i];
    const bool l = pt.x <= min_x + tol_x;
    const bool r = pt.x >= max_x - tol_x;
    const bool b = pt.y <= min_y + tol_y;
    const bool t = pt.y >= max_y - tol_y;
    std::uint8_t out = 0;
    if (l) out = t ? tag::top : tag::left;
    else if (r) out = b ? tag::bottom : tag::right;
    else if (t) out = tag::top;
    else if (b) out = tag::bottom;
    g.set_tags(i, out);
  }
}

inline NetworkGraph build_square(int rows, int cols) {
  require(rows >= 2 && cols >= 2, "square lattice needs at least 2 rows and 2 columns");
  NetworkGraph g(Family::square, rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) g.add_node({static_cast<double>(c), static_cast<double>(r)});
  auto id = [cols](int r, int c) { return static_cast<std::size_t>(r) * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.add_edge(id(r, c), id(r, c + 1));
      if (r + 1 < rows) g.add_edge(id(r, c), id(r + 1, c));
    }
  tag_boundary_by_position(g, 0.5, 0.5);
  return g;
}

inline NetworkGraph build_triangular(int rows, int cols) {
  require(rows >= 2 && cols >= 2, "triangular lattice needs at least 2 rows and 2 columns");
  NetworkGraph g(Family::triangular, rows, cols);
  const double row_height = std::sqrt(3.0) / 2.0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) g.add_node({c + (r % 2 == 1 ? 0.5 : 0.0), r * row_height});
  auto id = [cols](int r, int c) { return static_cast<std::size_t>(r) * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.add_edge(id(r, c), id(r, c + 1));
      if (r + 1 == rows) continue;
      // Even rows reach up-left and up; odd rows reach up and up-right.
      const int shift = r % 2 == 0 ? -1 : 1;
      g.add_edge(id(r, c), id(r + 1, c));
      if (c + shift >= 0 && c + shift < cols) g.add_edge(id(r, c), id(r + 1, c + shift));
    }
  tag_boundary_by_position(g, 0.75, row_height / 2.0);
  return g;
}

inline NetworkGraph build_honeycomb(int rows, int cols, int multiplicity = 1) {
  require(rows >= 2 && cols >= 2, "honeycomb lattice needs at least 2 rows and 2 columns");
  require(multiplicity >= 1, "edge multiplicity must be at least 1");
  NetworkGraph g(Family::honeycomb, rows, cols);
  const double col_width = std::sqrt(3.0) / 2.0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) g.add_node({c * col_width, 1.5 * r + ((r + c) % 2 == 0 ? 0.25 : -0.25)});
  auto id = [cols](int r, int c) { return static_cast<std::size_t>(r) * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.add_edge(id(r, c), id(r, c + 1), multiplicity);
      if (r + 1 < rows && (r + c) % 2 == 0) g.add_edge(id(r, c), id(r + 1, c), multiplicity);
    }
  tag_boundary_by_position(g, 0.5, 0.75);
  return g;
}

/// Rows and columns giving family `f` linear size L and a physically square
/// region. L counts nodes per row for square and triangular, and hexagons per
/// row (2L brick-wall columns) for the honeycomb, so a transformed honeycomb
/// of size L is a triangular lattice of about L nodes per row.
inline std::pair<int, int> family_dimensions(Family f, int size) {
  require(size >= 2, "lattice size must be at least 2");
  switch (f) {
    case Family::square:
      // One extra column makes the lattice self-dual for left-right crossing.
      return {size, size + 1};
    case Family::triangular: {
      const int rows = static_cast<int>(std::lround((size - 0.5) * 2.0 / std::sqrt(3.0))) + 1;
      return {std::max(rows, 2), size};
    }
    case Family::honeycomb: {
      const int cols = 2 * size;
      const int rows = static_cast<int>(std::lround((cols - 1) / std::sqrt(3.0))) + 1;
      return {std::max(rows, 2), cols};
    }
    default: break;
  }
  throw ValidationError("family has no size convention: " + to_string(f));
}

/// Builds family `f` at linear size L (see family_dimensions).
inline NetworkGraph build_family(Family f, int size, int multiplicity = 1) {
  const auto [rows, cols] = family_dimensions(f, size);
  switch (f) {
    case Family::square: return build_square(rows, cols);
    case Family::triangular: return build_triangular(rows, cols);
    case Family::honeycomb: return build_honeycomb(rows, cols, multiplicity);
    default: break;
  }
  throw ValidationError("cannot build family " + to_string(f));
}

/// Probability that a bundle yields an sbit when each link is converted on its
/// own: 2p for one link, min(1, 2p(2-p)) for two parallel links.
inline double naive_edge_probability(double p, int multiplicity) {
  require(std::isfinite(p) && p >= 0.0 && p <= 0.5, "link bias must lie in [0, 1/2]");
  require(multiplicity == 1 || multiplicity == 2, "only bundles of one or two links are supported");
  if (multiplicity == 1) return sbit_probability(BiasedLink(p));
  return parallel_link_success(p).value;
}

/// Copy of g with every edge opened with probability `q`.
inline NetworkGraph with_open_probability(NetworkGraph g, double q) {
  require(q >= 0.0 && q <= 1.0, "edge probability must lie in [0, 1]");
  for (auto& e : g.edges()) e.open_probability = q;
  return g;
}

/// Copy of g where each bundle gets its naive conversion probability for link bias p.
inline NetworkGraph with_naive_strategy(NetworkGraph g, double p) {
  for (auto& e : g.edges()) e.open_probability = naive_edge_probability(p, e.multiplicity);
  return g;
}

struct TransformResult {
  NetworkGraph graph;
  /// Parity (r + c) % 2 of the removed honeycomb sublattice.
  int removed_parity = 0;
  std::size_t removed_full = 0;     // three neighbors: three new edges
  std::size_t removed_partial = 0;  // two neighbors: one new edge
  std::size_t removed_dangling = 0; // at most one neighbor: nothing
  /// Honeycomb id of each output node.
  std::vector<std::size_t> origin;
};

/// Honeycomb with doubled edges -> triangular lattice. Every node of one
/// sublattice runs a one-time pad on each pair of its incident bundles (one
/// link from each), joining its neighbors pairwise, and leaves the network.
/// Each new edge is a two-link chain and opens with the relay probability 2p.
///
/// The removed sublattice is the one leaving more boundary-tagged nodes behind;
/// on a tie, the sublattice of node 0. Boundary nodes with two neighbors relay
/// one pair; nodes with fewer neighbors contribute nothing.
inline TransformResult transform_to_triangular_detailed(const NetworkGraph& hex, double p) {
  require(hex.family() == Family::honeycomb, "transform needs a honeycomb lattice");
  require(hex.edge_count() > 0, "transform needs a non-empty honeycomb");
  for (const auto& e : hex.edges())
    require(e.multiplicity == 2, "transform needs every honeycomb edge doubled");
  const double relay = otp_success(BiasedLink(p), BiasedLink(p));
  const int cols = hex.cols();
  auto parity = [cols](std::size_t id) { return static_cast<int>((id / cols + id % cols) % 2); };

  std::array<std::size_t, 2> tagged_remaining{0, 0};  // indexed by removed parity
  for (std::size_t i = 0; i < hex.node_count(); ++i)
    if (hex.tags()[i] != 0) ++tagged_remaining[1 - parity(i)];
  int removed = parity(0);
  if (tagged_remaining[1 - removed] > tagged_remaining[removed]) removed = 1 - removed;

  TransformResult out;
  out.removed_parity = removed;
  out.graph = NetworkGraph(Family::transformed, hex.rows(), hex.cols());
  std::vector<std::size_t> new_id(hex.node_count(), std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < hex.node_count(); ++i) {
    if (parity(i) == removed) continue;
    new_id[i] = out.graph.add_node(hex.positions()[i]);
    out.origin.push_back(i);
  }

  const auto adj = hex.adjacency();
  for (std::size_t i = 0; i < hex.node_count(); ++i) {
    if (parity(i) != removed) continue;
    const auto& nb = adj[i];
    if (nb.size() <= 1) {
      ++out.removed_dangling;
      continue;
    }
    (nb.size() == 3 ? out.removed_full : out.removed_partial) += 1;
    for (std::size_t a = 0; a < nb.size(); ++a)
      for (std::size_t b = a + 1; b < nb.size(); ++b)
        out.graph.add_edge(new_id[nb[a]], new_id[nb[b]], 1, relay);
  }
  // Kept nodes sit sqrt(3) apart horizontally, so each side's boundary
  // zigzag spans two honeycomb columns.
  tag_boundary_by_position(out.graph, 1.0, 0.75);
  return out;
}

inline NetworkGraph transform_to_triangular(const NetworkGraph& hex, double p) {
  return transform_to_triangular_detailed(hex, p).graph;
}

}  // namespace secretnet::lattice
