#pragma once

// Line-oriented graph export for external plotting:
//
//   node <id> <x> <y> [left|right|top|bottom ...]
//   edge <u> <v> <prob>
//
// Ids are 0-based and nodes precede the edges that use them. <prob> is the
// bundle's open probability. Blank lines and lines starting with '#' are
// ignored on input.

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "secretnet/common.hpp"
#include "secretnet/lattice.hpp"

namespace secretnet::lattice {

inline void write_graph_text(std::ostream& os, const NetworkGraph& g) {
  require(g.fully_resolved(), "graph export needs resolved edge probabilities");
  const auto old_precision = os.precision(17);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto& pt = g.positions()[i];
    os << "node " << i << ' ' << pt.x << ' ' << pt.y;
    const auto t = g.tags()[i];
    if (t & tag::left) os << " left";
    if (t & tag::right) os << " right";
    if (t & tag::top) os << " top";
    if (t & tag::bottom) os << " bottom";
    os << '\n';
  }
  for (const auto& e : g.edges()) os << "edge " << e.u << ' ' << e.v << ' ' << *e.open_probability << '\n';
  os.precision(old_precision);
}

inline NetworkGraph read_graph_text(std::istream& is) {
  NetworkGraph g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string kind;
    if (!(fields >> kind) || kind.front() == '#') continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (kind == "node") {
      std::size_t id = 0;
      Point pt{};
      require(static_cast<bool>(fields >> id >> pt.x >> pt.y), where + "malformed node");
      require(id == g.node_count(), where + "node ids must be consecutive from 0");
      std::uint8_t tags = 0;
      std::string name;
      while (fields >> name) {
        if (name == "left") tags |= tag::left;
        else if (name == "right") tags |= tag::right;
        else if (name == "top") tags |= tag::top;
        else if (name == "bottom") tags |= tag::bottom;
        else throw ValidationError(where + "unknown tag '" + name + "'");
      }
      g.add_node(pt, tags);
    } else if (kind == "edge") {
      std::size_t u = 0, v = 0;
      double prob = 0.0;
      require(static_cast<bool>(fields >> u >> v >> prob), where + "malformed edge");
      g.add_edge(u, v, 1, prob);
    } else {
      throw ValidationError(where + "unknown record '" + kind + "'");
    }
  }
  return g;
}

}  // namespace secretnet::lattice
