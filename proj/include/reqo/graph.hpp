#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "reqo/oracle.hpp"

namespace reqo {

/// Undirected multigraph with two distinguished terminals.  Edge j is bit j
/// of both the survival pattern and the chosen-path pattern.
struct Graph {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;
  int source = 0;
  int target = 1;

  int edge_count() const { return static_cast<int>(edges.size()); }
  void validate() const;

  /// Text format: a `terminals u v` header, then one `u v` edge per line.
  /// Blank lines and lines starting with '#' are ignored.
  static Graph parse(std::istream& in);
  static Graph load(const std::string& path);
};

inline constexpr int kDefaultMaxReliabilityEdges = 12;

/// True iff source and target are connected using only the edges whose bits
/// are set in `edge_mask`.
bool terminals_connected(const Graph& graph, std::uint64_t edge_mask);

/// f(xi, phi) = g(xi AND phi) with b = c = |E|.
Oracle reliability_oracle(const Graph& graph, int max_edges = kDefaultMaxReliabilityEdges);

/// Exact two-terminal reliability with independent edge failure probability 1/2.
double two_terminal_reliability(const Graph& graph);

}  // namespace reqo
