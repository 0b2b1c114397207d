#include "reqo/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "reqo/errors.hpp"

namespace reqo {
namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

void Graph::validate() const {
  if (vertex_count < 2) throw InputError("graph needs at least two vertices");
  if (source == target) throw InputError("terminals must differ");
  auto in_range = [this](int v) { return v >= 0 && v < vertex_count; };
  if (!in_range(source) || !in_range(target)) throw InputError("terminal outside vertex range");
  for (const auto& [u, v] : edges)
    if (!in_range(u) || !in_range(v)) throw InputError("edge references an unknown vertex");
}

Graph Graph::parse(std::istream& in) {
  Graph g;
  bool have_header = false;
  int max_vertex = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == '#') continue;
    auto fail = [&](const std::string& what) {
      throw ConfigError("graph line " + std::to_string(line_no) + ": " + what);
    };
    if (first == "terminals") {
      if (have_header) fail("duplicate terminals header");
      if (!(ls >> g.source >> g.target)) fail("expected `terminals u v`");
      have_header = true;
    } else {
      if (!have_header) fail("edge before `terminals` header");
      int u = 0;
      int v = 0;
      try {
        std::size_t used = 0;
        u = std::stoi(first, &used);
        if (used != first.size()) fail("bad vertex id");
      } catch (const std::logic_error&) {
        fail("bad vertex id");
      }
      if (!(ls >> v)) fail("expected `u v`");
      if (u < 0 || v < 0) fail("negative vertex id");
      g.edges.emplace_back(u, v);
      max_vertex = std::max({max_vertex, u, v});
    }
    std::string rest;
    if (ls >> rest && rest[0] != '#') fail("trailing tokens");
  }
  if (!have_header) throw ConfigError("graph: missing `terminals u v` header");
  g.vertex_count = std::max({max_vertex, g.source, g.target}) + 1;
  try {
    g.validate();
  } catch (const InputError& e) {
    throw ConfigError(std::string("graph: ") + e.what());
  }
  return g;
}

Graph Graph::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read graph file " + path);
  return parse(is);
}

bool terminals_connected(const Graph& graph, std::uint64_t edge_mask) {
  DisjointSets sets(graph.vertex_count);
  for (int j = 0; j < graph.edge_count(); ++j)
    if ((edge_mask >> j) & 1) sets.unite(graph.edges[j].first, graph.edges[j].second);
  return sets.find(graph.source) == sets.find(graph.target);
}

Oracle reliability_oracle(const Graph& graph, int max_edges) {
  graph.validate();
  const int e = graph.edge_count();
  if (e > max_edges)
    throw CapacityError("graph has " + std::to_string(e) + " edges, limit is " + std::to_string(max_edges));
  if (e < 1) throw InputError("reliability oracle needs at least one edge");
  return Oracle(
      e, e, [graph](std::uint64_t xi, std::uint64_t phi) { return terminals_connected(graph, xi & phi); },
      "reliability");
}

double two_terminal_reliability(const Graph& graph) {
  graph.validate();
  const int e = graph.edge_count();
  if (e > kMaxOracleBits) throw CapacityError("graph too large to enumerate");
  std::uint64_t connected = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << e); ++mask)
    if (terminals_connected(graph, mask)) ++connected;
  return std::ldexp(static_cast<double>(connected), -e);
}

}  // namespace reqo
