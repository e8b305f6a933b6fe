#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "praag/arith.hpp"

namespace praag {

// Finite simple graph with named vertices. Edges are stored as ordered pairs
// of vertex indices (the orientation matters for p-graph labels); the
// underlying undirected graph must be simple: no loops, no antiparallel pair.
struct Graph {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::size_t size() const { return vertices.size(); }
  bool adjacent(std::size_t a, std::size_t b) const;
  std::vector<std::vector<std::size_t>> adjacency() const;
  void validate() const;
};

// Coefficients c_n = number of n-cliques, c_0 = 1.
std::vector<long long> clique_polynomial(const Graph& g);

bool is_triangle_free(const Graph& g);

// Complement graph; edges oriented by vertex order.
Graph opposite_graph(const Graph& g);

// Induced subgraph on the given vertex indices (kept in the given order).
Graph full_subgraph(const Graph& g, const std::vector<std::size_t>& keep);

bool is_complete(const Graph& g);
bool is_connected(const Graph& g);
std::vector<std::vector<std::size_t>> connected_components(const Graph& g);

// ---- Chordal structure -------------------------------------------------------

struct PastingNode {
  bool leaf = false;
  std::vector<std::size_t> vertices;  // leaf: a clique (ambient indices)
  std::vector<std::size_t> separator; // internal: complete separator
  std::unique_ptr<PastingNode> left, right;
};

struct ChordalStructure {
  bool chordal = false;
  std::vector<std::size_t> elimination_order; // perfect elimination order if chordal
  std::vector<std::size_t> chordless_cycle;   // witness (length >= 4) if not
  std::unique_ptr<PastingNode> tree;          // decomposition into cliques if chordal
};

// LexBFS elimination order, verification, and (for chordal inputs) a pasting
// tree splitting along complete separators. Requires a connected graph.
ChordalStructure chordal_structure(const Graph& g);

// ---- p-graphs ------------------------------------------------------------------

struct PGraph {
  std::uint64_t p = 5;
  unsigned precision = 4;
  Graph graph;
  // label[i] = (f1, f2) for edges[i]; valuations >= 1 (>= 2 when p = 2)
  std::vector<std::pair<TruncatedPadic, TruncatedPadic>> labels;

  void validate() const;
  PGraph induced(const std::vector<std::size_t>& keep) const;
};

// Text format:
//   pgraph v1
//   p 5
//   precision 4
//   vertices x1 x2 x3
//   edge x1 x2 0 -5
// '#' starts a comment. Label token N is an exact integer, N~ a residue known
// only mod p^precision. p and precision lines are optional (defaults 5 and 4).
PGraph parse_pgraph(std::istream& in);
PGraph parse_pgraph_string(const std::string& text);
PGraph parse_pgraph_file(const std::string& path);

// Canonical serialization; parse(serialize(g)) round-trips bit-exactly.
std::string serialize_pgraph(const PGraph& g);

} // namespace praag
