#include "praag/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <list>
#include <numeric>
#include <set>
#include <sstream>

#include "praag/errors.hpp"

namespace praag {

bool Graph::adjacent(std::size_t a, std::size_t b) const {
  for (const auto& e : edges)
    if ((e.first == a && e.second == b) || (e.first == b && e.second == a)) return true;
  return false;
}

std::vector<std::vector<std::size_t>> Graph::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(vertices.size());
  for (const auto& e : edges) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

void Graph::validate() const {
  std::set<std::string> names(vertices.begin(), vertices.end());
  if (names.size() != vertices.size()) throw ValidationError("graph: duplicate vertex name");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges) {
    if (e.first >= vertices.size() || e.second >= vertices.size())
      throw ValidationError("graph: edge endpoint out of range");
    if (e.first == e.second)
      throw ValidationError("graph: loop at vertex " + vertices[e.first]);
    auto key = std::minmax(e.first, e.second);
    if (!seen.insert({key.first, key.second}).second)
      throw ValidationError("graph: duplicate or antiparallel edge between " +
                            vertices[e.first] + " and " + vertices[e.second]);
  }
}

namespace {

// Extend the current clique by vertices from `cand` (all adjacent to every
// clique member, all with index above the last member). Counts every clique.
void count_cliques(const std::vector<std::vector<bool>>& adj,
                   std::vector<std::size_t>& cand, std::size_t depth,
                   std::vector<long long>& counts) {
  if (depth + 1 >= counts.size()) counts.resize(depth + 2, 0);
  for (std::size_t i = 0; i < cand.size(); ++i) {
    std::size_t v = cand[i];
    ++counts[depth + 1];
    std::vector<std::size_t> next;
    for (std::size_t j = i + 1; j < cand.size(); ++j)
      if (adj[v][cand[j]]) next.push_back(cand[j]);
    if (!next.empty()) count_cliques(adj, next, depth + 1, counts);
  }
}

std::vector<std::vector<bool>> dense_adjacency(const Graph& g) {
  std::vector<std::vector<bool>> adj(g.size(), std::vector<bool>(g.size(), false));
  for (const auto& e : g.edges) adj[e.first][e.second] = adj[e.second][e.first] = true;
  return adj;
}

} // namespace

std::vector<long long> clique_polynomial(const Graph& g) {
  g.validate();
  auto adj = dense_adjacency(g);
  std::vector<long long> counts(1, 1); // c_0 = 1: the empty clique
  counts.resize(g.size() ? 2 : 1, 0);
  std::vector<std::size_t> all(g.size());
  std::iota(all.begin(), all.end(), 0);
  if (!all.empty()) count_cliques(adj, all, 0, counts);
  while (counts.size() > 1 && counts.back() == 0) counts.pop_back();
  return counts;
}

bool is_triangle_free(const Graph& g) {
  auto adj = dense_adjacency(g);
  for (const auto& e : g.edges)
    for (std::size_t w = 0; w < g.size(); ++w)
      if (adj[e.first][w] && adj[e.second][w]) return false;
  return true;
}

Graph opposite_graph(const Graph& g) {
  Graph out;
  out.vertices = g.vertices;
  auto adj = dense_adjacency(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (!adj[i][j]) out.edges.emplace_back(i, j);
  return out;
}

Graph full_subgraph(const Graph& g, const std::vector<std::size_t>& keep) {
  Graph out;
  std::vector<std::size_t> pos(g.size(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= g.size()) throw ValidationError("full_subgraph: index out of range");
    out.vertices.push_back(g.vertices[keep[i]]);
    pos[keep[i]] = i;
  }
  for (const auto& e : g.edges)
    if (pos[e.first] != static_cast<std::size_t>(-1) && pos[e.second] != static_cast<std::size_t>(-1))
      out.edges.emplace_back(pos[e.first], pos[e.second]);
  return out;
}

bool is_complete(const Graph& g) {
  return g.edges.size() * 2 == g.size() * (g.size() - 1);
}

std::vector<std::vector<std::size_t>> connected_components(const Graph& g) {
  auto adj = g.adjacency();
  std::vector<int> comp(g.size(), -1);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (comp[s] != -1) continue;
    std::vector<std::size_t> stack{s}, members;
    comp[s] = static_cast<int>(out.size());
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (std::size_t w : adj[v])
        if (comp[w] == -1) {
          comp[w] = comp[s];
          stack.push_back(w);
        }
    }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

bool is_connected(const Graph& g) {
  return g.size() == 0 || connected_components(g).size() == 1;
}

// ---- Chordal structure ---------------------------------------------------------

namespace {

// LexBFS: returns vertices in visit order (reverse of elimination order).
std::vector<std::size_t> lex_bfs(const Graph& g) {
  const std::size_t n = g.size();
  auto adj = dense_adjacency(g);
  // Partition refinement over a list of buckets.
  std::list<std::vector<std::size_t>> buckets;
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  buckets.push_back(all);
  std::vector<std::size_t> order;
  while (!buckets.empty()) {
    std::size_t v = buckets.front().front();
    auto& front = buckets.front();
    front.erase(front.begin());
    if (front.empty()) buckets.pop_front();
    order.push_back(v);
    for (auto it = buckets.begin(); it != buckets.end();) {
      std::vector<std::size_t> hit, miss;
      for (std::size_t w : *it) (adj[v][w] ? hit : miss).push_back(w);
      if (hit.empty() || miss.empty()) {
        ++it;
        continue;
      }
      *it = std::move(miss);
      buckets.insert(it, std::move(hit)); // neighbours gain priority
    }
  }
  return order;
}

// Chordless cycle through v, u, w where u, w are non-adjacent neighbours of v:
// v joined to a shortest u-w path avoiding N[v] \ {u, w}.
std::vector<std::size_t> chordless_cycle_witness(const Graph& g) {
  auto adj = dense_adjacency(g);
  const std::size_t n = g.size();
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t u = 0; u < n; ++u) {
      if (!adj[v][u]) continue;
      for (std::size_t w = u + 1; w < n; ++w) {
        if (!adj[v][w] || adj[u][w]) continue;
        std::vector<bool> blocked(n, false);
        blocked[v] = true;
        for (std::size_t x = 0; x < n; ++x)
          if (adj[v][x] && x != u && x != w) blocked[x] = true;
        std::vector<std::size_t> prev(n, n);
        std::deque<std::size_t> q{u};
        std::vector<bool> seen(n, false);
        seen[u] = true;
        while (!q.empty()) {
          std::size_t x = q.front();
          q.pop_front();
          if (x == w) break;
          for (std::size_t y = 0; y < n; ++y)
            if (adj[x][y] && !seen[y] && !blocked[y]) {
              seen[y] = true;
              prev[y] = x;
              q.push_back(y);
            }
        }
        if (!seen[w]) continue;
        std::vector<std::size_t> path;
        for (std::size_t x = w; x != n; x = prev[x]) path.push_back(x);
        std::reverse(path.begin(), path.end()); // u ... w
        path.push_back(v);
        return path; // cycle u-...-w-v, length >= 4
      }
    }
  return {};
}

bool verify_peo(const Graph& g, const std::vector<std::size_t>& order) {
  auto adj = dense_adjacency(g);
  const std::size_t n = g.size();
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t v = order[i];
    // Later neighbours of v must form a clique; checking the earliest suffices.
    std::size_t first = n;
    for (std::size_t w = 0; w < n; ++w)
      if (adj[v][w] && pos[w] > i && (first == n || pos[w] < pos[first])) first = w;
    if (first == n) continue;
    for (std::size_t w = 0; w < n; ++w)
      if (adj[v][w] && pos[w] > pos[first] && !adj[first][w]) return false;
  }
  return true;
}

std::unique_ptr<PastingNode> build_pasting_tree(const Graph& g,
                                                const std::vector<std::size_t>& ambient) {
  auto node = std::make_unique<PastingNode>();
  if (is_complete(g)) {
    node->leaf = true;
    node->vertices = ambient;
    return node;
  }
  auto adj = dense_adjacency(g);
  const std::size_t n = g.size();
  // First non-adjacent pair (a, b); the minimal a-b separator inside N(a) is a
  // clique in a chordal graph.
  std::size_t a = n, b = n;
  for (std::size_t i = 0; i < n && a == n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!adj[i][j]) {
        a = i;
        b = j;
        break;
      }
  // Component of b in G - N[a].
  std::vector<bool> in_cb(n, false);
  {
    std::vector<std::size_t> stack{b};
    in_cb[b] = true;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w = 0; w < n; ++w)
        if (adj[v][w] && !in_cb[w] && w != a && !adj[a][w]) {
          in_cb[w] = true;
          stack.push_back(w);
        }
    }
  }
  std::vector<std::size_t> sep;
  for (std::size_t v = 0; v < n; ++v) {
    if (!adj[a][v]) continue;
    bool touches = false;
    for (std::size_t w = 0; w < n && !touches; ++w)
      if (in_cb[w] && adj[v][w]) touches = true;
    if (touches) sep.push_back(v);
  }
  for (std::size_t i = 0; i < sep.size(); ++i)
    for (std::size_t j = i + 1; j < sep.size(); ++j)
      if (!adj[sep[i]][sep[j]])
        throw ValidationError("pasting tree: separator not complete (graph not chordal)");
  // Side of a: component of a in G - sep, plus sep.
  std::vector<bool> in_sep(n, false);
  for (std::size_t v : sep) in_sep[v] = true;
  std::vector<bool> in_a(n, false);
  {
    std::vector<std::size_t> stack{a};
    in_a[a] = true;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w = 0; w < n; ++w)
        if (adj[v][w] && !in_a[w] && !in_sep[w]) {
          in_a[w] = true;
          stack.push_back(w);
        }
    }
  }
  std::vector<std::size_t> left_idx, right_idx;
  for (std::size_t v = 0; v < n; ++v) {
    if (in_a[v] || in_sep[v]) left_idx.push_back(v);
    if (!in_a[v]) right_idx.push_back(v);
  }
  node->leaf = false;
  for (std::size_t v : sep) node->separator.push_back(ambient[v]);
  std::vector<std::size_t> left_amb, right_amb;
  for (std::size_t v : left_idx) left_amb.push_back(ambient[v]);
  for (std::size_t v : right_idx) right_amb.push_back(ambient[v]);
  node->left = build_pasting_tree(full_subgraph(g, left_idx), left_amb);
  node->right = build_pasting_tree(full_subgraph(g, right_idx), right_amb);
  return node;
}

} // namespace

ChordalStructure chordal_structure(const Graph& g) {
  g.validate();
  if (!is_connected(g))
    throw ValidationError("chordal_structure: graph must be connected");
  ChordalStructure out;
  auto visit = lex_bfs(g);
  out.elimination_order.assign(visit.rbegin(), visit.rend());
  if (verify_peo(g, out.elimination_order)) {
    out.chordal = true;
    std::vector<std::size_t> ambient(g.size());
    std::iota(ambient.begin(), ambient.end(), 0);
    if (g.size() > 0) out.tree = build_pasting_tree(g, ambient);
  } else {
    out.chordal = false;
    out.chordless_cycle = chordless_cycle_witness(g);
    if (out.chordless_cycle.size() < 4)
      throw ValidationError("chordal_structure: internal witness search failed");
  }
  return out;
}

// ---- p-graphs -------------------------------------------------------------------

void PGraph::validate() const {
  graph.validate();
  if (!is_prime(p)) throw ValidationError("pgraph: p must be prime");
  if (labels.size() != graph.edges.size())
    throw ValidationError("pgraph: one label pair required per edge");
  const unsigned min_val = (p == 2) ? 2u : 1u;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (const TruncatedPadic* t : {&labels[i].first, &labels[i].second}) {
      if (t->p() != p || t->k() != precision)
        throw ValidationError("pgraph: label prime/precision mismatch on edge " +
                              std::to_string(i));
      Valuation v = t->valuation();
      if (v.infinite) continue;
      if (v.known && v.value < min_val)
        throw ValidationError("pgraph: label valuation too small on edge between " +
                              graph.vertices[graph.edges[i].first] + " and " +
                              graph.vertices[graph.edges[i].second]);
      if (!v.known && v.value < min_val)
        throw ValidationError("pgraph: label precision too low to certify valuation");
    }
  }
}

PGraph PGraph::induced(const std::vector<std::size_t>& keep) const {
  PGraph out;
  out.p = p;
  out.precision = precision;
  out.graph = full_subgraph(graph, keep);
  std::vector<bool> in(graph.size(), false);
  for (std::size_t v : keep) in[v] = true;
  for (std::size_t i = 0; i < graph.edges.size(); ++i)
    if (in[graph.edges[i].first] && in[graph.edges[i].second]) out.labels.push_back(labels[i]);
  return out;
}

namespace {

struct LabelToken {
  long long value = 0;
  bool exact = true;
};

LabelToken parse_label_token(const std::string& tok, std::size_t line_no) {
  LabelToken out;
  std::string body = tok;
  if (!body.empty() && body.back() == '~') {
    out.exact = false;
    body.pop_back();
  }
  try {
    std::size_t used = 0;
    out.value = std::stoll(body, &used);
    if (used != body.size()) throw std::invalid_argument(body);
  } catch (const std::exception&) {
    throw ValidationError("pgraph line " + std::to_string(line_no) +
                          ": bad label token '" + tok + "'");
  }
  return out;
}

} // namespace

PGraph parse_pgraph(std::istream& in) {
  PGraph g;
  bool saw_header = false, saw_vertices = false;
  std::map<std::string, std::size_t> index;
  struct RawEdge {
    std::string o, t;
    LabelToken f1, f2;
    std::size_t line;
  };
  std::vector<RawEdge> raw_edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (!saw_header) {
      std::string ver;
      if (kw != "pgraph" || !(ls >> ver) || ver != "v1")
        throw ValidationError("pgraph line " + std::to_string(line_no) +
                              ": expected header 'pgraph v1'");
      saw_header = true;
      continue;
    }
    if (kw == "p") {
      long long v;
      if (!(ls >> v) || v < 2 || !is_prime(static_cast<std::uint64_t>(v)))
        throw ValidationError("pgraph line " + std::to_string(line_no) + ": p must be prime");
      g.p = static_cast<std::uint64_t>(v);
    } else if (kw == "precision") {
      long long v;
      if (!(ls >> v) || v < 1)
        throw ValidationError("pgraph line " + std::to_string(line_no) +
                              ": precision must be a positive integer");
      g.precision = static_cast<unsigned>(v);
    } else if (kw == "vertices") {
      if (saw_vertices)
        throw ValidationError("pgraph line " + std::to_string(line_no) +
                              ": duplicate vertices line");
      saw_vertices = true;
      std::string name;
      while (ls >> name) {
        if (index.count(name))
          throw ValidationError("pgraph line " + std::to_string(line_no) +
                                ": duplicate vertex '" + name + "'");
        index[name] = g.graph.vertices.size();
        g.graph.vertices.push_back(name);
      }
    } else if (kw == "edge") {
      RawEdge e;
      std::string t1, t2;
      if (!(ls >> e.o >> e.t >> t1 >> t2))
        throw ValidationError("pgraph line " + std::to_string(line_no) +
                              ": edge needs origin, target and two labels");
      e.f1 = parse_label_token(t1, line_no);
      e.f2 = parse_label_token(t2, line_no);
      e.line = line_no;
      raw_edges.push_back(std::move(e));
    } else {
      throw ValidationError("pgraph line " + std::to_string(line_no) +
                            ": unknown keyword '" + kw + "'");
    }
  }
  if (!saw_header) throw ValidationError("pgraph: missing 'pgraph v1' header");
  if (!saw_vertices) throw ValidationError("pgraph: missing vertices line");
  for (const auto& e : raw_edges) {
    auto io = index.find(e.o), it = index.find(e.t);
    if (io == index.end() || it == index.end())
      throw ValidationError("pgraph line " + std::to_string(e.line) +
                            ": edge references unknown vertex");
    g.graph.edges.emplace_back(io->second, it->second);
    auto mk = [&](const LabelToken& tok) {
      return tok.exact ? TruncatedPadic::from_exact(g.p, g.precision, tok.value)
                       : TruncatedPadic::from_residue(g.p, g.precision, tok.value);
    };
    g.labels.emplace_back(mk(e.f1), mk(e.f2));
  }
  g.validate();
  return g;
}

PGraph parse_pgraph_string(const std::string& text) {
  std::istringstream is(text);
  return parse_pgraph(is);
}

PGraph parse_pgraph_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open p-graph file: " + path);
  return parse_pgraph(f);
}

std::string serialize_pgraph(const PGraph& g) {
  std::ostringstream os;
  os << "pgraph v1\n";
  os << "p " << g.p << "\n";
  os << "precision " << g.precision << "\n";
  os << "vertices";
  for (const auto& v : g.graph.vertices) os << " " << v;
  os << "\n";
  for (std::size_t i = 0; i < g.graph.edges.size(); ++i) {
    os << "edge " << g.graph.vertices[g.graph.edges[i].first] << " "
       << g.graph.vertices[g.graph.edges[i].second] << " "
       << g.labels[i].first.to_string() << " " << g.labels[i].second.to_string() << "\n";
  }
  return os.str();
}

} // namespace praag
