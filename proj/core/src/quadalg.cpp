#include "praag/quadalg.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "praag/config.hpp"
#include "praag/errors.hpp"

namespace praag {

namespace {

void sort_sparse(SparseVec& v, std::uint64_t p) {
  std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
  SparseVec out;
  for (const auto& [idx, c] : v) {
    std::uint64_t cc = c % p;
    if (!out.empty() && out.back().first == idx) {
      out.back().second = add_mod(out.back().second, cc, p);
      if (out.back().second == 0) out.pop_back();
    } else if (cc != 0) {
      out.emplace_back(idx, cc);
    }
  }
  v = std::move(out);
}

// row -= f * pivot (pivot has leading coefficient 1).
SparseVec sparse_axpy(const SparseVec& row, const SparseVec& pivot, std::uint64_t f,
                      std::uint64_t p) {
  SparseVec out;
  out.reserve(row.size() + pivot.size());
  std::size_t i = 0, j = 0;
  while (i < row.size() || j < pivot.size()) {
    if (j == pivot.size() || (i < row.size() && row[i].first < pivot[j].first)) {
      out.push_back(row[i++]);
    } else if (i == row.size() || pivot[j].first < row[i].first) {
      std::uint64_t c = sub_mod(0, mul_mod(f, pivot[j].second, p), p);
      if (c) out.emplace_back(pivot[j].first, c);
      ++j;
    } else {
      std::uint64_t c = sub_mod(row[i].second, mul_mod(f, pivot[j].second, p), p);
      if (c) out.emplace_back(row[i].first, c);
      ++i;
      ++j;
    }
  }
  return out;
}

// Incremental reduced echelon basis over sparse rows.
class SparseRref {
public:
  explicit SparseRref(std::uint64_t p) : p_(p) {}

  // Returns true if the row was independent (a new pivot was added).
  bool add_row(SparseVec row) {
    reduce(row);
    if (row.empty()) return false;
    const std::uint64_t inv = inv_mod(row[0].second, p_);
    for (auto& [idx, c] : row) c = mul_mod(c, inv, p_);
    const std::uint32_t lead = row[0].first;
    // Keep full reduction: eliminate the new pivot from existing rows.
    for (auto& [piv, r] : rows_) {
      (void)piv;
      auto it = std::lower_bound(r.begin(), r.end(), lead,
                                 [](const auto& e, std::uint32_t v) { return e.first < v; });
      if (it != r.end() && it->first == lead) r = sparse_axpy(r, row, it->second, p_);
    }
    rows_[lead] = std::move(row);
    return true;
  }

  void reduce(SparseVec& row) const {
    while (!row.empty()) {
      auto it = rows_.find(row[0].first);
      if (it == rows_.end()) return;
      row = sparse_axpy(row, it->second, row[0].second, p_);
    }
  }

  std::size_t rank() const { return rows_.size(); }
  const std::map<std::uint32_t, SparseVec>& rows() const { return rows_; }
  bool is_pivot(std::uint32_t col) const { return rows_.count(col) > 0; }

private:
  std::uint64_t p_;
  std::map<std::uint32_t, SparseVec> rows_; // pivot col -> normalized row
};

} // namespace

QuadraticAlgebra::QuadraticAlgebra(std::uint64_t p_, std::vector<std::string> gens,
                                   std::vector<SparseVec> omega_raw)
    : p(p_), generators(std::move(gens)) {
  if (!is_prime(p)) throw ValidationError("quadratic algebra: p must be prime");
  {
    auto names = generators;
    std::sort(names.begin(), names.end());
    if (std::adjacent_find(names.begin(), names.end()) != names.end())
      throw ValidationError("quadratic algebra: duplicate generator name");
  }
  const std::size_t d = generators.size();
  SparseRref rref(p);
  for (auto& v : omega_raw) {
    sort_sparse(v, p);
    for (const auto& [idx, c] : v) {
      (void)c;
      if (idx >= d * d) throw ValidationError("quadratic algebra: omega index out of range");
    }
    rref.add_row(std::move(v));
  }
  for (const auto& [piv, row] : rref.rows()) {
    (void)piv;
    omega.push_back(row);
  }
}

QuadraticAlgebra graph_algebra(const PGraph& g, GraphAlgebraKind kind) {
  g.validate();
  const std::size_t d = g.graph.size();
  auto idx = [d](std::size_t i, std::size_t j) {
    return static_cast<std::uint32_t>(i * d + j);
  };
  std::vector<SparseVec> omega;
  const std::uint64_t p = g.p;
  if (kind == GraphAlgebraKind::MildTest) {
    for (const auto& e : g.graph.edges)
      omega.push_back({{std::min(idx(e.first, e.second), idx(e.second, e.first)), 1},
                       {std::max(idx(e.first, e.second), idx(e.second, e.first)), p - 1}});
  } else {
    std::vector<std::vector<bool>> adj(d, std::vector<bool>(d, false));
    for (const auto& e : g.graph.edges) adj[e.first][e.second] = adj[e.second][e.first] = true;
    for (std::size_t i = 0; i < d; ++i) omega.push_back({{idx(i, i), 1}});
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        omega.push_back({{idx(i, j), 1}, {idx(j, i), 1}});
        if (!adj[i][j]) omega.push_back({{idx(i, j), 1}});
      }
  }
  return QuadraticAlgebra(p, g.graph.vertices, std::move(omega));
}

// ---- HilbertEngine ---------------------------------------------------------------

HilbertEngine::HilbertEngine(QuadraticAlgebra a) : alg_(std::move(a)) {
  monomial_mode_ = std::all_of(alg_.omega.begin(), alg_.omega.end(),
                               [](const SparseVec& v) { return v.size() <= 2; });
  dims_ = {1};
  pi_.push_back({}); // degree 0 placeholder
}

std::vector<long long> HilbertEngine::dims_up_to(std::size_t n) {
  while (dims_.size() <= n) extend();
  return std::vector<long long>(dims_.begin(), dims_.begin() + n + 1);
}

long long HilbertEngine::dim(std::size_t n) {
  while (dims_.size() <= n) extend();
  return dims_[n];
}

void HilbertEngine::extend() {
  const std::size_t n = dims_.size();
  const std::size_t d = alg_.dim_v();
  if (n == 1) {
    std::vector<SparseVec> pi1(d);
    for (std::size_t i = 0; i < d; ++i) pi1[i] = {{static_cast<std::uint32_t>(i), 1}};
    pi_.push_back(std::move(pi1));
    dims_.push_back(static_cast<long long>(d));
    return;
  }
  const std::uint64_t cand = static_cast<std::uint64_t>(d) * dims_[n - 1];
  if (cand > max_matrix_cells())
    throw ResourceError("hilbert_dims: degree " + std::to_string(n) + " needs " +
                        std::to_string(cand) + " candidates, over PRAAG_MAX_MATRIX");
  if (monomial_mode_)
    extend_monomial(n);
  else
    extend_general(n);
}

namespace {

// Union-find with multiplicative edge weights: val(x) = mult(x) * val(parent).
struct WeightedUf {
  std::vector<std::uint32_t> parent;
  std::vector<std::uint64_t> mult;
  std::vector<bool> zero;
  std::uint64_t p;

  WeightedUf(std::size_t n, std::uint64_t p_) : parent(n), mult(n, 1), zero(n, false), p(p_) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  std::vector<std::uint32_t> chain; // scratch for find()

  std::pair<std::uint32_t, std::uint64_t> find(std::uint32_t x) {
    // Iterative path compression; chains can be ~10^5 long.
    chain.clear();
    std::uint32_t v = x;
    while (parent[v] != v) {
      chain.push_back(v);
      v = parent[v];
    }
    const std::uint32_t root = v;
    std::uint64_t acc = 1;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      acc = mul_mod(mult[*it], acc, p);
      mult[*it] = acc;
      parent[*it] = root;
    }
    return {root, x == root ? std::uint64_t{1} : mult[x]};
  }

  void force_zero(std::uint32_t x) {
    auto [root, m] = find(x);
    (void)m;
    zero[root] = true;
  }

  // Impose ca * val(a) + cb * val(b) = 0 with ca, cb nonzero.
  void relate(std::uint32_t a, std::uint64_t ca, std::uint32_t b, std::uint64_t cb) {
    auto [ra, ma] = find(a);
    auto [rb, mb] = find(b);
    const std::uint64_t wa = mul_mod(ca, ma, p);
    const std::uint64_t wb = mul_mod(cb, mb, p);
    if (ra == rb) {
      if (add_mod(wa, wb, p) != 0) zero[ra] = true;
      return;
    }
    // val(ra) = -(wb / wa) * val(rb)
    parent[ra] = rb;
    mult[ra] = mul_mod(sub_mod(0, wb, p), inv_mod(wa, p), p);
    if (zero[ra]) zero[rb] = true;
  }
};

} // namespace

void HilbertEngine::extend_monomial(std::size_t n) {
  const std::size_t d = alg_.dim_v();
  const std::size_t prev = static_cast<std::size_t>(dims_[n - 1]);
  const std::size_t prev2 = static_cast<std::size_t>(dims_[n - 2]);
  const std::size_t cand = d * prev;
  WeightedUf uf(cand, alg_.p);
  const auto& pi_prev = pi_[n - 1];
  for (const SparseVec& omega : alg_.omega) {
    for (std::size_t b = 0; b < prev2; ++b) {
      // Row = sum over omega terms (i, j, c) of c * e_i * pi(e_j * b).
      std::uint32_t pos[2];
      std::uint64_t coef[2];
      int terms = 0;
      bool dead = false;
      for (const auto& [ij, c] : omega) {
        const std::size_t i = ij / d, j = ij % d;
        const SparseVec& expr = pi_prev[j * prev2 + b];
        if (expr.empty()) continue;
        const std::uint32_t candidate = static_cast<std::uint32_t>(i * prev + expr[0].first);
        const std::uint64_t cc = mul_mod(c, expr[0].second, alg_.p);
        if (terms < 2) {
          pos[terms] = candidate;
          coef[terms] = cc;
          ++terms;
        } else {
          dead = true; // cannot happen in monomial mode; fall back defensively
          break;
        }
      }
      if (dead) {
        monomial_mode_ = false;
        extend_general(n);
        return;
      }
      if (terms == 1) {
        uf.force_zero(pos[0]);
      } else if (terms == 2) {
        if (pos[0] == pos[1]) {
          if (add_mod(coef[0], coef[1], alg_.p) != 0) uf.force_zero(pos[0]);
        } else {
          uf.relate(pos[0], coef[0], pos[1], coef[1]);
        }
      }
    }
  }
  // Basis = non-zero roots, numbered in candidate order.
  std::vector<std::uint32_t> basis_index(cand, 0);
  long long dim_n = 0;
  for (std::size_t x = 0; x < cand; ++x) {
    auto [root, m] = uf.find(static_cast<std::uint32_t>(x));
    (void)m;
    if (root == x && !uf.zero[root]) basis_index[x] = static_cast<std::uint32_t>(dim_n++);
  }
  std::vector<SparseVec> pin(cand);
  for (std::size_t x = 0; x < cand; ++x) {
    auto [root, m] = uf.find(static_cast<std::uint32_t>(x));
    if (!uf.zero[root]) pin[x] = {{basis_index[root], m}};
  }
  pi_.push_back(std::move(pin));
  dims_.push_back(dim_n);
}

void HilbertEngine::extend_general(std::size_t n) {
  const std::size_t d = alg_.dim_v();
  const std::size_t prev = static_cast<std::size_t>(dims_[n - 1]);
  const std::size_t prev2 = static_cast<std::size_t>(dims_[n - 2]);
  const std::size_t cand = d * prev;
  SparseRref rref(alg_.p);
  std::uint64_t cells = 0;
  const auto& pi_prev = pi_[n - 1];
  for (const SparseVec& omega : alg_.omega) {
    for (std::size_t b = 0; b < prev2; ++b) {
      SparseVec row;
      for (const auto& [ij, c] : omega) {
        const std::size_t i = ij / d, j = ij % d;
        for (const auto& [bidx, cc] : pi_prev[j * prev2 + b])
          row.emplace_back(static_cast<std::uint32_t>(i * prev + bidx), mul_mod(c, cc, alg_.p));
      }
      sort_sparse(row, alg_.p);
      cells += row.size();
      if (cells > max_matrix_cells())
        throw ResourceError("hilbert_dims: relation matrix exceeds PRAAG_MAX_MATRIX");
      rref.add_row(std::move(row));
    }
  }
  std::vector<std::uint32_t> basis_index(cand, 0);
  long long dim_n = 0;
  for (std::size_t x = 0; x < cand; ++x)
    if (!rref.is_pivot(static_cast<std::uint32_t>(x)))
      basis_index[x] = static_cast<std::uint32_t>(dim_n++);
  std::vector<SparseVec> pin(cand);
  for (std::size_t x = 0; x < cand; ++x) {
    const auto& rows = rref.rows();
    auto it = rows.find(static_cast<std::uint32_t>(x));
    if (it == rows.end()) {
      pin[x] = {{basis_index[x], 1}};
    } else {
      SparseVec expr;
      for (std::size_t t = 1; t < it->second.size(); ++t) {
        const auto& [col, c] = it->second[t];
        expr.emplace_back(basis_index[col], sub_mod(0, c, alg_.p));
      }
      std::sort(expr.begin(), expr.end(),
                [](auto& a, auto& b) { return a.first < b.first; });
      pin[x] = std::move(expr);
    }
  }
  pi_.push_back(std::move(pin));
  dims_.push_back(dim_n);
}

SparseVec HilbertEngine::multiply_basis(const std::vector<std::uint64_t>& v, std::size_t b,
                                        std::size_t n) {
  if (n == 0) throw ValidationError("multiply_basis: degree must be >= 1");
  while (dims_.size() <= n) extend();
  const std::size_t prev = static_cast<std::size_t>(dims_[n - 1]);
  if (v.size() != alg_.dim_v()) throw ValidationError("multiply_basis: bad vector length");
  SparseVec out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] % alg_.p == 0) continue;
    for (const auto& [bi, c] : pi_[n][i * prev + b])
      out.emplace_back(bi, mul_mod(v[i] % alg_.p, c, alg_.p));
  }
  sort_sparse(out, alg_.p);
  return out;
}

std::size_t HilbertEngine::product_subspace_dim(
    const std::vector<std::vector<std::uint64_t>>& s, std::size_t n) {
  if (n == 0) throw ValidationError("product_subspace_dim: degree must be >= 1");
  while (dims_.size() <= n) extend();
  const std::size_t prev = static_cast<std::size_t>(dims_[n - 1]);
  SparseRref rref(alg_.p);
  for (const auto& vec : s)
    for (std::size_t b = 0; b < prev; ++b) rref.add_row(multiply_basis(vec, b, n));
  return rref.rank();
}

std::vector<long long> hilbert_dims(const QuadraticAlgebra& a, std::size_t n) {
  HilbertEngine engine(a);
  return engine.dims_up_to(n);
}

// ---- Mildness ------------------------------------------------------------------------

MildnessReport mildness_check(const PGraph& g, std::size_t depth) {
  MildnessReport rep;
  rep.depth = depth;
  const long long d = static_cast<long long>(g.graph.size());
  const long long r = static_cast<long long>(g.graph.edges.size());
  IntSeries denom = IntSeries::from_ints({1, -d, r});
  IntSeries q = series_reciprocal(denom, depth);
  for (const auto& c : q.coeffs) {
    // reciprocal of an integer unit series stays integral
    if (denominator(c) != 1) throw ResourceError("mildness_check: non-integral series coefficient");
    rep.series.push_back(numerator(c).convert_to<long long>());
  }
  HilbertEngine engine(graph_algebra(g, GraphAlgebraKind::MildTest));
  for (std::size_t n = 0; n <= depth; ++n) {
    long long dn = engine.dim(n);
    rep.dims.push_back(dn);
    if (dn != rep.series[n]) {
      rep.mild = false;
      rep.first_mismatch = n;
      break;
    }
  }
  return rep;
}

// ---- Constructions ---------------------------------------------------------------------

namespace {

std::vector<SparseVec> reindex_omega(const std::vector<SparseVec>& omega, std::size_t d_old,
                                     std::size_t d_new, std::size_t offset) {
  std::vector<SparseVec> out;
  out.reserve(omega.size());
  for (const auto& v : omega) {
    SparseVec w;
    for (const auto& [ij, c] : v) {
      const std::size_t i = ij / d_old, j = ij % d_old;
      w.emplace_back(static_cast<std::uint32_t>((i + offset) * d_new + (j + offset)), c);
    }
    out.push_back(std::move(w));
  }
  return out;
}

QuadraticAlgebra combine(const QuadraticAlgebra& a, const QuadraticAlgebra& b,
                         bool kill_cross) {
  if (a.p != b.p) throw ValidationError("algebra combination: primes differ");
  std::vector<std::string> gens = a.generators;
  gens.insert(gens.end(), b.generators.begin(), b.generators.end());
  const std::size_t da = a.dim_v(), db = b.dim_v(), d = da + db;
  std::vector<SparseVec> omega = reindex_omega(a.omega, da, d, 0);
  auto more = reindex_omega(b.omega, db, d, da);
  omega.insert(omega.end(), more.begin(), more.end());
  auto idx = [d](std::size_t i, std::size_t j) {
    return static_cast<std::uint32_t>(i * d + j);
  };
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = da; j < d; ++j) {
      if (kill_cross) {
        omega.push_back({{idx(i, j), 1}});
        omega.push_back({{idx(j, i), 1}});
      } else {
        omega.push_back({{idx(i, j), 1}, {idx(j, i), 1}});
      }
    }
  return QuadraticAlgebra(a.p, std::move(gens), std::move(omega));
}

} // namespace

QuadraticAlgebra direct_sum(const QuadraticAlgebra& a, const QuadraticAlgebra& b) {
  return combine(a, b, true);
}

QuadraticAlgebra wedge_product(const QuadraticAlgebra& a, const QuadraticAlgebra& b) {
  return combine(a, b, false);
}

QuadraticAlgebra exterior_algebra(std::uint64_t p, std::vector<std::string> gens) {
  PGraph g;
  g.p = p;
  g.precision = 1;
  g.graph.vertices = gens;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      g.graph.edges.emplace_back(i, j);
      g.labels.emplace_back(TruncatedPadic::exact_zero(p, 1), TruncatedPadic::exact_zero(p, 1));
    }
  return graph_algebra(g, GraphAlgebraKind::ExteriorOp);
}

bool mantel_bound_check(long long d, long long r) { return 4 * r <= d * d; }

std::optional<GartnerSplit> gartner_split_search(const Graph& g) {
  g.validate();
  const std::size_t n = g.size();
  if (n == 0) return std::nullopt;
  if (n > 20) throw ResourceError("gartner_split_search: more than 20 vertices");
  // V1 independent and every edge crossing makes the cup pairing V1 x V2
  // surjective onto degree 2. First valid mask wins; v1 is canonicalized to
  // the side containing vertex 0.
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    bool ok = true;
    for (const auto& e : g.edges) {
      const bool a = (mask >> e.first) & 1, b = (mask >> e.second) & 1;
      if (a == b) { // edge inside one side
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    const bool flip = !((mask >> 0) & 1);
    GartnerSplit split;
    for (std::size_t v = 0; v < n; ++v)
      ((((mask >> v) & 1) != flip) ? split.v1 : split.v2).push_back(v);
    return split;
  }
  return std::nullopt;
}

} // namespace praag
