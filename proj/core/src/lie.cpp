#include "praag/lie.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace praag {

namespace {

bool decide_zero_or_throw(const TruncatedPadic& x, const char* what) {
  const auto d = x.decide_zero();
  if (!d) {
    std::ostringstream os;
    os << what << ": vanishing of " << x.to_string() << " undecidable mod " << x.p() << "^"
       << x.k();
    throw PrecisionError(os.str());
  }
  return *d;
}

void require_deep(const TruncatedPadic& x, const char* what) {
  const std::uint64_t unit = x.p() == 2 ? 4 : x.p();
  if (x.p() == 2 && x.k() < 2) throw ValidationError(std::string(what) + ": p = 2 needs precision >= 2");
  if (x.residue() % unit != 0) {
    std::ostringstream os;
    os << what << ": coefficient " << x.to_string() << " must have valuation >= "
       << (x.p() == 2 ? 2 : 1);
    throw ValidationError(os.str());
  }
}

} // namespace

// ---- Triangle labels ---------------------------------------------------------

TriangleLabels TriangleLabels::from_ints(std::uint64_t p, unsigned k, long long a1, long long a2,
                                         long long b2, long long b3, long long g1, long long g3) {
  TriangleLabels t;
  t.alpha1 = TruncatedPadic::from_exact(p, k, a1);
  t.alpha2 = TruncatedPadic::from_exact(p, k, a2);
  t.beta2 = TruncatedPadic::from_exact(p, k, b2);
  t.beta3 = TruncatedPadic::from_exact(p, k, b3);
  t.gamma1 = TruncatedPadic::from_exact(p, k, g1);
  t.gamma3 = TruncatedPadic::from_exact(p, k, g3);
  return t;
}

std::array<TruncatedPadic, 6> TriangleLabels::as_array() const {
  return {alpha1, alpha2, beta2, beta3, gamma1, gamma3};
}

void TriangleLabels::validate() const {
  if (!is_prime(alpha1.p())) throw ValidationError("TriangleLabels: p must be prime");
  for (const auto& x : as_array()) {
    if (x.p() != alpha1.p() || x.k() != alpha1.k())
      throw ValidationError("TriangleLabels: mixed moduli");
    require_deep(x, "TriangleLabels");
  }
}

std::array<TruncatedPadic, 3> triangle_jacobi_values(const TriangleLabels& t) {
  return {t.alpha1 * t.beta2 - t.gamma1 * t.beta3, t.gamma1 * t.alpha2 - t.beta2 * t.gamma3,
          t.alpha1 * t.gamma3 - t.alpha2 * t.beta3};
}

bool triangle_jacobi(const TriangleLabels& t) {
  t.validate();
  bool undecided = false;
  for (const auto& v : triangle_jacobi_values(t)) {
    const auto d = v.decide_zero();
    if (d && !*d) return false;
    if (!d) undecided = true;
  }
  if (undecided)
    throw PrecisionError("triangle_jacobi: an equation vanishes mod p^k without being provably zero");
  return true;
}

// ---- Classification ----------------------------------------------------------

namespace {

using Six = std::array<TruncatedPadic, 6>; // (a1, a2, b2, b3, g1, g3)

// cyclic relabeling (x1,x2,x3) -> (x2,x3,x1)
Six rot_labels(const Six& s) { return {s[2], s[3], s[5], s[4], s[1], s[0]}; }

// transposition (x1,x2,x3) -> (x2,x1,x3)
Six swap_labels(const Six& s) { return {-s[1], -s[0], -s[4], -s[5], -s[2], -s[3]}; }

} // namespace

std::string FamilyTag::to_string() const {
  static const char* names[] = {"L1", "L2", "L3", "L4", "L*"};
  std::ostringstream os;
  os << names[static_cast<int>(family)] << "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) os << ",";
    os << params[i].to_string();
  }
  os << ")";
  return os.str();
}

std::optional<FamilyTag> classify_triangle(const TriangleLabels& t) {
  t.validate();
  if (!triangle_jacobi(t)) return std::nullopt;

  const Six s0 = t.as_array();
  std::array<bool, 6> zero{};
  for (std::size_t i = 0; i < 6; ++i) zero[i] = decide_zero_or_throw(s0[i], "classify_triangle");

  // Transforms whose image places the scanned slot at a1; scan order a1, b2,
  // g3, a2, b3, g1.
  static const std::array<int, 6> scan = {0, 2, 5, 1, 3, 4};
  int found = -1;
  for (int pos = 0; pos < 6; ++pos)
    if (zero[static_cast<std::size_t>(scan[static_cast<std::size_t>(pos)])]) {
      found = pos;
      break;
    }

  if (found < 0) {
    // All six coefficients are nonzero: the consistency system forces the
    // paired coefficients to agree up to one global sign.
    const std::array<TruncatedPadic, 3> diff = {s0[4] - s0[2], s0[0] - s0[3], s0[1] - s0[5]};
    const std::array<TruncatedPadic, 3> sum = {s0[4] + s0[2], s0[0] + s0[3], s0[1] + s0[5]};
    auto pattern = [](const std::array<TruncatedPadic, 3>& v, bool& undecided) {
      bool all = true;
      for (const auto& x : v) {
        const auto d = x.decide_zero();
        if (!d) {
          undecided = true;
          all = false;
        } else if (!*d) {
          all = false;
        }
      }
      return all;
    };
    bool und = false;
    if (pattern(diff, und)) return FamilyTag{Family::Lstar, {s0[0], s0[1], s0[2]}};
    if (pattern(sum, und)) return FamilyTag{Family::L4, {s0[0], s0[1], s0[2]}};
    if (und) throw PrecisionError("classify_triangle: sign pattern undecidable at precision");
    throw std::logic_error("classify_triangle: consistency passed but no sign pattern matched");
  }

  Six s = s0;
  switch (found) {
    case 0: break;
    case 1: s = rot_labels(s0); break;
    case 2: s = rot_labels(rot_labels(s0)); break;
    case 3: s = swap_labels(s0); break;
    case 4: s = swap_labels(rot_labels(s0)); break;
    default: s = swap_labels(rot_labels(rot_labels(s0))); break;
  }
  // Case tree under a1 = 0.
  if (decide_zero_or_throw(s[3], "classify_triangle")) {
    // (eta, rho, mu, lambda) = (a2, g1, b2, g3), subject to eta*rho = mu*lambda
    return FamilyTag{Family::L1, {s[1], s[4], s[2], s[5]}};
  }
  // b3 != 0 forces a2 = g1 = 0 through equations 1 and 3.
  if (!decide_zero_or_throw(s[1], "classify_triangle") ||
      !decide_zero_or_throw(s[4], "classify_triangle"))
    throw std::logic_error("classify_triangle: case tree invariant violated (a2, g1)");
  if (decide_zero_or_throw(s[2], "classify_triangle"))
    return FamilyTag{Family::L3, {s[3], s[5]}};
  // Equation 2 forces b2*g3 = 0.
  if (!decide_zero_or_throw(s[5], "classify_triangle"))
    throw std::logic_error("classify_triangle: case tree invariant violated (g3)");
  return FamilyTag{Family::L2, {s[2], s[3]}};
}

// ---- Powerful lattices -------------------------------------------------------

PowerfulLieLattice PowerfulLieLattice::abelian(std::uint64_t p, unsigned k, std::size_t rank) {
  PowerfulLieLattice L;
  L.p = p;
  L.precision = k;
  L.rank = rank;
  const auto z = TruncatedPadic::exact_zero(p, k);
  L.c.assign(rank, std::vector<std::vector<TruncatedPadic>>(
                       rank, std::vector<TruncatedPadic>(rank, z)));
  return L;
}

std::vector<TruncatedPadic> PowerfulLieLattice::zero_vector() const {
  return std::vector<TruncatedPadic>(rank, TruncatedPadic::exact_zero(p, precision));
}

void PowerfulLieLattice::set_pair(std::size_t i, std::size_t j, std::vector<TruncatedPadic> v) {
  if (i == j || i >= rank || j >= rank) throw ValidationError("set_pair: bad basis pair");
  if (v.size() != rank) throw ValidationError("set_pair: wrong vector length");
  c[j][i].clear();
  for (const auto& x : v) c[j][i].push_back(-x);
  c[i][j] = std::move(v);
}

std::vector<TruncatedPadic> PowerfulLieLattice::bracket(const std::vector<TruncatedPadic>& u,
                                                        const std::vector<TruncatedPadic>& v) const {
  if (u.size() != rank || v.size() != rank) throw ValidationError("bracket: wrong vector length");
  auto w = zero_vector();
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = i + 1; j < rank; ++j) {
      const TruncatedPadic coef = u[i] * v[j] - u[j] * v[i];
      if (coef.is_exact_zero()) continue;
      for (std::size_t m = 0; m < rank; ++m) w[m] = w[m] + coef * c[i][j][m];
    }
  return w;
}

void PowerfulLieLattice::validate() const {
  if (!is_prime(p)) throw ValidationError("PowerfulLieLattice: p must be prime");
  if (precision == 0 || (p == 2 && precision < 2))
    throw ValidationError("PowerfulLieLattice: precision too small");
  if (c.size() != rank) throw ValidationError("PowerfulLieLattice: bad table shape");
  for (const auto& row : c) {
    if (row.size() != rank) throw ValidationError("PowerfulLieLattice: bad table shape");
    for (const auto& v : row) {
      if (v.size() != rank) throw ValidationError("PowerfulLieLattice: bad table shape");
      for (const auto& x : v) {
        if (x.p() != p || x.k() != precision)
          throw ValidationError("PowerfulLieLattice: mixed moduli");
        require_deep(x, "PowerfulLieLattice");
      }
    }
  }
  for (std::size_t i = 0; i < rank; ++i)
    for (const auto& x : c[i][i])
      if (!x.is_exact_zero()) throw ValidationError("PowerfulLieLattice: nonzero diagonal bracket");
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = i + 1; j < rank; ++j)
      for (std::size_t m = 0; m < rank; ++m) {
        const TruncatedPadic& a = c[i][j][m];
        const TruncatedPadic& b = c[j][i][m];
        const TruncatedPadic nb = -b;
        if (a.residue() != nb.residue() || a.is_exact() != nb.is_exact() ||
            (a.is_exact() && a.exact_value() != nb.exact_value()))
          throw ValidationError("PowerfulLieLattice: antisymmetry violated");
      }

  auto basis = [&](std::size_t m) {
    auto v = zero_vector();
    v[m] = TruncatedPadic::from_exact(p, precision, 1);
    return v;
  };
  bool undecided = false;
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = i + 1; j < rank; ++j)
      for (std::size_t k = j + 1; k < rank; ++k) {
        auto jac = bracket(c[i][j], basis(k));
        const auto t2 = bracket(c[j][k], basis(i));
        const auto t3 = bracket(c[k][i], basis(j));
        for (std::size_t m = 0; m < rank; ++m) {
          const TruncatedPadic x = jac[m] + t2[m] + t3[m];
          const auto d = x.decide_zero();
          if (d && !*d) {
            std::ostringstream os;
            os << "PowerfulLieLattice: Jacobi identity fails at triple (" << i << "," << j << ","
               << k << ")";
            throw ValidationError(os.str());
          }
          if (!d) undecided = true;
        }
      }
  if (undecided)
    throw PrecisionError("PowerfulLieLattice: Jacobi identity undecidable at precision");
}

PowerfulLieLattice triangle_lattice(const TriangleLabels& t) {
  t.validate();
  const std::uint64_t p = t.alpha1.p();
  const unsigned k = t.alpha1.k();
  auto L = PowerfulLieLattice::abelian(p, k, 3);
  const auto z = TruncatedPadic::exact_zero(p, k);
  L.set_pair(0, 1, {t.alpha1, t.alpha2, z});
  L.set_pair(1, 2, {z, t.beta2, t.beta3});
  L.set_pair(2, 0, {t.gamma1, z, t.gamma3});
  return L;
}

PowerfulLieLattice family_lattice(const FamilyTag& tag) {
  const std::size_t want = tag.family == Family::L1 ? 4
                           : (tag.family == Family::L2 || tag.family == Family::L3) ? 2
                                                                                    : 3;
  if (tag.params.size() != want) throw ValidationError("family_lattice: wrong parameter count");
  const std::uint64_t p = tag.params[0].p();
  const unsigned k = tag.params[0].k();
  const auto z = TruncatedPadic::exact_zero(p, k);
  if (tag.family == Family::L4 || tag.family == Family::Lstar) {
    for (const auto& x : tag.params)
      if (decide_zero_or_throw(x, "family_lattice"))
        throw ValidationError("family_lattice: L4 and L* require eta*mu*lambda != 0");
  }
  TriangleLabels t;
  switch (tag.family) {
    case Family::L1:
      t = {z, tag.params[0], tag.params[2], z, tag.params[1], tag.params[3]};
      break;
    case Family::L2:
      t = {z, z, tag.params[0], tag.params[1], z, z};
      break;
    case Family::L3:
      t = {z, z, z, tag.params[0], z, tag.params[1]};
      break;
    case Family::L4:
      t = {tag.params[0], tag.params[1], tag.params[2],
           -tag.params[0], -tag.params[2], -tag.params[1]};
      break;
    case Family::Lstar:
      t = {tag.params[0], tag.params[1], tag.params[2],
           tag.params[0], tag.params[2], tag.params[1]};
      break;
  }
  auto L = triangle_lattice(t);
  L.validate();
  return L;
}

bool is_metabelian(const PowerfulLieLattice& L) {
  L.validate();
  if (L.rank > 4) throw ValidationError("is_metabelian: rank > 4 unsupported");
  std::vector<std::vector<TruncatedPadic>> span;
  for (std::size_t i = 0; i < L.rank; ++i)
    for (std::size_t j = i + 1; j < L.rank; ++j) span.push_back(L.c[i][j]);
  bool undecided = false;
  for (std::size_t s = 0; s < span.size(); ++s)
    for (std::size_t t = s + 1; t < span.size(); ++t) {
      const auto w = L.bracket(span[s], span[t]);
      for (const auto& x : w) {
        const auto d = x.decide_zero();
        if (d && !*d) return false;
        if (!d) undecided = true;
      }
    }
  if (undecided) throw PrecisionError("is_metabelian: undecidable at precision");
  return true;
}

// ---- Complete p-graphs -------------------------------------------------------

namespace {

// label of [x_a, x_b] as (coefficient of x_a, coefficient of x_b)
std::optional<std::pair<TruncatedPadic, TruncatedPadic>> oriented_label(const PGraph& g,
                                                                        std::size_t a,
                                                                        std::size_t b) {
  for (std::size_t e = 0; e < g.graph.edges.size(); ++e) {
    const auto& [o, t] = g.graph.edges[e];
    if (o == a && t == b) return g.labels[e];
    if (o == b && t == a) return std::make_pair(-g.labels[e].second, -g.labels[e].first);
  }
  return std::nullopt;
}

} // namespace

TriangleLabels triangle_frame(const PGraph& g, std::size_t v1, std::size_t v2, std::size_t v3) {
  const auto a = oriented_label(g, v1, v2);
  const auto b = oriented_label(g, v2, v3);
  const auto c = oriented_label(g, v3, v1);
  if (!a || !b || !c) throw ValidationError("triangle_frame: vertex triple is not a triangle");
  TriangleLabels t;
  t.alpha1 = a->first;
  t.alpha2 = a->second;
  t.beta2 = b->first;
  t.beta3 = b->second;
  t.gamma3 = c->first;
  t.gamma1 = c->second;
  return t;
}

std::variant<PowerfulLieLattice, TripleFailure> complete_graph_lattice(const PGraph& g) {
  g.validate();
  if (!is_complete(g.graph)) throw ValidationError("complete_graph_lattice: graph is not complete");
  const std::size_t n = g.graph.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (!triangle_jacobi(triangle_frame(g, i, j, k))) return TripleFailure{{i, j, k}};
  auto L = PowerfulLieLattice::abelian(g.p, g.precision, n);
  for (std::size_t e = 0; e < g.graph.edges.size(); ++e) {
    const auto& [o, t] = g.graph.edges[e];
    auto v = L.zero_vector();
    v[o] = g.labels[e].first;
    v[t] = g.labels[e].second;
    L.set_pair(o, t, std::move(v));
  }
  return L;
}

// ---- The SL2 correction system -----------------------------------------------

Sl2System sl2_system(long long d1, long long d2, long long d3, std::uint64_t p) {
  if (!is_prime(p) || p == 2) throw ValidationError("sl2_system: p must be an odd prime");
  static const int M[9][9] = {
      {1, 0, 0, 0, 1, -1, 0, 0, 0},
      {1, 0, -1, 0, 1, 0, 0, 0, 0},
      {0, 0, -1, 0, 0, -1, 0, 0, 0},
      {0, 0, 0, -1, 0, 0, -1, 0, 0},
      {0, 0, 0, 0, 1, 0, -1, 0, 1},
      {0, 0, 0, -1, 1, 0, 0, 0, 1},
      {1, 0, 0, 0, 0, 0, 0, -1, 1},
      {0, -1, 0, 0, 0, 0, 0, -1, 0},
      {1, -1, 0, 0, 0, 0, 0, 0, 1},
  };
  Sl2System sys;
  sys.entries.assign(9, std::vector<long long>(9));
  sys.matrix = FpMatrix(p, 9, 9);
  for (std::size_t r = 0; r < 9; ++r)
    for (std::size_t c = 0; c < 9; ++c) {
      sys.entries[r][c] = M[r][c];
      sys.matrix.set_signed(r, c, M[r][c]);
    }
  const std::uint64_t D1 = residue_mod(d1, p), D2 = residue_mod(d2, p), D3 = residue_mod(d3, p);
  sys.rhs = {D1, D2, 0, 0, D3, D1, D3, 0, D2};
  const std::uint64_t half = inv_mod(2, p);
  auto h = [&](std::uint64_t x) { return mul_mod(half, x, p); };
  sys.solution = {h(D2),
                  h(sub_mod(D3, D2, p)),
                  h(sub_mod(D1, D2, p)),
                  h(sub_mod(D3, D1, p)),
                  h(D1),
                  h(sub_mod(D2, D1, p)),
                  h(sub_mod(D1, D3, p)),
                  h(sub_mod(D2, D3, p)),
                  h(D3)};
  for (std::size_t r = 0; r < 9; ++r) {
    std::uint64_t acc = 0;
    for (std::size_t c = 0; c < 9; ++c)
      acc = add_mod(acc, mul_mod(sys.matrix.at(r, c), sys.solution[c], p), p);
    if (acc != sys.rhs[r])
      throw std::logic_error("sl2_system: closed-form solution check failed");
  }
  return sys;
}

// ---- Truncated Campbell-Hausdorff --------------------------------------------

namespace {

// Series over the free associative algebra on two letters, truncated by total
// degree; per degree n the 2^n words are indexed by letter bits (bit t is the
// letter at position t; 0 = X, 1 = Y).
struct WordSeries {
  unsigned cap;
  std::vector<std::vector<Rat>> deg;

  explicit WordSeries(unsigned cap_) : cap(cap_), deg(cap_ + 1) {
    for (unsigned n = 0; n <= cap_; ++n) deg[n].assign(std::size_t{1} << n, Rat(0));
  }
};

// Product of two constant-term-free series, truncated at the common cap.
WordSeries mul_trunc(const WordSeries& a, const WordSeries& b) {
  WordSeries out(a.cap);
  for (unsigned da = 1; da < a.cap; ++da)
    for (std::uint32_t wa = 0; wa < (std::uint32_t{1} << da); ++wa) {
      const Rat& ca = a.deg[da][wa];
      if (ca == 0) continue;
      for (unsigned db = 1; da + db <= a.cap; ++db)
        for (std::uint32_t wb = 0; wb < (std::uint32_t{1} << db); ++wb) {
          const Rat& cb = b.deg[db][wb];
          if (cb == 0) continue;
          out.deg[da + db][wa | (wb << da)] += ca * cb;
        }
    }
  return out;
}

// log(exp(X) exp(Y)) in the free associative algebra through total degree cap.
WordSeries assoc_log(unsigned cap) {
  std::vector<Rat> fact(cap + 1, Rat(1));
  for (unsigned i = 1; i <= cap; ++i) fact[i] = fact[i - 1] * i;
  WordSeries P(cap); // exp(X) exp(Y) - 1
  for (unsigned i = 0; i <= cap; ++i)
    for (unsigned j = 0; i + j <= cap; ++j) {
      if (i + j == 0) continue;
      const std::uint32_t bits = ((std::uint32_t{1} << j) - 1) << i;
      P.deg[i + j][bits] = Rat(1) / (fact[i] * fact[j]);
    }
  WordSeries H(cap);
  WordSeries Q = P;
  for (unsigned n = 1; n <= cap; ++n) {
    if (n > 1) Q = mul_trunc(Q, P);
    const Rat coef = Rat(n % 2 == 1 ? 1 : -1, n);
    for (unsigned d = n; d <= cap; ++d)
      for (std::uint32_t w = 0; w < (std::uint32_t{1} << d); ++w)
        if (Q.deg[d][w] != 0) H.deg[d][w] += coef * Q.deg[d][w];
  }
  return H;
}

const WordSeries& cached_assoc_log(unsigned cap) {
  static std::mutex mu;
  static std::map<unsigned, WordSeries> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(cap);
  if (it == cache.end()) it = cache.emplace(cap, assoc_log(cap)).first;
  return it->second;
}

} // namespace

std::vector<QVec> bch_degree_terms(const PowerfulLieLattice& L, const QVec& X, const QVec& Y,
                                   unsigned degree_cap) {
  if (L.p == 2) throw ValidationError("bch: p = 2 unsupported");
  if (degree_cap < 1) throw ValidationError("bch: degree cap must be positive");
  if (degree_cap > 14) throw ResourceError("bch: degree cap above 14");
  if (X.size() != L.rank || Y.size() != L.rank) throw ValidationError("bch: wrong vector length");
  for (const auto& v : {X, Y})
    for (const auto& x : v)
      if (denominator(x) % L.p == 0)
        throw ValidationError("bch: input coordinate is not p-integral");

  // exact rational lift of the structure constants
  std::vector<std::vector<QVec>> cq(L.rank, std::vector<QVec>(L.rank, QVec(L.rank, Rat(0))));
  for (std::size_t i = 0; i < L.rank; ++i)
    for (std::size_t j = 0; j < L.rank; ++j)
      for (std::size_t m = 0; m < L.rank; ++m) {
        const TruncatedPadic& x = L.c[i][j][m];
        if (!x.is_exact())
          throw PrecisionError("bch: structure constants must be exact");
        cq[i][j][m] = Rat(x.exact_value());
      }

  auto qbracket = [&](const QVec& u, const QVec& v) {
    QVec w(L.rank, Rat(0));
    for (std::size_t i = 0; i < L.rank; ++i)
      for (std::size_t j = i + 1; j < L.rank; ++j) {
        const Rat d = u[i] * v[j] - u[j] * v[i];
        if (d == 0) continue;
        for (std::size_t m = 0; m < L.rank; ++m)
          if (cq[i][j][m] != 0) w[m] += d * cq[i][j][m];
      }
    return w;
  };

  const WordSeries& H = cached_assoc_log(degree_cap);
  std::vector<QVec> terms;
  for (unsigned n = 1; n <= degree_cap; ++n) {
    QVec zn(L.rank, Rat(0));
    for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << n); ++bits) {
      const Rat& coef = H.deg[n][bits];
      if (coef == 0) continue;
      // right-nested bracket of the word, Dynkin projection weight 1/n
      QVec acc = ((bits >> (n - 1)) & 1) ? Y : X;
      for (unsigned t = n - 1; t-- > 0;) acc = qbracket(((bits >> t) & 1) ? Y : X, acc);
      const Rat w = coef / n;
      for (std::size_t m = 0; m < L.rank; ++m)
        if (acc[m] != 0) zn[m] += w * acc[m];
    }
    for (const auto& x : zn)
      if (denominator(x) % L.p == 0)
        throw TruncationUnstable("bch: retained term is not p-integral");
    terms.push_back(std::move(zn));
  }
  return terms;
}

QVec bch_rational(const PowerfulLieLattice& L, const QVec& X, const QVec& Y,
                  unsigned degree_cap) {
  const auto terms = bch_degree_terms(L, X, Y, degree_cap);
  QVec z(L.rank, Rat(0));
  for (const auto& t : terms)
    for (std::size_t m = 0; m < L.rank; ++m) z[m] += t[m];
  return z;
}

std::vector<TruncatedPadic> bch_multiply(const PowerfulLieLattice& L,
                                         const std::vector<TruncatedPadic>& X,
                                         const std::vector<TruncatedPadic>& Y, BchOptions opts) {
  L.validate();
  if (L.p == 2) throw ValidationError("bch_multiply: p = 2 unsupported");
  if (X.size() != L.rank || Y.size() != L.rank)
    throw ValidationError("bch_multiply: wrong vector length");
  for (const auto* v : {&X, &Y})
    for (const auto& x : *v) {
      if (x.p() != L.p || x.k() != L.precision)
        throw ValidationError("bch_multiply: mixed moduli");
      if (!x.is_exact()) throw PrecisionError("bch_multiply: coordinates must be exact");
    }
  const auto all_zero = [](const std::vector<TruncatedPadic>& v) {
    for (const auto& x : v)
      if (!x.is_exact_zero()) return false;
    return true;
  };
  if (all_zero(Y)) return X;
  if (all_zero(X)) return Y;
  bool abelian = true;
  for (const auto& row : L.c)
    for (const auto& v : row)
      for (const auto& x : v)
        if (!x.is_exact_zero()) abelian = false;
  if (abelian) {
    std::vector<TruncatedPadic> z;
    for (std::size_t m = 0; m < L.rank; ++m) z.push_back(X[m] + Y[m]);
    return z;
  }

  const unsigned D = opts.degree_cap ? opts.degree_cap : L.precision + 3;
  QVec xq, yq;
  for (const auto& x : X) xq.emplace_back(x.exact_value());
  for (const auto& y : Y) yq.emplace_back(y.exact_value());
  const auto terms = bch_degree_terms(L, xq, yq, D + 1);
  QVec z(L.rank, Rat(0));
  for (unsigned n = 1; n <= D; ++n)
    for (std::size_t m = 0; m < L.rank; ++m) z[m] += terms[n - 1][m];
  for (const auto& x : terms[D])
    if (rat_residue(x, L.p, L.precision) != 0)
      throw TruncationUnstable("bch_multiply: result moved between degree caps D and D+1");
  std::vector<TruncatedPadic> out;
  for (std::size_t m = 0; m < L.rank; ++m)
    out.push_back(TruncatedPadic::from_residue(
        L.p, L.precision, static_cast<long long>(rat_residue(z[m], L.p, L.precision))));
  return out;
}

EdgeRelation solve_edge_relation(const PowerfulLieLattice& L, std::size_t i, std::size_t j,
                                 BchOptions opts) {
  L.validate();
  if (L.p == 2) throw ValidationError("solve_edge_relation: p = 2 unsupported");
  if (i == j || i >= L.rank || j >= L.rank)
    throw ValidationError("solve_edge_relation: bad basis pair");
  for (std::size_t m = 0; m < L.rank; ++m) {
    if (m == i || m == j) continue;
    const auto d = L.c[i][j][m].decide_zero();
    if (d && !*d)
      throw ValidationError("solve_edge_relation: the pair does not span a bracket-closed sublattice");
    if (!d)
      throw PrecisionError("solve_edge_relation: bracket closure undecidable at precision");
  }
  const TruncatedPadic& ca = L.c[i][j][i];
  const TruncatedPadic& cb = L.c[i][j][j];
  if (!ca.is_exact() || !cb.is_exact())
    throw PrecisionError("solve_edge_relation: bracket coefficients must be exact");

  auto S = PowerfulLieLattice::abelian(L.p, L.precision, 2);
  S.set_pair(0, 1, {ca, cb});
  const std::uint64_t pk = padic_modulus(L.p, L.precision);
  const unsigned D = opts.degree_cap ? opts.degree_cap : L.precision + 3;

  auto run = [&](unsigned cap) -> std::pair<std::uint64_t, std::uint64_t> {
    const QVec X = {Rat(1), Rat(0)}, Yv = {Rat(0), Rat(1)};
    const QVec nX = {Rat(-1), Rat(0)}, nY = {Rat(0), Rat(-1)};
    const QVec w1 = bch_rational(S, nX, nY, cap);
    const QVec w2 = bch_rational(S, w1, X, cap);
    const QVec w3 = bch_rational(S, w2, Yv, cap);
    std::uint64_t a = 0, b = 0;
    bool solved = false;
    for (unsigned iter = 0; iter <= L.precision + 1; ++iter) {
      const QVec g = bch_rational(S, {Rat(a), Rat(0)}, {Rat(0), Rat(b)}, cap);
      const std::uint64_t rx = rat_residue(g[0] - w3[0], L.p, L.precision);
      const std::uint64_t ry = rat_residue(g[1] - w3[1], L.p, L.precision);
      if (rx == 0 && ry == 0) {
        solved = true;
        break;
      }
      a = sub_mod(a, rx, pk);
      b = sub_mod(b, ry, pk);
    }
    if (!solved)
      throw std::logic_error("solve_edge_relation: digit solve failed (internal inconsistency)");
    return {a, b};
  };

  const auto r1 = run(D);
  const auto r2 = run(D + 1);
  if (r1 != r2)
    throw TruncationUnstable("solve_edge_relation: result moved between degree caps D and D+1");
  if (r1.first % L.p != 0 || r1.second % L.p != 0)
    throw std::logic_error("solve_edge_relation: exponents escape pZp (internal inconsistency)");

  // congruence with the bracket coefficients at the provable precision
  const long long av = ca.exact_value(), bv = cb.exact_value();
  if (av != 0 || bv != 0) {
    unsigned vmin = L.precision;
    if (av != 0) vmin = std::min(vmin, int_valuation(L.p, av));
    if (bv != 0) vmin = std::min(vmin, int_valuation(L.p, bv));
    const unsigned mm = std::min(L.precision, vmin + 1);
    const std::uint64_t pm = padic_modulus(L.p, mm);
    if (r1.first % pm != residue_mod(av, pm) || r1.second % pm != residue_mod(bv, pm))
      throw std::logic_error(
          "solve_edge_relation: exponents disagree with the bracket coefficients "
          "(internal inconsistency)");
  }

  EdgeRelation rel;
  rel.a = (ca.is_exact_zero() && r1.first == 0)
              ? TruncatedPadic::exact_zero(L.p, L.precision)
              : TruncatedPadic::from_residue(L.p, L.precision, static_cast<long long>(r1.first));
  rel.b = (cb.is_exact_zero() && r1.second == 0)
              ? TruncatedPadic::exact_zero(L.p, L.precision)
              : TruncatedPadic::from_residue(L.p, L.precision, static_cast<long long>(r1.second));
  return rel;
}

} // namespace praag
