#include "praag/assembler.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace praag {

namespace {

// Residue of a dense degree-2 tensor modulo the relation span. Omega rows are
// a reduced echelon basis (leading coefficient 1, pivots absent from the
// other rows), so one sweep clears every pivot coordinate.
std::vector<std::uint64_t> reduce_mod_omega(const QuadraticAlgebra& a,
                                            std::vector<std::uint64_t> v) {
  for (const auto& row : a.omega) {
    const std::uint64_t c = v[row.front().first];
    if (c == 0) continue;
    for (const auto& [idx, coef] : row) v[idx] = sub_mod(v[idx], mul_mod(c, coef, a.p), a.p);
  }
  return v;
}

// Degree-2 component of a quadratic algebra: tensor coordinates that are not
// pivots of the relation basis form a basis of the quotient.
struct Deg2Quotient {
  const QuadraticAlgebra* a;
  std::vector<std::uint32_t> basis; // non-pivot tensor indices, increasing

  explicit Deg2Quotient(const QuadraticAlgebra& alg) : a(&alg) {
    const std::size_t d = alg.generators.size();
    std::vector<bool> pivot(d * d, false);
    for (const auto& row : alg.omega) pivot[row.front().first] = true;
    for (std::uint32_t t = 0; t < d * d; ++t)
      if (!pivot[t]) basis.push_back(t);
  }

  std::size_t dim() const { return basis.size(); }

  std::vector<std::uint64_t> coords(std::vector<std::uint64_t> v) const {
    v = reduce_mod_omega(*a, std::move(v));
    std::vector<std::uint64_t> out(basis.size(), 0);
    for (std::size_t s = 0; s < basis.size(); ++s) out[s] = v[basis[s]];
    return out;
  }

  bool vanishes(std::vector<std::uint64_t> v) const {
    v = reduce_mod_omega(*a, std::move(v));
    return std::all_of(v.begin(), v.end(), [](std::uint64_t c) { return c == 0; });
  }

  // "x y" or "c x y" rendering of a quotient-coordinate vector.
  std::string monomial_string(const std::vector<std::uint64_t>& coords) const {
    const std::size_t d = a->generators.size();
    std::ostringstream out;
    bool first = true;
    for (std::size_t s = 0; s < coords.size(); ++s) {
      if (coords[s] == 0) continue;
      if (!first) out << " + ";
      first = false;
      if (coords[s] != 1) out << coords[s] << " ";
      out << a->generators[basis[s] / d] << " " << a->generators[basis[s] % d];
    }
    if (first) out << "0";
    return out.str();
  }
};

FpMatrix rows_matrix(std::uint64_t p, const std::vector<std::vector<std::uint64_t>>& rows,
                     std::size_t cols) {
  FpMatrix m(p, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j] % p;
  return m;
}

// Dense tensor image of e_{g1} (x) e_{g2} under the degree-1 map, in the
// subgroup's tensor coordinates.
std::vector<std::uint64_t> tensor_image(const FpMatrix& res1, std::size_t g1, std::size_t g2) {
  const std::size_t dh = res1.rows;
  std::vector<std::uint64_t> u(dh * dh, 0);
  for (std::size_t a = 0; a < dh; ++a) {
    if (res1.at(a, g1) == 0) continue;
    for (std::size_t b = 0; b < dh; ++b)
      u[a * dh + b] = mul_mod(res1.at(a, g1), res1.at(b, g2), res1.p);
  }
  return u;
}

// Matrix of the induced degree-2 map on the quadratic quotients; throws when
// the ambient relations do not map into the subgroup's relation span (the
// degree-1 map then induces no map of quadratic algebras at all).
FpMatrix induced_deg2(const RestrictionData& d, const Deg2Quotient& qg, const Deg2Quotient& qh) {
  const std::size_t dg = d.ambient.generators.size();
  const std::size_t dh = d.sub.generators.size();
  const std::uint64_t p = d.res1.p;
  for (const auto& row : d.ambient.omega) {
    std::vector<std::uint64_t> u(dh * dh, 0);
    for (const auto& [idx, c] : row) {
      const auto t = tensor_image(d.res1, idx / dg, idx % dg);
      for (std::size_t k = 0; k < u.size(); ++k)
        u[k] = add_mod(u[k], mul_mod(c, t[k], p), p);
    }
    if (!qh.vanishes(std::move(u)))
      throw ValidationError(
          "restriction data: ambient relations do not map into the subgroup's relation span");
  }
  FpMatrix r(p, qh.dim(), qg.dim());
  for (std::size_t k = 0; k < qg.dim(); ++k) {
    const auto coords = qh.coords(tensor_image(d.res1, qg.basis[k] / dg, qg.basis[k] % dg));
    for (std::size_t h = 0; h < coords.size(); ++h) r.at(h, k) = coords[h];
  }
  return r;
}

std::vector<std::vector<std::uint64_t>> wedge_span(const RestrictionData& d,
                                                   const Deg2Quotient& qg) {
  const std::size_t dg = d.ambient.generators.size();
  std::vector<std::vector<std::uint64_t>> span;
  for (const auto& v : fp_kernel_basis(d.res1)) {
    for (std::size_t j = 0; j < dg; ++j) {
      std::vector<std::uint64_t> left(dg * dg, 0), right(dg * dg, 0);
      for (std::size_t a = 0; a < dg; ++a) {
        left[a * dg + j] = v[a];
        right[j * dg + a] = v[a];
      }
      span.push_back(qg.coords(std::move(left)));
      span.push_back(qg.coords(std::move(right)));
    }
  }
  return span;
}

ConditionCheck combine_factors(const ConditionCheck& a, const ConditionCheck& b) {
  ConditionCheck out;
  out.holds = a.holds && b.holds;
  out.witness = "factor 1: " + a.witness + "; factor 2: " + b.witness;
  return out;
}

void require_common_subgroup(const RestrictionData& d1, const RestrictionData& d2) {
  if (d1.sub.p != d2.sub.p || d1.sub.generators != d2.sub.generators ||
      d1.sub.omega != d2.sub.omega)
    throw ValidationError("amalgam: the two factors disagree on the common subgroup");
}

// One factor of an amalgam: the kernel of the degree-1 map (in free-variable
// form, one basis vector per free column) and the change of basis splitting
// the factor's degree-1 part as kernel + section of the subgroup.
struct FactorSplit {
  std::vector<std::vector<std::uint64_t>> kernel;
  std::vector<std::size_t> free_cols;
  FpMatrix phi; // (kernel.size() + dh) x dg: kernel coordinates, then res1
  std::vector<std::string> names;

  explicit FactorSplit(const RestrictionData& d) {
    const std::size_t dg = d.ambient.generators.size();
    const std::size_t dh = d.sub.generators.size();
    const std::uint64_t p = d.res1.p;
    kernel = fp_kernel_basis(d.res1);
    const RrefResult rr = fp_rref(d.res1);
    std::vector<bool> is_pivot(dg, false);
    for (const std::size_t c : rr.pivot_cols) is_pivot[c] = true;
    for (std::size_t f = 0; f < dg; ++f)
      if (!is_pivot[f]) free_cols.push_back(f);

    // Section: column h solves res1 * s = e_h (exists once the degree-1 map
    // is onto).
    FpMatrix section(p, dg, dh);
    for (std::size_t h = 0; h < dh; ++h) {
      std::vector<std::uint64_t> e(dh, 0);
      e[h] = 1;
      const auto s = fp_solve(d.res1, e);
      if (!s) throw HypothesesNotSatisfied("amalgam: degree-1 restriction is not surjective");
      for (std::size_t g = 0; g < dg; ++g) section.at(g, h) = (*s)[g];
    }

    // x  ->  (x - s(res x)) + s(res x); the kernel summand is read off at the
    // free columns because the kernel basis is in free-variable form.
    phi = FpMatrix(p, kernel.size() + dh, dg);
    for (std::size_t g = 0; g < dg; ++g) {
      std::vector<std::uint64_t> k(dg, 0);
      k[g] = 1;
      for (std::size_t a = 0; a < dg; ++a)
        for (std::size_t h = 0; h < dh; ++h)
          k[a] = sub_mod(k[a], mul_mod(section.at(a, h), d.res1.at(h, g), p), p);
      for (std::size_t f = 0; f < free_cols.size(); ++f) phi.at(f, g) = k[free_cols[f]];
      for (std::size_t h = 0; h < dh; ++h) phi.at(free_cols.size() + h, g) = d.res1.at(h, g);
    }

    for (std::size_t f = 0; f < free_cols.size(); ++f) {
      std::size_t support = 0;
      for (const auto c : kernel[f]) support += c != 0;
      std::string base = d.ambient.generators[free_cols[f]];
      if (support != 1) base += "~";
      names.push_back(std::move(base));
    }
  }

  // Transport of a factor relation into the assembled tensor coordinates.
  // Kernel rows land at voff + r, subgroup rows at woff + (r - kernel.size()).
  SparseVec transport(const SparseVec& row, std::size_t voff, std::size_t woff,
                      std::size_t m) const {
    const std::size_t dg = phi.cols;
    const std::uint64_t p = phi.p;
    auto slot = [&](std::size_t r) { return r < kernel.size() ? voff + r : woff + (r - kernel.size()); };
    std::vector<std::uint64_t> dense(m * m, 0);
    for (const auto& [idx, c] : row) {
      const std::size_t i = idx / dg, j = idx % dg;
      for (std::size_t a = 0; a < phi.rows; ++a) {
        if (phi.at(a, i) == 0) continue;
        const std::uint64_t ca = mul_mod(c, phi.at(a, i), p);
        for (std::size_t b = 0; b < phi.rows; ++b) {
          if (phi.at(b, j) == 0) continue;
          const std::size_t t = slot(a) * m + slot(b);
          dense[t] = add_mod(dense[t], mul_mod(ca, phi.at(b, j), p), p);
        }
      }
    }
    SparseVec out;
    for (std::uint32_t t = 0; t < dense.size(); ++t)
      if (dense[t]) out.push_back({t, dense[t]});
    return out;
  }
};

bool is_coordinate_projection(const FpMatrix& m) {
  std::set<std::size_t> used;
  for (std::size_t r = 0; r < m.rows; ++r) {
    std::size_t hits = 0, col = 0;
    for (std::size_t c = 0; c < m.cols; ++c)
      if (m.at(r, c) != 0) {
        ++hits;
        col = c;
        if (m.at(r, c) != 1) return false;
      }
    if (hits != 1 || !used.insert(col).second) return false;
  }
  return true;
}

bool is_exterior(const QuadraticAlgebra& a) {
  // Normalized relation bases are canonical per subspace, so equality of the
  // spans is equality of the stored rows.
  return a.omega == exterior_algebra(a.p, a.generators).omega;
}

std::string vector_string(const std::vector<std::uint64_t>& v) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << ")";
  return out.str();
}

} // namespace

void RestrictionData::validate() const {
  if (ambient.p != sub.p) throw ValidationError("restriction data: mixed characteristics");
  if (res1.p != ambient.p) throw ValidationError("restriction data: matrix characteristic");
  if (res1.rows != sub.generators.size() || res1.cols != ambient.generators.size())
    throw ValidationError("restriction data: degree-1 map has wrong shape");
  for (const auto e : res1.data)
    if (e >= res1.p) throw ValidationError("restriction data: entries must be reduced mod p");
}

std::pair<ConditionCheck, ConditionCheck> check_restriction_conditions(const RestrictionData& d) {
  d.validate();
  const std::size_t dh = d.sub.generators.size();
  const std::size_t rank1 = fp_rank(d.res1);

  ConditionCheck ci;
  ci.holds = rank1 == dh;
  {
    std::ostringstream w;
    w << "rank(res^1) = " << rank1 << (ci.holds ? " = " : " < ") << "dim H^1 of the subgroup = "
      << dh;
    ci.witness = w.str();
  }

  const Deg2Quotient qg(d.ambient), qh(d.sub);
  const FpMatrix r2 = induced_deg2(d, qg, qh);
  const auto ker2 = fp_kernel_basis(r2);
  const auto wedge = wedge_span(d, qg);
  const std::size_t wedge_rank = fp_rank(rows_matrix(d.res1.p, wedge, qg.dim()));

  ConditionCheck cii;
  // ker(res^1) ^ H^1 always sits inside ker(res^2); equality is a rank count.
  cii.holds = wedge_rank == ker2.size();
  if (cii.holds) {
    std::ostringstream w;
    w << "ker(res^2) = ker(res^1) ^ H^1, dimension " << ker2.size();
    cii.witness = w.str();
  } else {
    auto stacked = wedge;
    std::string culprit;
    for (const auto& v : ker2) {
      stacked.push_back(v);
      if (fp_rank(rows_matrix(d.res1.p, stacked, qg.dim())) > wedge_rank) {
        culprit = qg.monomial_string(v);
        break;
      }
      stacked.pop_back();
    }
    std::ostringstream w;
    w << "ker(res^2) has dimension " << ker2.size() << " but ker(res^1) ^ H^1 only " << wedge_rank;
    if (!culprit.empty()) w << "; " << culprit << " restricts to zero without being a wedge";
    cii.witness = w.str();
  }
  return {ci, cii};
}

std::pair<ConditionCheck, ConditionCheck> check_amalgam_hypotheses(const RestrictionData& d1,
                                                                   const RestrictionData& d2) {
  require_common_subgroup(d1, d2);
  const auto [i1, ii1] = check_restriction_conditions(d1);
  const auto [i2, ii2] = check_restriction_conditions(d2);
  return {combine_factors(i1, i2), combine_factors(ii1, ii2)};
}

QuadraticAlgebra amalgam_cohomology(const RestrictionData& d1, const RestrictionData& d2) {
  const auto [ci, cii] = check_amalgam_hypotheses(d1, d2);
  if (!ci.holds) throw HypothesesNotSatisfied("amalgam: degree-1 surjectivity fails (" + ci.witness + ")");
  if (!cii.holds)
    throw HypothesesNotSatisfied("amalgam: degree-2 kernel condition fails (" + cii.witness + ")");

  const std::uint64_t p = d1.sub.p;
  const std::size_t dh = d1.sub.generators.size();
  const FactorSplit f1(d1), f2(d2);
  const std::size_t v1 = f1.kernel.size(), v2 = f2.kernel.size();
  const std::size_t m = v1 + dh + v2;
  const std::size_t woff = v1, v2off = v1 + dh;

  std::vector<std::string> gens;
  gens.insert(gens.end(), f1.names.begin(), f1.names.end());
  gens.insert(gens.end(), d1.sub.generators.begin(), d1.sub.generators.end());
  gens.insert(gens.end(), f2.names.begin(), f2.names.end());
  {
    std::set<std::string> seen(gens.begin(), gens.end());
    if (seen.size() != gens.size()) {
      gens.clear();
      for (const auto& n : f1.names) gens.push_back("g1:" + n);
      for (const auto& n : d1.sub.generators) gens.push_back("h:" + n);
      for (const auto& n : f2.names) gens.push_back("g2:" + n);
    }
  }

  std::vector<SparseVec> omega;
  for (const auto& row : d1.ambient.omega) omega.push_back(f1.transport(row, 0, woff, m));
  for (const auto& row : d2.ambient.omega) omega.push_back(f2.transport(row, v2off, woff, m));
  for (const auto& row : d1.sub.omega) {
    SparseVec shifted;
    for (const auto& [idx, c] : row) {
      const std::size_t a = idx / dh, b = idx % dh;
      shifted.push_back({static_cast<std::uint32_t>((woff + a) * m + (woff + b)), c});
    }
    omega.push_back(std::move(shifted));
  }
  for (std::size_t a = 0; a < v1; ++a)
    for (std::size_t b = 0; b < v2; ++b) {
      omega.push_back({{static_cast<std::uint32_t>(a * m + (v2off + b)), 1}});
      omega.push_back({{static_cast<std::uint32_t>((v2off + b) * m + a), 1}});
    }

  return QuadraticAlgebra(p, std::move(gens), std::move(omega));
}

std::vector<long long> mayer_vietoris_dims(const RestrictionData& d1, const RestrictionData& d2,
                                           std::size_t n) {
  const auto [ci, cii] = check_amalgam_hypotheses(d1, d2);
  if (!ci.holds || !cii.holds)
    throw HypothesesNotSatisfied("amalgam: hypotheses fail, no Mayer-Vietoris bookkeeping");

  const auto k1 = fp_kernel_basis(d1.res1);
  const auto k2 = fp_kernel_basis(d2.res1);
  HilbertEngine e1(d1.ambient), e2(d2.ambient);
  const auto hdims = hilbert_dims(d1.sub, n);

  std::vector<long long> dims(n + 1, 0);
  dims[0] = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    if (k == 1) {
      dims[k] = static_cast<long long>(k1.size() + k2.size()) + hdims[1];
      continue;
    }
    const long long w1 = k1.empty() ? 0 : static_cast<long long>(e1.product_subspace_dim(k1, k));
    const long long w2 = k2.empty() ? 0 : static_cast<long long>(e2.product_subspace_dim(k2, k));
    dims[k] = w1 + w2 + hdims[k];
  }
  return dims;
}

const char* to_string(Properness p) {
  switch (p) {
    case Properness::ProCyclic: return "proper (subgroup is pro-cyclic or trivial)";
    case Properness::Mirrored: return "proper (mirrored factors)";
    case Properness::CompleteSeparator: return "proper (uniform factors along a complete separator)";
    case Properness::Assumed: return "assumed proper (caller acknowledgment)";
    case Properness::Unknown: return "properness unknown";
  }
  return "properness unknown";
}

Properness recognize_amalgam_properness(const RestrictionData& d1, const RestrictionData& d2) {
  require_common_subgroup(d1, d2);
  if (d1.sub.generators.size() <= 1) return Properness::ProCyclic;
  if (d1.ambient.p == d2.ambient.p && d1.ambient.generators == d2.ambient.generators &&
      d1.ambient.omega == d2.ambient.omega && d1.res1.rows == d2.res1.rows &&
      d1.res1.cols == d2.res1.cols && d1.res1.data == d2.res1.data)
    return Properness::Mirrored;
  if (is_exterior(d1.ambient) && is_exterior(d2.ambient) && is_exterior(d1.sub) &&
      is_coordinate_projection(d1.res1) && is_coordinate_projection(d2.res1))
    return Properness::CompleteSeparator;
  return Properness::Unknown;
}

AmalgamReport amalgam_report(const RestrictionData& d1, const RestrictionData& d2, std::size_t n,
                             bool assume_proper) {
  AmalgamReport rep;
  std::tie(rep.condition_i, rep.condition_ii) = check_amalgam_hypotheses(d1, d2);
  rep.properness = recognize_amalgam_properness(d1, d2);
  if (rep.properness == Properness::Unknown && assume_proper) rep.properness = Properness::Assumed;
  if (rep.condition_i.holds && rep.condition_ii.holds) {
    rep.assembled = amalgam_cohomology(d1, d2);
    rep.dims = hilbert_dims(*rep.assembled, n);
    rep.mayer_vietoris = mayer_vietoris_dims(d1, d2, n);
  }
  return rep;
}

// ---- HNN extensions ---------------------------------------------------------------

std::vector<std::uint64_t> word_exponents_mod_p(const std::string& word,
                                                const std::vector<std::string>& generators,
                                                std::uint64_t p) {
  std::vector<std::uint64_t> out(generators.size(), 0);
  std::istringstream in(word);
  std::string token;
  while (in >> token) {
    std::string name = token;
    long long exp = 1;
    if (const auto caret = token.find('^'); caret != std::string::npos) {
      name = token.substr(0, caret);
      const std::string tail = token.substr(caret + 1);
      try {
        std::size_t used = 0;
        exp = std::stoll(tail, &used);
        if (used != tail.size()) throw std::invalid_argument(tail);
      } catch (const std::exception&) {
        throw ValidationError("word: malformed exponent in \"" + token + "\"");
      }
    }
    const auto it = std::find(generators.begin(), generators.end(), name);
    if (it == generators.end()) throw ValidationError("word: unknown generator \"" + name + "\"");
    const std::size_t g = static_cast<std::size_t>(it - generators.begin());
    out[g] = add_mod(out[g], residue_mod(exp, p), p);
  }
  return out;
}

HnnConditions check_hnn_hypotheses(const RestrictionData& d, const std::vector<std::string>& phi) {
  HnnConditions out;
  std::tie(out.condition_i, out.condition_ii) = check_restriction_conditions(d);
  const std::size_t da = d.sub.generators.size();
  if (phi.size() != da)
    throw ValidationError("hnn: expected one image word per subgroup generator");
  out.condition_iii.holds = true;
  for (std::size_t h = 0; h < da; ++h) {
    const auto ev = word_exponents_mod_p(phi[h], d.ambient.generators, d.res1.p);
    std::vector<std::uint64_t> expected(d.res1.cols, 0);
    for (std::size_t g = 0; g < d.res1.cols; ++g) expected[g] = d.res1.at(h, g);
    if (ev != expected) {
      out.condition_iii.holds = false;
      out.condition_iii.witness = "phi(" + d.sub.generators[h] + ") = \"" + phi[h] +
                                  "\" has exponent vector " + vector_string(ev) +
                                  " mod p, expected " + vector_string(expected);
      break;
    }
  }
  if (out.condition_iii.holds)
    out.condition_iii.witness =
        "every phi image agrees with its generator modulo the second filtration step";
  return out;
}

std::vector<long long> hnn_cohomology(const RestrictionData& d, const std::vector<std::string>& phi,
                                      std::size_t n) {
  const HnnConditions c = check_hnn_hypotheses(d, phi);
  if (!c.all()) {
    const ConditionCheck& bad = !c.condition_i.holds    ? c.condition_i
                                : !c.condition_ii.holds ? c.condition_ii
                                                        : c.condition_iii;
    throw HypothesesNotSatisfied("hnn: " + bad.witness);
  }
  const auto g0 = hilbert_dims(d.ambient, n);
  const auto a = hilbert_dims(d.sub, n);
  std::vector<long long> dims(n + 1, 0);
  dims[0] = 1;
  for (std::size_t k = 1; k <= n; ++k) dims[k] = g0[k] + a[k - 1];
  return dims;
}

HnnReport hnn_report(const RestrictionData& d, const std::vector<std::string>& phi, std::size_t n,
                     bool assume_proper) {
  HnnReport rep;
  rep.conditions = check_hnn_hypotheses(d, phi);
  rep.properness = assume_proper ? Properness::Assumed : Properness::Unknown;
  rep.alpha_t = "alpha_t";
  if (rep.conditions.all()) rep.dims = hnn_cohomology(d, phi, n);
  return rep;
}

// ---- Fixture files -----------------------------------------------------------------

namespace {

using nlohmann::json;

QuadraticAlgebra parse_algebra(const json& j, std::uint64_t p) {
  const auto gens = j.at("generators").get<std::vector<std::string>>();
  const std::size_t d = gens.size();
  std::vector<SparseVec> omega;
  for (const auto& row : j.at("omega")) {
    if (row.size() != d * d)
      throw ValidationError("fixture: omega rows must have d^2 entries");
    SparseVec v;
    for (std::size_t k = 0; k < d * d; ++k) {
      const std::uint64_t c = residue_mod(row.at(k).get<long long>(), p);
      if (c) v.push_back({static_cast<std::uint32_t>(k), c});
    }
    omega.push_back(std::move(v));
  }
  return QuadraticAlgebra(p, gens, std::move(omega));
}

FpMatrix parse_map(const json& j, std::uint64_t p, std::size_t rows, std::size_t cols) {
  FpMatrix m(p, rows, cols);
  const auto& data = j.at("res");
  if (data.size() != rows) throw ValidationError("fixture: res must have one row per subgroup generator");
  for (std::size_t r = 0; r < rows; ++r) {
    if (data.at(r).size() != cols)
      throw ValidationError("fixture: res rows must have one entry per ambient generator");
    for (std::size_t c = 0; c < cols; ++c)
      m.at(r, c) = residue_mod(data.at(r).at(c).get<long long>(), p);
  }
  return m;
}

json parse_file(const std::string& path, const char* want) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open fixture: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("fixture " + path + ": " + e.what());
  }
  if (j.value("type", "") != want)
    throw ValidationError("fixture " + path + ": expected type \"" + want + "\"");
  return j;
}

} // namespace

AmalgamFixture load_amalgam_fixture(const std::string& path) {
  const json j = parse_file(path, "amalgam");
  try {
    const std::uint64_t p = j.at("p").get<std::uint64_t>();
    const QuadraticAlgebra h = parse_algebra(j.at("h"), p);
    AmalgamFixture out{{parse_algebra(j.at("g1"), p), h, {}},
                       {parse_algebra(j.at("g2"), p), h, {}}};
    out.d1.res1 = parse_map(j.at("g1"), p, h.generators.size(), out.d1.ambient.generators.size());
    out.d2.res1 = parse_map(j.at("g2"), p, h.generators.size(), out.d2.ambient.generators.size());
    out.d1.validate();
    out.d2.validate();
    return out;
  } catch (const json::exception& e) {
    throw ValidationError("fixture " + path + ": " + e.what());
  }
}

HnnFixture load_hnn_fixture(const std::string& path) {
  const json j = parse_file(path, "hnn");
  try {
    const std::uint64_t p = j.at("p").get<std::uint64_t>();
    const QuadraticAlgebra a = parse_algebra(j.at("a"), p);
    HnnFixture out{{parse_algebra(j.at("g0"), p), a, {}},
                   j.at("phi").get<std::vector<std::string>>()};
    out.d.res1 = parse_map(j.at("g0"), p, a.generators.size(), out.d.ambient.generators.size());
    out.d.validate();
    return out;
  } catch (const json::exception& e) {
    throw ValidationError("fixture " + path + ": " + e.what());
  }
}

// ---- Chordal pipeline -----------------------------------------------------------------

namespace {

std::string cycle_string(const Graph& g, const std::vector<std::size_t>& cycle) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < cycle.size(); ++i) out << (i ? ", " : "") << g.vertices[cycle[i]];
  out << ")";
  return out.str();
}

// Proof node over a clique: uniform vertex groups have exterior cohomology.
std::unique_ptr<ChordalProofNode> clique_leaf(const PGraph& g,
                                              const std::vector<std::size_t>& ambient) {
  auto node = std::make_unique<ChordalProofNode>();
  node->leaf = true;
  node->vertices = ambient;
  std::vector<std::string> names;
  for (const std::size_t v : ambient) names.push_back(g.graph.vertices[v]);
  node->algebra = exterior_algebra(g.p, std::move(names));
  node->dims = hilbert_dims(node->algebra, ambient.size());
  return node;
}

RestrictionData separator_restriction(const ChordalProofNode& child,
                                      const QuadraticAlgebra& sep_alg,
                                      const std::vector<std::string>& sep_names) {
  FpMatrix res(sep_alg.p, sep_names.size(), child.algebra.generators.size());
  for (std::size_t h = 0; h < sep_names.size(); ++h) {
    const auto it = std::find(child.algebra.generators.begin(), child.algebra.generators.end(),
                              sep_names[h]);
    if (it == child.algebra.generators.end())
      throw std::logic_error("chordal pipeline: separator vertex missing from a side");
    res.at(h, static_cast<std::size_t>(it - child.algebra.generators.begin())) = 1;
  }
  return {child.algebra, sep_alg, std::move(res)};
}

// Pastes the two children along the (complete) separator. The assembled
// generator order is left-without-separator, separator, right-without-
// separator, matching the amalgam layout, so the ambient vertex list can be
// kept aligned with the generator list.
std::unique_ptr<ChordalProofNode> paste_children(const PGraph& g,
                                                 std::unique_ptr<ChordalProofNode> left,
                                                 std::unique_ptr<ChordalProofNode> right,
                                                 const std::vector<std::size_t>& separator) {
  auto node = std::make_unique<ChordalProofNode>();
  node->leaf = false;
  node->separator = separator;
  std::vector<std::string> sep_names;
  for (const std::size_t v : separator) sep_names.push_back(g.graph.vertices[v]);
  const QuadraticAlgebra sep_alg = exterior_algebra(g.p, sep_names);
  const RestrictionData d1 = separator_restriction(*left, sep_alg, sep_names);
  const RestrictionData d2 = separator_restriction(*right, sep_alg, sep_names);
  node->algebra = amalgam_cohomology(d1, d2);

  auto without_separator = [&](const ChordalProofNode& c) {
    std::vector<std::size_t> out;
    for (const std::size_t v : c.vertices)
      if (std::find(separator.begin(), separator.end(), v) == separator.end()) out.push_back(v);
    return out;
  };
  const auto lo = without_separator(*left);
  const auto ro = without_separator(*right);
  node->vertices = lo;
  node->vertices.insert(node->vertices.end(), separator.begin(), separator.end());
  node->vertices.insert(node->vertices.end(), ro.begin(), ro.end());
  if (node->vertices.size() != node->algebra.generators.size())
    throw std::logic_error("chordal pipeline: generator bookkeeping out of step");

  node->dims = hilbert_dims(node->algebra, node->vertices.size());
  node->left = std::move(left);
  node->right = std::move(right);
  return node;
}

std::unique_ptr<ChordalProofNode> build_proof(const PGraph& g, const PastingNode& pn,
                                              const std::vector<std::size_t>& to_ambient) {
  auto remap = [&](const std::vector<std::size_t>& local) {
    std::vector<std::size_t> out;
    for (const std::size_t v : local) out.push_back(to_ambient[v]);
    return out;
  };
  if (pn.leaf) return clique_leaf(g, remap(pn.vertices));
  return paste_children(g, build_proof(g, *pn.left, to_ambient),
                        build_proof(g, *pn.right, to_ambient), remap(pn.separator));
}

} // namespace

ChordalPipelineResult chordal_pipeline(const PGraph& g, const CompletionSearch& search) {
  g.validate();
  if (g.graph.size() == 0) throw ValidationError("chordal pipeline: empty graph");

  const auto components = connected_components(g.graph);
  std::vector<std::unique_ptr<ChordalProofNode>> roots;
  for (const auto& comp : components) {
    const Graph sub = full_subgraph(g.graph, comp);
    const ChordalStructure cs = chordal_structure(sub);
    if (!cs.chordal) {
      std::vector<std::size_t> witness;
      for (const std::size_t v : cs.chordless_cycle) witness.push_back(comp[v]);
      throw NotChordal("chordless cycle " + cycle_string(g.graph, witness));
    }
    roots.push_back(build_proof(g, *cs.tree, comp));
  }

  // Degeneracy: the group must embed into a uniform group, i.e. the labels
  // must extend to a complete uniform p-graph.
  const CompletionOutcome out = completion_search(g, search);
  if (out.kind == CompletionOutcome::Kind::RefutedModPk)
    throw Degenerate("no uniform completion: " + out.note);
  if (out.kind == CompletionOutcome::Kind::Inconclusive)
    throw Degenerate("uniform completion not established: " + out.note);

  ChordalPipelineResult result;
  result.completed = *out.completed;

  // Disconnected inputs decompose as free products: amalgams over the
  // trivial subgroup.
  auto root = std::move(roots.front());
  const QuadraticAlgebra trivial(g.p, {}, {});
  for (std::size_t k = 1; k < roots.size(); ++k) {
    RestrictionData da{root->algebra, trivial, FpMatrix(g.p, 0, root->algebra.generators.size())};
    RestrictionData db{roots[k]->algebra, trivial,
                       FpMatrix(g.p, 0, roots[k]->algebra.generators.size())};
    auto fold = std::make_unique<ChordalProofNode>();
    fold->leaf = false;
    fold->algebra = amalgam_cohomology(da, db);
    fold->vertices = root->vertices;
    fold->vertices.insert(fold->vertices.end(), roots[k]->vertices.begin(),
                          roots[k]->vertices.end());
    fold->dims = hilbert_dims(fold->algebra, fold->vertices.size());
    fold->left = std::move(root);
    fold->right = std::move(roots[k]);
    root = std::move(fold);
  }

  std::vector<long long> expected = clique_polynomial(g.graph);
  expected.resize(g.graph.size() + 1, 0);
  if (root->dims != expected)
    throw std::logic_error("chordal pipeline: assembled dims disagree with the clique counts");

  result.root_dims = root->dims;
  result.root = std::move(root);
  return result;
}

} // namespace praag
