#include "praag/presentation.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "praag/errors.hpp"
#include "praag/lie.hpp"

namespace praag {

namespace {

unsigned min_label_valuation(std::uint64_t p) { return p == 2 ? 2u : 1u; }

void validate_relator(const Relator& r, std::size_t d, std::uint64_t p, unsigned precision) {
  const unsigned minv = min_label_valuation(p);
  const std::uint64_t depth_mod = p == 2 ? 4u : p;
  for (const auto& tok : r.factors) {
    if (const auto* c = std::get_if<Commutator>(&tok)) {
      if (c->i >= d || c->j >= d) throw ValidationError("relator: generator index out of range");
      if (c->i == c->j) throw ValidationError("relator: commutator of a generator with itself");
    } else {
      const auto& pw = std::get<Power>(tok);
      if (pw.i >= d) throw ValidationError("relator: generator index out of range");
      if (pw.e.p() != p || pw.e.k() != precision)
        throw ValidationError("relator: exponent precision does not match the presentation");
      if (pw.e.is_exact()) {
        const long long v = pw.e.exact_value();
        if (v != 0 && int_valuation(p, v) < minv)
          throw ValidationError("relator: exponent valuation below " + std::to_string(minv));
      } else if (pw.e.residue() % depth_mod != 0) {
        throw ValidationError("relator: exponent valuation below " + std::to_string(minv));
      }
    }
  }
}

} // namespace

void Presentation::validate() const {
  if (!is_prime(p)) throw ValidationError("presentation: p must be prime");
  if (precision < (p == 2 ? 2u : 1u)) throw ValidationError("presentation: precision too small");
  padic_modulus(p, precision);
  std::map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].empty()) throw ValidationError("presentation: empty generator name");
    if (!seen.emplace(generators[i], i).second)
      throw ValidationError("presentation: duplicate generator " + generators[i]);
  }
  for (const auto& r : relators) validate_relator(r, d(), p, precision);
}

Presentation praag_presentation(const PGraph& g) {
  g.validate();
  Presentation pr;
  pr.p = g.p;
  pr.precision = g.precision;
  pr.generators = g.graph.vertices;
  pr.relators.reserve(g.graph.edges.size());
  for (std::size_t e = 0; e < g.graph.edges.size(); ++e) {
    const auto [i, j] = g.graph.edges[e];
    const auto& [f1, f2] = g.labels[e];
    Relator r;
    r.factors.push_back(Commutator{i, j});
    if (!f1.is_exact_zero()) r.factors.push_back(Power{i, -f1});
    if (!f2.is_exact_zero()) r.factors.push_back(Power{j, -f2});
    pr.relators.push_back(std::move(r));
  }
  pr.validate();
  return pr;
}

Relator parse_relator(const std::string& text, const std::vector<std::string>& generators,
                      std::uint64_t p, unsigned precision) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < generators.size(); ++i) index[generators[i]] = i;
  const auto lookup = [&](const std::string& name) {
    const auto it = index.find(name);
    if (it == index.end()) throw ValidationError("relator: unknown generator " + name);
    return it->second;
  };

  Relator r;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok.front() == '[') {
      if (tok.back() != ']') throw ValidationError("relator: malformed commutator " + tok);
      const std::string inner = tok.substr(1, tok.size() - 2);
      const auto comma = inner.find(',');
      if (comma == std::string::npos) throw ValidationError("relator: malformed commutator " + tok);
      r.factors.push_back(
          Commutator{lookup(inner.substr(0, comma)), lookup(inner.substr(comma + 1))});
    } else {
      const auto caret = tok.find('^');
      if (caret == std::string::npos) throw ValidationError("relator: expected name^exponent, got " + tok);
      const std::size_t i = lookup(tok.substr(0, caret));
      std::string exp = tok.substr(caret + 1);
      bool residue_only = false;
      if (!exp.empty() && exp.back() == '~') {
        residue_only = true;
        exp.pop_back();
      }
      long long value = 0;
      try {
        std::size_t used = 0;
        value = std::stoll(exp, &used);
        if (used != exp.size()) throw std::invalid_argument(exp);
      } catch (const std::exception&) {
        throw ValidationError("relator: bad exponent in " + tok);
      }
      r.factors.push_back(Power{i, residue_only ? TruncatedPadic::from_residue(p, precision, value)
                                                : TruncatedPadic::from_exact(p, precision, value)});
    }
  }
  validate_relator(r, generators.size(), p, precision);
  return r;
}

std::string relator_to_string(const Relator& r, const std::vector<std::string>& generators) {
  std::ostringstream out;
  bool first = true;
  for (const auto& tok : r.factors) {
    if (!first) out << ' ';
    first = false;
    if (const auto* c = std::get_if<Commutator>(&tok)) {
      out << '[' << generators.at(c->i) << ',' << generators.at(c->j) << ']';
    } else {
      const auto& pw = std::get<Power>(tok);
      out << generators.at(pw.i) << '^';
      if (pw.e.is_exact())
        out << pw.e.exact_value();
      else
        out << pw.e.residue() << '~';
    }
  }
  return out.str();
}

// ---- Images modulo the third Zassenhaus term ----------------------------------

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t d) {
  if (i >= j || j >= d) throw ValidationError("pair_index: need i < j < d");
  return i * d - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<std::size_t, std::size_t> pair_from_index(std::size_t idx, std::size_t d) {
  for (std::size_t i = 0; i + 1 < d; ++i) {
    const std::size_t row = d - i - 1;
    if (idx < row) return {i, i + 1 + idx};
    idx -= row;
  }
  throw ValidationError("pair_from_index: index out of range");
}

F2F3Image f2f3_image(const Relator& r, std::size_t d, std::uint64_t p) {
  F2F3Image img;
  img.coords.assign(d * (d - 1) / 2, 0);
  for (const auto& tok : r.factors) {
    if (const auto* c = std::get_if<Commutator>(&tok)) {
      if (c->i < c->j) {
        auto& v = img.coords[pair_index(c->i, c->j, d)];
        v = add_mod(v, 1, p);
      } else {
        auto& v = img.coords[pair_index(c->j, c->i, d)];
        v = sub_mod(v, 1, p);
      }
    }
  }
  return img;
}

GaussReduction gauss_reduce(const Presentation& pr) {
  pr.validate();
  const std::size_t d = pr.d();
  const std::size_t cols = d * (d - 1) / 2;
  const std::uint64_t p = pr.p;

  struct PivotRow {
    std::size_t col;
    std::vector<std::uint64_t> row;
  };
  std::vector<PivotRow> pivots;
  GaussReduction out;

  for (std::size_t h = 0; h < pr.relators.size(); ++h) {
    std::vector<std::uint64_t> row = f2f3_image(pr.relators[h], d, p).coords;
    for (const auto& pv : pivots) {
      const std::uint64_t f = row[pv.col];
      if (f == 0) continue;
      for (std::size_t c = 0; c < cols; ++c) row[c] = sub_mod(row[c], mul_mod(f, pv.row[c], p), p);
    }
    std::size_t lead = cols;
    for (std::size_t c = 0; c < cols; ++c)
      if (row[c] != 0) {
        lead = c;
        break;
      }
    if (lead == cols) {
      out.dependent_rows.push_back(h);
      continue;
    }
    const std::uint64_t inv = inv_mod(row[lead], p);
    for (std::size_t c = 0; c < cols; ++c) row[c] = mul_mod(row[c], inv, p);
    for (auto& pv : pivots) {
      const std::uint64_t f = pv.row[lead];
      if (f == 0) continue;
      for (std::size_t c = 0; c < cols; ++c)
        pv.row[c] = sub_mod(pv.row[c], mul_mod(f, row[c], p), p);
    }
    pivots.push_back(PivotRow{lead, std::move(row)});
  }

  std::sort(pivots.begin(), pivots.end(),
            [](const PivotRow& a, const PivotRow& b) { return a.col < b.col; });
  out.reduced = FpMatrix(p, pivots.size(), cols);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    out.leading_pairs.push_back(pair_from_index(pivots[r].col, d));
    for (std::size_t c = 0; c < cols; ++c) out.reduced.at(r, c) = pivots[r].row[c];
  }
  return out;
}

FpMatrix cup_pairing_matrix(const Presentation& pr) {
  pr.validate();
  const std::size_t d = pr.d();
  const std::size_t cols = d * (d - 1) / 2;
  FpMatrix m(pr.p, pr.r(), cols);
  for (std::size_t h = 0; h < pr.relators.size(); ++h) {
    const auto img = f2f3_image(pr.relators[h], d, pr.p);
    for (std::size_t c = 0; c < cols; ++c) m.at(h, c) = sub_mod(0, img.coords[c], pr.p);
  }
  return m;
}

// ---- Abelianization ------------------------------------------------------------

namespace {

// Matrix entry during elimination over Z_p at a uniform working precision.
struct ElimEntry {
  bool exact = true;
  long long value = 0;     // meaningful when exact
  std::uint64_t res = 0;   // canonical residue at the working precision
};

unsigned vp_u64(std::uint64_t p, std::uint64_t v) {
  unsigned n = 0;
  while (v % p == 0) {
    v /= p;
    ++n;
  }
  return n;
}

struct ElimResult {
  std::size_t nonzero_factors = 0;
  std::vector<unsigned> torsion;
};

void eliminate(std::vector<std::vector<ElimEntry>> m, std::uint64_t p, unsigned kk, unsigned shift,
               ElimResult& out) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  if (rows == 0 || cols == 0) return;

  bool all_exact = true;
  for (const auto& row : m)
    for (const auto& e : row) all_exact &= e.exact;

  if (all_exact) {
    std::vector<std::vector<long long>> im(rows, std::vector<long long>(cols));
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) im[r][c] = m[r][c].value;
    for (const BigInt& f : smith_normal_form(im)) {
      if (f == 0) continue;
      ++out.nonzero_factors;
      unsigned e = shift;
      for (BigInt v = abs(f); v % p == 0; v /= p) ++e;
      if (e > 0) out.torsion.push_back(e);
    }
    return;
  }

  // Minimal valuation among entries whose valuation is determined.
  constexpr unsigned kInf = ~0u;
  unsigned vmin = kInf;
  for (const auto& row : m)
    for (const auto& e : row) {
      unsigned v;
      if (e.exact) {
        if (e.value == 0) continue;
        v = int_valuation(p, e.value);
      } else if (e.res != 0) {
        v = vp_u64(p, e.res);
      } else {
        continue; // valuation >= kk, not determined
      }
      vmin = std::min(vmin, v);
    }
  if (vmin >= kk)
    throw PrecisionError("abelianization: invariant factor beyond working precision p^" +
                         std::to_string(kk));

  // Divide everything by p^vmin; some entry becomes a unit.
  std::uint64_t pv = 1;
  for (unsigned t = 0; t < vmin; ++t) pv *= p;
  const unsigned kk2 = kk - vmin;
  const std::uint64_t pk2 = padic_modulus(p, kk2);
  for (auto& row : m)
    for (auto& e : row) {
      if (e.exact)
        e.value /= static_cast<long long>(pv);
      e.res = e.exact ? residue_mod(e.value, pk2) : (e.res / pv) % pk2;
    }

  std::size_t pr = 0, pc = 0;
  bool found = false;
  for (std::size_t r = 0; r < rows && !found; ++r)
    for (std::size_t c = 0; c < cols && !found; ++c)
      if (m[r][c].res % p != 0) {
        pr = r;
        pc = c;
        found = true;
      }
  if (!found) throw std::logic_error("abelianization: pivot vanished after scaling");

  ++out.nonzero_factors;
  if (shift + vmin > 0) out.torsion.push_back(shift + vmin);

  const std::uint64_t inv = inv_mod(m[pr][pc].res, pk2);
  std::vector<std::vector<ElimEntry>> next;
  next.reserve(rows - 1);
  for (std::size_t r = 0; r < rows; ++r) {
    if (r == pr) continue;
    std::vector<ElimEntry> row;
    row.reserve(cols - 1);
    for (std::size_t c = 0; c < cols; ++c) {
      if (c == pc) continue;
      ElimEntry e = m[r][c];
      const bool untouched = (m[r][pc].exact && m[r][pc].value == 0) ||
                             (m[pr][c].exact && m[pr][c].value == 0);
      if (!untouched) {
        e.exact = false;
        e.value = 0;
        e.res = sub_mod(e.res, mul_mod(mul_mod(m[r][pc].res, inv, pk2), m[pr][c].res, pk2), pk2);
      }
      row.push_back(e);
    }
    next.push_back(std::move(row));
  }
  eliminate(std::move(next), p, kk2, shift + vmin, out);
}

} // namespace

Abelianization abelianization(const Presentation& pr) {
  pr.validate();
  const std::size_t d = pr.d();
  const std::size_t r = pr.r();

  std::vector<std::vector<TruncatedPadic>> sums(
      d, std::vector<TruncatedPadic>(r, TruncatedPadic::exact_zero(pr.p, pr.precision)));
  for (std::size_t h = 0; h < r; ++h)
    for (const auto& tok : pr.relators[h].factors)
      if (const auto* pw = std::get_if<Power>(&tok)) sums[pw->i][h] = sums[pw->i][h] + pw->e;

  std::vector<std::vector<ElimEntry>> m(d, std::vector<ElimEntry>(r));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t h = 0; h < r; ++h) {
      const auto& x = sums[i][h];
      m[i][h].exact = x.is_exact();
      m[i][h].value = x.is_exact() ? x.exact_value() : 0;
      m[i][h].res = x.residue();
    }

  ElimResult res;
  eliminate(std::move(m), pr.p, pr.precision, 0, res);
  Abelianization out;
  out.free_rank = d - res.nonzero_factors;
  out.torsion = std::move(res.torsion);
  std::sort(out.torsion.begin(), out.torsion.end());
  return out;
}

std::string Abelianization::to_string(std::uint64_t p) const {
  std::ostringstream out;
  bool first = true;
  const auto sep = [&]() {
    if (!first) out << " x ";
    first = false;
  };
  if (free_rank > 0) {
    sep();
    out << "Z_" << p;
    if (free_rank > 1) out << "^" << free_rank;
  }
  for (const unsigned e : torsion) {
    sep();
    std::uint64_t q = 1;
    for (unsigned t = 0; t < e; ++t) q *= p;
    out << "Z/" << q;
  }
  if (first) out << "0";
  return out.str();
}

// ---- Predicted cohomology -------------------------------------------------------

PredictedCohomology predicted_cohomology(const PGraph& g) {
  g.validate();
  PredictedCohomology out;
  out.betti = clique_polynomial(g.graph);
  return out;
}

// ---- Completion search -------------------------------------------------------------

namespace {

// One vertex triple of the completed (complete) graph. `last_missing` is the
// largest missing-edge index among its three pairs, or npos when all three
// edges are original.
struct TripleSlot {
  std::array<std::size_t, 3> v;
  std::size_t last_missing = static_cast<std::size_t>(-1);
};

struct CompletionGrid {
  PGraph work; // original edges followed by the missing pairs
  std::vector<std::size_t> missing_edge_slot;
  std::vector<TripleSlot> triples;
  std::uint64_t budget = 0;
  std::uint64_t visited = 0;
  bool aborted = false;

  template <typename Check>
  bool triples_ready_pass(std::size_t m, const Check& check) {
    for (const auto& t : triples)
      if (t.last_missing == m && !check(t)) return false;
    return true;
  }

  // Depth-first assignment in lexicographic order; coordinate 2m / 2m+1 is
  // f1 / f2 of missing edge m. Returns true when a full assignment passes.
  template <typename Check>
  bool dfs(std::size_t depth, const std::vector<TruncatedPadic>& candidates, const Check& check) {
    if (depth == 2 * missing_edge_slot.size()) return true;
    const std::size_t m = depth / 2;
    auto& label = work.labels[missing_edge_slot[m]];
    for (const auto& cand : candidates) {
      if (++visited > budget) {
        aborted = true;
        return false;
      }
      (depth % 2 == 0 ? label.first : label.second) = cand;
      if (depth % 2 == 1 && !triples_ready_pass(m, check)) continue;
      if (dfs(depth + 1, candidates, check)) return true;
      if (aborted) return false;
    }
    return false;
  }
};

bool jacobi_exact_zero(const PGraph& g, const TripleSlot& t) {
  const auto vals = triangle_jacobi_values(triangle_frame(g, t.v[0], t.v[1], t.v[2]));
  for (const auto& x : vals)
    if (!x.is_exact() || x.exact_value() != 0) return false;
  return true;
}

bool jacobi_zero_mod(const PGraph& g, const TripleSlot& t, std::uint64_t pk) {
  const auto vals = triangle_jacobi_values(triangle_frame(g, t.v[0], t.v[1], t.v[2]));
  for (const auto& x : vals)
    if (x.residue() % pk != 0) return false;
  return true;
}

} // namespace

CompletionOutcome completion_search(const PGraph& g, const CompletionSearch& search) {
  g.validate();
  const std::uint64_t p = g.p;
  const unsigned k_eff = std::max(search.refutation_precision, p == 2 ? 5u : 3u);

  CompletionGrid grid;
  grid.work = g;
  const std::size_t n = g.graph.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!g.graph.adjacent(i, j)) {
        grid.missing_edge_slot.push_back(grid.work.graph.edges.size());
        grid.work.graph.edges.emplace_back(i, j);
        grid.work.labels.emplace_back(TruncatedPadic::exact_zero(p, g.precision),
                                      TruncatedPadic::exact_zero(p, g.precision));
      }

  // Pair -> missing-edge index, for classifying triples.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> missing_index;
  for (std::size_t m = 0; m < grid.missing_edge_slot.size(); ++m) {
    const auto& e = grid.work.graph.edges[grid.missing_edge_slot[m]];
    missing_index[e] = m;
  }
  std::vector<TripleSlot> upfront;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        TripleSlot t{{a, b, c}, static_cast<std::size_t>(-1)};
        bool any_missing = false;
        for (const auto& pr :
             {std::make_pair(a, b), std::make_pair(a, c), std::make_pair(b, c)}) {
          const auto it = missing_index.find(pr);
          if (it == missing_index.end()) continue;
          any_missing = true;
          if (t.last_missing == static_cast<std::size_t>(-1) || it->second > t.last_missing)
            t.last_missing = it->second;
        }
        (any_missing ? grid.triples : upfront).push_back(t);
      }

  std::string note;

  // Exact direction: candidate labels 0 and u * p^j in the configured order.
  bool inputs_exact = true;
  for (const auto& [f1, f2] : g.labels) inputs_exact &= f1.is_exact() && f2.is_exact();
  if (!inputs_exact) {
    note = "input labels are residues; exact completion unavailable";
  } else {
    std::vector<TruncatedPadic> candidates;
    std::vector<long long> values{0};
    long long pj = 1;
    for (unsigned j = 1; j <= search.max_exponent; ++j) {
      if (pj > static_cast<long long>((1ull << 62) / p))
        throw ValidationError("completion_search: candidate exponent overflows");
      pj *= static_cast<long long>(p);
      for (const long long u : search.units) {
        if (u == 0) continue;
        const long long v = u * pj;
        if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
      }
    }
    for (const long long v : values)
      candidates.push_back(TruncatedPadic::from_exact(p, g.precision, v));

    bool base_ok = true;
    for (const auto& t : upfront)
      if (!jacobi_exact_zero(grid.work, t)) {
        base_ok = false;
        note = "triple on original edges fails exactly";
        break;
      }
    if (base_ok) {
      grid.budget = search.max_assignments;
      grid.visited = 0;
      grid.aborted = false;
      const auto check = [&](const TripleSlot& t) { return jacobi_exact_zero(grid.work, t); };
      if (grid.dfs(0, candidates, check)) {
        CompletionOutcome out;
        out.kind = CompletionOutcome::Kind::Completed;
        out.completed = grid.work;
        out.completed->validate();
        return out;
      }
      note = grid.aborted ? "exact search exceeded budget of " +
                                std::to_string(search.max_assignments) + " assignments"
                          : "exact candidate grid exhausted";
    }
  }

  // Refutation direction mod p^k_eff over all labels of admissible valuation.
  if (g.precision < k_eff) {
    CompletionOutcome out;
    out.note = note + "; labels too imprecise to attempt refutation mod p^" +
               std::to_string(k_eff);
    return out;
  }
  const std::uint64_t pk = padic_modulus(p, k_eff);
  const std::uint64_t step = p == 2 ? 4u : p;
  std::vector<TruncatedPadic> residues;
  for (std::uint64_t r = 0; r < pk; r += step)
    residues.push_back(TruncatedPadic::from_residue(p, g.precision, static_cast<long long>(r)));

  const auto check = [&](const TripleSlot& t) { return jacobi_zero_mod(grid.work, t, pk); };
  for (const auto& t : upfront)
    if (!check(t)) {
      CompletionOutcome out;
      out.kind = CompletionOutcome::Kind::RefutedModPk;
      out.refuted_mod = k_eff;
      out.note = "triple on original edges fails mod p^" + std::to_string(k_eff);
      return out;
    }
  grid.budget = search.max_assignments;
  grid.visited = 0;
  grid.aborted = false;
  if (grid.dfs(0, residues, check)) {
    CompletionOutcome out;
    out.note = note + "; a completion exists mod p^" + std::to_string(k_eff);
    return out;
  }
  if (grid.aborted) {
    CompletionOutcome out;
    out.note = note + "; refutation sweep exceeded budget of " +
               std::to_string(search.max_assignments) + " assignments";
    return out;
  }
  CompletionOutcome out;
  out.kind = CompletionOutcome::Kind::RefutedModPk;
  out.refuted_mod = k_eff;
  out.note = note;
  return out;
}

// ---- Quadraticity ----------------------------------------------------------------

const char* to_string(QuadReason r) {
  switch (r) {
    case QuadReason::TriangleFree: return "TriangleFree";
    case QuadReason::CompleteUniform: return "CompleteUniform";
    case QuadReason::ChordalNonDegenerate: return "ChordalNonDegenerate";
    case QuadReason::DisjointUnionOfProven: return "DisjointUnionOfProven";
  }
  return "?";
}

namespace {

std::string triple_names(const PGraph& g, const std::array<std::size_t, 3>& t) {
  return "(" + g.graph.vertices[t[0]] + "," + g.graph.vertices[t[1]] + "," +
         g.graph.vertices[t[2]] + ")";
}

} // namespace

QuadraticityStatus quadraticity_status(const PGraph& g, const CompletionSearch& search) {
  g.validate();
  QuadraticityStatus st;

  if (is_triangle_free(g.graph)) {
    st.proven = true;
    st.reason = QuadReason::TriangleFree;
    return st;
  }

  const auto comps = connected_components(g.graph);
  if (comps.size() > 1) {
    bool all = true;
    for (std::size_t k = 0; k < comps.size(); ++k) {
      const auto sub = quadraticity_status(g.induced(comps[k]), search);
      if (sub.proven) continue;
      all = false;
      for (const auto& dgn : sub.diagnostics)
        st.diagnostics.push_back("component " + std::to_string(k + 1) + ": " + dgn);
    }
    if (all) {
      st.proven = true;
      st.reason = QuadReason::DisjointUnionOfProven;
    }
    return st;
  }

  if (is_complete(g.graph)) {
    try {
      const auto r = complete_graph_lattice(g);
      if (std::holds_alternative<PowerfulLieLattice>(r)) {
        st.proven = true;
        st.reason = QuadReason::CompleteUniform;
      } else {
        st.diagnostics.push_back("Jacobi system fails at triple " +
                                 triple_names(g, std::get<TripleFailure>(r).triple));
      }
    } catch (const PrecisionError& e) {
      st.diagnostics.push_back(std::string("Jacobi system undecidable at precision: ") + e.what());
    }
    return st;
  }

  const auto cs = chordal_structure(g.graph);
  if (!cs.chordal) {
    std::string cyc = "chordless cycle (";
    for (std::size_t i = 0; i < cs.chordless_cycle.size(); ++i) {
      if (i) cyc += ",";
      cyc += g.graph.vertices[cs.chordless_cycle[i]];
    }
    st.diagnostics.push_back(cyc + ")");
    return st;
  }

  const auto out = completion_search(g, search);
  switch (out.kind) {
    case CompletionOutcome::Kind::Completed:
      st.proven = true;
      st.reason = QuadReason::ChordalNonDegenerate;
      break;
    case CompletionOutcome::Kind::RefutedModPk:
      st.diagnostics.push_back("no uniform completion exists mod p^" +
                               std::to_string(out.refuted_mod));
      break;
    case CompletionOutcome::Kind::Inconclusive:
      st.diagnostics.push_back("completion search inconclusive: " + out.note);
      break;
  }
  return st;
}

// ---- Cyclotomic orientation check ---------------------------------------------------

bool CyclotomicTable::cyclotomic() const {
  bool undecided = false;
  for (const auto& v : vertex_consistent) {
    if (!v.has_value())
      undecided = true;
    else if (!*v)
      return false;
  }
  if (undecided)
    throw PrecisionError("cyclotomic_check: eigenvalue agreement undecidable at precision");
  return true;
}

CyclotomicTable cyclotomic_check(const PGraph& g) {
  g.validate();
  CyclotomicTable table;
  const std::size_t n = g.graph.size();
  std::vector<std::vector<TruncatedPadic>> at_vertex(n);
  for (std::size_t e = 0; e < g.graph.edges.size(); ++e) {
    const auto [i, j] = g.graph.edges[e];
    const auto& [a, b] = g.labels[e];
    table.kappa.emplace_back(b, -a);
    at_vertex[i].push_back(b);
    at_vertex[j].push_back(-a);
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::optional<bool> verdict = true;
    for (std::size_t t = 1; t < at_vertex[v].size(); ++t) {
      const auto eq = at_vertex[v][0].decide_equal(at_vertex[v][t]);
      if (eq.has_value() && !*eq) {
        verdict = false;
        break;
      }
      if (!eq.has_value()) verdict = std::nullopt;
    }
    table.vertex_consistent.push_back(verdict);
  }
  return table;
}

} // namespace praag
