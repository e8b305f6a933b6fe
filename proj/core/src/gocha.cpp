#include "praag/gocha.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include "praag/errors.hpp"

namespace praag {

void WeightAssignment::validate() const {
  bool any_finite = false;
  for (const auto& x : w) {
    if (!x.has_value()) continue;
    if (*x <= 0) throw ValidationError("weight assignment: weights must be positive");
    any_finite = true;
  }
  if (!any_finite) throw ValidationError("weight assignment: all weights infinite");
}

std::optional<Rat> relator_valuation(const Relator& r, const WeightAssignment& w,
                                     std::uint64_t p) {
  w.validate();
  std::optional<Rat> best;
  const auto merge = [&](const std::optional<Rat>& dv) {
    if (dv.has_value() && (!best.has_value() || *dv < *best)) best = dv;
  };
  for (const auto& tok : r.factors) {
    if (const auto* c = std::get_if<Commutator>(&tok)) {
      if (c->i >= w.w.size() || c->j >= w.w.size())
        throw ValidationError("relator_valuation: generator index out of range");
      const auto &wi = w.w[c->i], &wj = w.w[c->j];
      merge(wi.has_value() && wj.has_value() ? std::optional<Rat>(*wi + *wj) : std::nullopt);
    } else {
      const auto& pw = std::get<Power>(tok);
      if (pw.i >= w.w.size())
        throw ValidationError("relator_valuation: generator index out of range");
      const auto& wi = w.w[pw.i];
      if (pw.e.is_exact_zero() || !wi.has_value()) {
        merge(std::nullopt);
        continue;
      }
      const unsigned v = pw.e.known_valuation("relator_valuation");
      merge(Rat(v) * Rat(p) * (*wi));
    }
  }
  return best;
}

namespace {

Rat rat_pow(const Rat& t, const Rat& e) {
  if (denominator(e) != 1) throw ValidationError("ggs_value: non-integer exponent " + rat_string(e));
  if (e < 0) throw ValidationError("ggs_value: negative exponent");
  const BigInt n = numerator(e);
  if (n > 100000) throw ResourceError("ggs_value: exponent too large");
  Rat acc = 1;
  for (BigInt i = 0; i < n; ++i) acc *= t;
  return acc;
}

double rat_double(const Rat& x) {
  return numerator(x).convert_to<double>() / denominator(x).convert_to<double>();
}

} // namespace

Rat ggs_value(const WeightAssignment& w, const std::vector<std::optional<Rat>>& relator_vals,
              const Rat& t) {
  w.validate();
  if (t <= 0 || t >= 1) throw ValidationError("ggs_value: T must lie in (0,1)");
  Rat acc = 1;
  for (const auto& wi : w.w)
    if (wi.has_value()) acc -= rat_pow(t, *wi);
  for (const auto& dv : relator_vals)
    if (dv.has_value()) acc += rat_pow(t, *dv);
  return acc;
}

void GgsCertificate::validate(const Presentation& pr) const {
  weights.validate();
  if (weights.w.size() != pr.d())
    throw ValidationError("ggs certificate: weight count does not match presentation");
  if (t0 <= 0 || t0 >= 1) throw ValidationError("ggs certificate: T0 outside (0,1)");
  std::vector<std::optional<Rat>> vals;
  for (const auto& r : pr.relators) vals.push_back(relator_valuation(r, weights, pr.p));
  if (vals != relator_valuations)
    throw ValidationError("ggs certificate: stored relator valuations do not reproduce");
  const Rat v = ggs_value(weights, vals, t0);
  if (v != value) throw ValidationError("ggs certificate: stored value does not reproduce");
  if (v >= 0) throw ValidationError("ggs certificate: value is not negative");
}

Graph commutator_graph(const Presentation& pr) {
  pr.validate();
  Graph g;
  g.vertices = pr.generators;
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& r : pr.relators)
    for (const auto& tok : r.factors)
      if (const auto* c = std::get_if<Commutator>(&tok))
        pairs.emplace(std::min(c->i, c->j), std::max(c->i, c->j));
  g.edges.assign(pairs.begin(), pairs.end());
  g.validate();
  return g;
}

namespace {

// 2-coloring with color 0 on each component's smallest vertex; nullopt when
// an odd cycle exists.
std::optional<std::vector<int>> bipartition(const Graph& g) {
  const auto adj = g.adjacency();
  std::vector<int> color(g.size(), -1);
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (const std::size_t u : adj[v]) {
        if (color[u] == -1) {
          color[u] = 1 - color[v];
          queue.push_back(u);
        } else if (color[u] == color[v]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

struct ScanContext {
  const Presentation& pr;
  unsigned grid;
};

// Exact evaluation only after a conservative double-precision screen; a hit
// is always re-verified exactly before a certificate is emitted.
std::optional<GgsCertificate> scan_weights(const ScanContext& ctx,
                                           const std::vector<long long>& weights,
                                           const std::string& strategy,
                                           const std::vector<Rat>& extra_candidates = {}) {
  WeightAssignment wa;
  for (const long long v : weights) wa.w.emplace_back(Rat(v));
  std::vector<std::optional<Rat>> vals;
  for (const auto& r : ctx.pr.relators) vals.push_back(relator_valuation(r, wa, ctx.pr.p));

  const auto emit = [&](const Rat& t, const Rat& value) {
    GgsCertificate cert;
    cert.weights = wa;
    cert.t0 = t;
    cert.value = value;
    cert.relator_valuations = vals;
    cert.strategy = strategy;
    cert.validate(ctx.pr);
    return cert;
  };

  for (const Rat& t : extra_candidates) {
    if (t <= 0 || t >= 1) continue;
    const Rat v = ggs_value(wa, vals, t);
    if (v < 0) return emit(t, v);
  }

  std::vector<double> wexp, rexp;
  for (const auto& wi : wa.w) wexp.push_back(rat_double(*wi));
  for (const auto& dv : vals)
    if (dv.has_value()) rexp.push_back(rat_double(*dv));
  for (unsigned q = 1; q < ctx.grid; ++q) {
    const double td = static_cast<double>(q) / ctx.grid;
    double acc = 1;
    for (const double e : wexp) acc -= std::pow(td, e);
    for (const double e : rexp) acc += std::pow(td, e);
    if (acc < -1e-9) {
      const Rat t(q, ctx.grid);
      const Rat v = ggs_value(wa, vals, t);
      if (v < 0) return emit(t, v);
    }
  }
  return std::nullopt;
}

} // namespace

GgsSearchOutcome ggs_search(const Presentation& pr, const GgsBounds& bounds) {
  pr.validate();
  if (bounds.grid < 2) throw ValidationError("ggs_search: grid denominator must be >= 2");
  if (bounds.max_weight < 1) throw ValidationError("ggs_search: max weight must be >= 1");
  GgsSearchOutcome out;
  const std::size_t d = pr.d();
  if (d == 0) {
    out.note = "no generators";
    return out;
  }
  const ScanContext ctx{pr, bounds.grid};
  std::ostringstream note;

  // Uniform weights; T = d/(2r) is the exact minimizer when all relators sit
  // in degree 2, tried ahead of the grid.
  {
    std::vector<Rat> extra;
    if (pr.r() > 0) extra.emplace_back(d, 2 * pr.r());
    if (auto cert = scan_weights(ctx, std::vector<long long>(d, 1), "uniform", extra)) {
      out.certificate = std::move(cert);
      return out;
    }
    note << "uniform";
  }

  const Graph cg = commutator_graph(pr);
  if (const auto colors = bipartition(cg)) {
    std::vector<long long> weights(d);
    for (std::size_t i = 0; i < d; ++i) weights[i] = (*colors)[i] == 0 ? 1 : 2;
    if (auto cert = scan_weights(ctx, weights, "bipartite")) {
      out.certificate = std::move(cert);
      return out;
    }
    note << ", bipartite";
  }

  if (d >= 3) {
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a + 1; b < d; ++b)
        for (unsigned n = 2; n <= bounds.max_weight; ++n) {
          std::vector<long long> weights(d, n);
          weights[a] = weights[b] = 1;
          if (auto cert = scan_weights(ctx, weights, "two-light")) {
            out.certificate = std::move(cert);
            return out;
          }
        }
    note << ", two-light (N <= " << bounds.max_weight << ")";
  }

  // Exhaustive sweep, coarse grid, lexicographic; budgeted.
  {
    const ScanContext coarse{pr, std::min(bounds.grid, 64u)};
    std::vector<long long> weights(d, 1);
    std::uint64_t visited = 0;
    bool truncated = false;
    while (true) {
      if (++visited > bounds.max_sweep_vectors) {
        truncated = true;
        break;
      }
      if (auto cert = scan_weights(coarse, weights, "sweep")) {
        out.certificate = std::move(cert);
        return out;
      }
      std::size_t i = 0;
      while (i < d && weights[i] == bounds.max_weight) weights[i++] = 1;
      if (i == d) break;
      ++weights[i];
    }
    note << ", sweep (weights <= " << bounds.max_weight << ", grid "
         << std::min(bounds.grid, 64u);
    if (truncated) note << ", truncated after " << bounds.max_sweep_vectors << " vectors";
    note << ")";
  }

  out.note = note.str();
  return out;
}

const char* to_string(FreeSubgroupTag t) {
  switch (t) {
    case FreeSubgroupTag::PowerfulByCompleteness: return "PowerfulByCompleteness";
    case FreeSubgroupTag::FreeSubgroupByMissingEdge: return "FreeSubgroupByMissingEdge";
    case FreeSubgroupTag::FreeSubgroupByGGS: return "FreeSubgroupByGGS";
  }
  return "?";
}

std::vector<FreeSubgroupVerdict> free_subgroup_verdict(const Presentation& pr,
                                                       const GgsSearchOutcome& ggs) {
  const Graph g = commutator_graph(pr);
  std::vector<FreeSubgroupVerdict> out;
  if (is_complete(g)) {
    out.push_back({FreeSubgroupTag::PowerfulByCompleteness,
                   "every generator pair carries a commutation relation"});
  } else {
    for (std::size_t i = 0; i < g.size(); ++i) {
      bool found = false;
      for (std::size_t j = i + 1; j < g.size() && !found; ++j)
        if (!g.adjacent(i, j)) {
          out.push_back({FreeSubgroupTag::FreeSubgroupByMissingEdge,
                         "generators " + g.vertices[i] + ", " + g.vertices[j] +
                             " have no commutation relation"});
          found = true;
        }
      if (found) break;
    }
  }
  if (ggs.certificate.has_value()) {
    out.push_back({FreeSubgroupTag::FreeSubgroupByGGS,
                   "certificate via strategy " + ggs.certificate->strategy +
                       " at T0 = " + rat_string(ggs.certificate->t0)});
  }
  return out;
}

std::vector<FreeSubgroupVerdict> free_subgroup_verdict(const Presentation& pr,
                                                       const GgsBounds& bounds) {
  return free_subgroup_verdict(pr, ggs_search(pr, bounds));
}

} // namespace praag
