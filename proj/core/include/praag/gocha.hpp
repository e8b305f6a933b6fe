#pragma once

#include <optional>
#include <string>
#include <vector>

#include "praag/arith.hpp"
#include "praag/graph.hpp"
#include "praag/presentation.hpp"

namespace praag {

// Per-generator weight; nullopt stands for +infinity. At least one weight
// must be finite, all finite weights positive.
struct WeightAssignment {
  std::vector<std::optional<Rat>> w;

  void validate() const;
};

// Valuation of a relator under a weight assignment:
//   D([x_i,x_j]) = w(i) + w(j),   D(x_i^e) = v_p(e) * p * w(i),
// minimum over factors, +infinity (nullopt) propagating through empty
// products and exact-zero exponents. The power rule is a lower bound for
// exponent valuations > 1, which only weakens the inequality below.
std::optional<Rat> relator_valuation(const Relator& r, const WeightAssignment& w, std::uint64_t p);

// 1 - H_X(T) + H_R(T) with H_S(T) = sum of T^{D(s)}, evaluated exactly.
// Exponents must be non-negative integers (infinite terms contribute 0).
Rat ggs_value(const WeightAssignment& w, const std::vector<std::optional<Rat>>& relator_vals,
              const Rat& t);

struct GgsCertificate {
  WeightAssignment weights;
  Rat t0;    // in (0,1)
  Rat value; // < 0
  std::vector<std::optional<Rat>> relator_valuations;
  std::string strategy; // "uniform" | "bipartite" | "two-light" | "sweep"

  // Recomputes the valuations and the value from the presentation; throws
  // ValidationError on any mismatch or if the value is not negative.
  void validate(const Presentation& pr) const;
};

struct GgsBounds {
  unsigned max_weight = 12;                   // integer weights in [1, W]
  unsigned grid = 1000;                       // T on {1/Q, ..., (Q-1)/Q}
  std::uint64_t max_sweep_vectors = 2000000;  // exhaustive-sweep budget
};

struct GgsSearchOutcome {
  std::optional<GgsCertificate> certificate;
  std::string note; // how far the search went when nothing was found
};

// Strategies in order: uniform weights, the bipartite 1/2-weighting when the
// commutator graph is 2-colorable, two light generators with the rest at
// N <= W, then a bounded exhaustive sweep. Every emitted certificate is
// re-validated exactly; the first hit in deterministic order wins.
GgsSearchOutcome ggs_search(const Presentation& pr, const GgsBounds& bounds = {});

// Graph on the generators with an edge wherever some relator has a
// commutator token.
Graph commutator_graph(const Presentation& pr);

enum class FreeSubgroupTag { PowerfulByCompleteness, FreeSubgroupByMissingEdge, FreeSubgroupByGGS };

const char* to_string(FreeSubgroupTag t);

struct FreeSubgroupVerdict {
  FreeSubgroupTag tag;
  std::string justification;
};

std::vector<FreeSubgroupVerdict> free_subgroup_verdict(const Presentation& pr,
                                                       const GgsSearchOutcome& ggs);
std::vector<FreeSubgroupVerdict> free_subgroup_verdict(const Presentation& pr,
                                                       const GgsBounds& bounds = {});

} // namespace praag
