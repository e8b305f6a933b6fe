#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "praag/arith.hpp"
#include "praag/errors.hpp"
#include "praag/graph.hpp"
#include "praag/presentation.hpp"
#include "praag/quadalg.hpp"

namespace praag {

// The decomposition theorems give no conclusion when their hypotheses fail;
// this is a structured no-conclusion, not a negative result.
class HypothesesNotSatisfied : public ValidationError {
public:
  explicit HypothesesNotSatisfied(const std::string& what) : ValidationError(what) {}
};

class NotChordal : public ValidationError {
public:
  explicit NotChordal(const std::string& what) : ValidationError(what) {}
};

class Degenerate : public ValidationError {
public:
  explicit Degenerate(const std::string& what) : ValidationError(what) {}
};

// Cohomology of an overgroup together with the degree-1 restriction map onto
// a subgroup's cohomology. `res1` has dim H^1(H) rows and dim H^1(G) columns;
// for graph-derived data it is the coordinate projection onto shared
// vertices.
struct RestrictionData {
  QuadraticAlgebra ambient; // H^*(G) as a quadratic algebra
  QuadraticAlgebra sub;     // H^*(H)
  FpMatrix res1;

  void validate() const;
};

struct ConditionCheck {
  bool holds = false;
  std::string witness;
};

// (i): the degree-1 restriction is surjective. (ii): the kernel of the
// induced degree-2 map equals ker(res^1) wedge H^1(G).
std::pair<ConditionCheck, ConditionCheck> check_restriction_conditions(const RestrictionData& d);

std::pair<ConditionCheck, ConditionCheck> check_amalgam_hypotheses(const RestrictionData& d1,
                                                                   const RestrictionData& d2);

// Lambda(V1 + W + V2) modulo the transported relation sets of both factors,
// the relations of H placed on W, and V1 wedge V2. Generator provenance is
// retained in the generator names. Throws HypothesesNotSatisfied unless both
// conditions hold on both sides.
QuadraticAlgebra amalgam_cohomology(const RestrictionData& d1, const RestrictionData& d2);

// dims[n] = dim(V1 ^ H^{n-1}(G1)) + dim(V2 ^ H^{n-1}(G2)) + dim H^n(H) for
// n >= 1; dims[0] = 1 (the diagonal in degree 0).
std::vector<long long> mayer_vietoris_dims(const RestrictionData& d1, const RestrictionData& d2,
                                           std::size_t n);

enum class Properness { ProCyclic, Mirrored, CompleteSeparator, Assumed, Unknown };

const char* to_string(Properness p);

// Syntactic sufficient conditions: edge/vertex subgroup (dim H^1(H) <= 1) or
// byte-identical mirrored factor data. Anything else is Unknown and requires
// an explicit acknowledgment from the caller.
Properness recognize_amalgam_properness(const RestrictionData& d1, const RestrictionData& d2);

struct AmalgamReport {
  ConditionCheck condition_i, condition_ii;
  Properness properness = Properness::Unknown;
  std::optional<QuadraticAlgebra> assembled;
  std::vector<long long> dims;            // of the assembled algebra
  std::vector<long long> mayer_vietoris;  // dim ker f_H^n
};

AmalgamReport amalgam_report(const RestrictionData& d1, const RestrictionData& d2, std::size_t n,
                             bool assume_proper);

// ---- HNN extensions ---------------------------------------------------------------

// Word in the ambient generators: whitespace-separated name or name^int.
std::vector<std::uint64_t> word_exponents_mod_p(const std::string& word,
                                                const std::vector<std::string>& generators,
                                                std::uint64_t p);

struct HnnConditions {
  ConditionCheck condition_i, condition_ii, condition_iii;
  bool all() const { return condition_i.holds && condition_ii.holds && condition_iii.holds; }
};

// (i), (ii) as for amalgams on the G0/A restriction; (iii): each twisting
// word phi(a) has the exponent vector of a mod p (identity modulo the second
// filtration step).
HnnConditions check_hnn_hypotheses(const RestrictionData& d, const std::vector<std::string>& phi);

// dims[0] = 1, dims[n] = dim H^n(G0) + dim H^{n-1}(A): the stable letter
// contributes a degree-1 class alpha_t and alpha_t ^ H^{n-1}(A).
std::vector<long long> hnn_cohomology(const RestrictionData& d, const std::vector<std::string>& phi,
                                      std::size_t n);

struct HnnReport {
  HnnConditions conditions;
  Properness properness = Properness::Unknown;
  std::vector<long long> dims;
  std::string alpha_t; // bookkeeping for the distinguished degree-1 class
};

HnnReport hnn_report(const RestrictionData& d, const std::vector<std::string>& phi, std::size_t n,
                     bool assume_proper);

// ---- Fixture files -----------------------------------------------------------------

// JSON: {"type":"amalgam","p":5,"h":{"generators":[...],"omega":[[...]]},
//        "g1":{"generators":[...],"omega":[...],"res":[[row per h gen]]},
//        "g2":{...}}
// and   {"type":"hnn","p":5,"a":{...},"g0":{...,"res":[[row per a gen]]},
//        "phi":["x y^5", ...]}.
// Omega vectors are dense length-d^2 integer rows in (i*d + j) coordinates.
struct AmalgamFixture {
  RestrictionData d1, d2;
};

struct HnnFixture {
  RestrictionData d;
  std::vector<std::string> phi;
};

AmalgamFixture load_amalgam_fixture(const std::string& path);
HnnFixture load_hnn_fixture(const std::string& path);

// ---- Chordal pipeline -----------------------------------------------------------------

struct ChordalProofNode {
  bool leaf = false;
  std::vector<std::size_t> vertices;  // ambient indices
  std::vector<std::size_t> separator; // internal nodes: the complete separator
  QuadraticAlgebra algebra;
  std::vector<long long> dims;
  std::unique_ptr<ChordalProofNode> left, right;
};

struct ChordalPipelineResult {
  std::unique_ptr<ChordalProofNode> root;
  std::vector<long long> root_dims;
  PGraph completed; // the uniform completion found for the degeneracy check
};

// Leaves: complete subgraphs with exterior-algebra cohomology. Internal
// nodes: amalgams along complete separators (proper by the separator shape).
// The root dims are checked against the clique counts. Throws NotChordal or
// Degenerate when the input leaves the theorem's scope.
ChordalPipelineResult chordal_pipeline(const PGraph& g, const CompletionSearch& search = {});

} // namespace praag
