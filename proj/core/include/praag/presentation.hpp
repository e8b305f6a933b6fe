#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "praag/arith.hpp"
#include "praag/graph.hpp"

namespace praag {

// ---- Relators and presentations ----------------------------------------------

struct Commutator {
  std::size_t i = 0, j = 0; // [x_i, x_j], i != j
};

struct Power {
  std::size_t i = 0;
  TruncatedPadic e; // valuation >= 1 (>= 2 when p = 2)
};

using RelatorToken = std::variant<Commutator, Power>;

struct Relator {
  std::vector<RelatorToken> factors;
};

struct Presentation {
  std::uint64_t p = 5;
  unsigned precision = 4;
  std::vector<std::string> generators;
  std::vector<Relator> relators;

  std::size_t d() const { return generators.size(); }
  std::size_t r() const { return relators.size(); }
  void validate() const;
};

// One relator per edge (x_i, x_j) with label (f1, f2):
//   [x_i, x_j] x_i^{-f1} x_j^{-f2};
// powers with exact-zero exponent are dropped.
Presentation praag_presentation(const PGraph& g);

// Token syntax: "[x1,x2] x2^-5"; exponents are integers, with a trailing '~'
// for residue-only values.
Relator parse_relator(const std::string& text, const std::vector<std::string>& generators,
                      std::uint64_t p, unsigned precision);
std::string relator_to_string(const Relator& r, const std::vector<std::string>& generators);

// ---- Images modulo the third Zassenhaus term ----------------------------------

// Index of the pair (i, j), i < j, in lexicographic order.
std::size_t pair_index(std::size_t i, std::size_t j, std::size_t d);
std::pair<std::size_t, std::size_t> pair_from_index(std::size_t idx, std::size_t d);

struct F2F3Image {
  std::vector<std::uint64_t> coords; // length C(d,2), entries mod p
};

// Commutator(i,j) contributes +1 at (i,j) for i < j and -1 at (j,i)
// otherwise; power tokens vanish (p-th powers lie below the quotient).
F2F3Image f2f3_image(const Relator& r, std::size_t d, std::uint64_t p);

struct GaussReduction {
  std::vector<std::pair<std::size_t, std::size_t>> leading_pairs;
  FpMatrix reduced;                       // RREF rows of the independent images
  std::vector<std::size_t> dependent_rows; // relators whose image is spanned by earlier ones
};

GaussReduction gauss_reduce(const Presentation& pr);

// Rows = relators, columns = pairs (i,j) lex; entry = -a_ij. The rank is
// dim H^2 for presentations with independent relator images.
FpMatrix cup_pairing_matrix(const Presentation& pr);

// ---- Abelianization ------------------------------------------------------------

struct Abelianization {
  std::size_t free_rank = 0;        // Z_p summands
  std::vector<unsigned> torsion;    // exponents e, ascending: summands Z/p^e
  std::string to_string(std::uint64_t p) const;
};

// Invariant factors of the exponent-sum matrix over Z_p. PrecisionError when
// an elimination step depends on a valuation that is not determined at the
// working precision.
Abelianization abelianization(const Presentation& pr);

// ---- Predicted cohomology -------------------------------------------------------

struct PredictedCohomology {
  std::vector<long long> betti; // clique counts of the underlying graph
  // degrees 0..2 hold for every p-RAAG; degrees >= 3 assume quadraticity
  static constexpr const char* annotation =
      "unconditional through degree 2; degrees >= 3 valid under quadraticity";
};

PredictedCohomology predicted_cohomology(const PGraph& g);

// ---- Quadraticity ----------------------------------------------------------------

enum class QuadReason { TriangleFree, CompleteUniform, ChordalNonDegenerate, DisjointUnionOfProven };

const char* to_string(QuadReason r);

struct QuadraticityStatus {
  bool proven = false;
  std::optional<QuadReason> reason;
  std::vector<std::string> diagnostics; // populated when not proven
};

// ---- Completion search -------------------------------------------------------------

struct CompletionSearch {
  std::vector<long long> units = {1, -1, 2, -2}; // candidate label = 0 or u * p^j
  unsigned max_exponent = 2;                     // 1 <= j <= max_exponent
  unsigned refutation_precision = 3;             // forced >= 3 (>= 5 when p = 2)
  std::uint64_t max_assignments = 4000000;       // budget per direction
};

struct CompletionOutcome {
  enum class Kind { Completed, RefutedModPk, Inconclusive };
  Kind kind = Kind::Inconclusive;
  std::optional<PGraph> completed; // Completed: input + exact labels on the new edges
  unsigned refuted_mod = 0;        // RefutedModPk: the exponent k
  std::string note;
};

// Completed is sound: candidate labels are exact integers and every triple
// system is verified in exact arithmetic. RefutedModPk is sound: exhaustive
// enumeration of all valuation->=1 residues mod p^k. Anything else is
// Inconclusive.
CompletionOutcome completion_search(const PGraph& g, const CompletionSearch& search = {});

QuadraticityStatus quadraticity_status(const PGraph& g, const CompletionSearch& search = {});

// ---- Cyclotomic orientation check ---------------------------------------------------

struct CyclotomicTable {
  // kappa[e] = (eigenvalue at the origin vertex, eigenvalue at the terminus)
  std::vector<std::pair<TruncatedPadic, TruncatedPadic>> kappa;
  // true: all incident eigenvalues agree; false: provable mismatch;
  // nullopt: agreement undecidable at precision
  std::vector<std::optional<bool>> vertex_consistent;

  // False on any provable mismatch; PrecisionError when the only failures
  // are undecidable.
  bool cyclotomic() const;
};

// Edge (x_i, x_j) with label (a, b) acts on the derived direction
// w = a x_i + b x_j by [x_i, w] = b w and [x_j, w] = -a w; the graph is
// cyclotomic iff the eigenvalues agree at every vertex.
CyclotomicTable cyclotomic_check(const PGraph& g);

} // namespace praag
