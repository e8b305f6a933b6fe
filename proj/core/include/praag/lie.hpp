#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "praag/arith.hpp"
#include "praag/graph.hpp"

namespace praag {

// Raised when a bracket-degree cutoff cannot be certified: the result moved
// between caps D and D+1, or a retained term failed the p-integrality check.
class TruncationUnstable : public ResourceError {
public:
  explicit TruncationUnstable(const std::string& what) : ResourceError(what) {}
};

// Oriented triangle frame
//   [x1,x2] = a1 x1 + a2 x2,  [x2,x3] = b2 x2 + b3 x3,  [x3,x1] = g3 x3 + g1 x1
// with all coefficients of valuation >= 1 (>= 2 when p = 2).
struct TriangleLabels {
  TruncatedPadic alpha1, alpha2, beta2, beta3, gamma1, gamma3;

  static TriangleLabels from_ints(std::uint64_t p, unsigned k, long long a1, long long a2,
                                  long long b2, long long b3, long long g1, long long g3);
  std::array<TruncatedPadic, 6> as_array() const;
  void validate() const;
};

// Values of the three consistency equations
//   a1*b2 - g1*b3,   g1*a2 - b2*g3,   a1*g3 - a2*b3.
std::array<TruncatedPadic, 3> triangle_jacobi_values(const TriangleLabels& t);

// True iff all three equations vanish. False as soon as one equation has a
// nonzero residue; PrecisionError when an equation is 0 mod p^k without being
// provably zero.
bool triangle_jacobi(const TriangleLabels& t);

enum class Family { L1, L2, L3, L4, Lstar };

// Isomorphism-family label with parameters:
//   L1(eta, rho, mu, lambda): [x,y] = eta y, [y,z] = mu y, [z,x] = lambda z + rho x,
//                             subject to eta*rho = mu*lambda
//   L2(eta, mu):              [y,z] = eta y + mu z
//   L3(eta, mu):              [y,z] = eta z, [z,x] = mu z
//   L4(eta, mu, lambda):      [x,y] = eta x + mu y, [y,z] = lambda y - eta z,
//                             [z,x] = -lambda x - mu z   (eta*mu*lambda != 0)
//   Lstar(eta, mu, lambda):   as L4 with all signs positive (eta*mu*lambda != 0)
struct FamilyTag {
  Family family = Family::L1;
  std::vector<TruncatedPadic> params;

  std::string to_string() const;
};

// Family of the lattice defined by the labels, or nullopt when the
// consistency system fails (the labels do not define a Lie lattice).
// PrecisionError when a vanishing decision is out of reach at precision k.
std::optional<FamilyTag> classify_triangle(const TriangleLabels& t);

// Z_p-Lie lattice with [L,L] <= pL, given by structure constants on a basis.
struct PowerfulLieLattice {
  std::uint64_t p = 5;
  unsigned precision = 4;
  std::size_t rank = 0;
  // c[i][j] = coordinates of [x_i, x_j]; antisymmetric, zero diagonal.
  std::vector<std::vector<std::vector<TruncatedPadic>>> c;

  static PowerfulLieLattice abelian(std::uint64_t p, unsigned k, std::size_t rank);

  std::vector<TruncatedPadic> zero_vector() const;
  // Sets c[i][j] = v and c[j][i] = -v.
  void set_pair(std::size_t i, std::size_t j, std::vector<TruncatedPadic> v);
  std::vector<TruncatedPadic> bracket(const std::vector<TruncatedPadic>& u,
                                      const std::vector<TruncatedPadic>& v) const;
  // Shapes, entry valuations, antisymmetry, Jacobi identity on basis triples.
  void validate() const;
};

// Rank-3 lattice carrying the triangle frame structure constants. Does not
// run the consistency system; validate() does.
PowerfulLieLattice triangle_lattice(const TriangleLabels& t);

// Canonical lattice of a family tag, in the frame listed at FamilyTag.
PowerfulLieLattice family_lattice(const FamilyTag& tag);

// True iff the derived subalgebra is abelian: the span of the c[i][j] must
// close to zero brackets. PrecisionError on undecidable coordinates.
bool is_metabelian(const PowerfulLieLattice& L);

struct TripleFailure {
  std::array<std::size_t, 3> triple; // vertex indices, increasing
};

// Triangle frame of an ordered vertex triple whose three pairs are all edges,
// with the reorientation bookkeeping for arbitrarily oriented labels.
TriangleLabels triangle_frame(const PGraph& g, std::size_t v1, std::size_t v2, std::size_t v3);

// Structure constants of a complete p-graph; valid iff every vertex triple
// passes the consistency system. Returns the first failing triple otherwise.
std::variant<PowerfulLieLattice, TripleFailure> complete_graph_lattice(const PGraph& g);

// The 9x9 linear system in the correction coefficients gamma_11..gamma_33
// driven by the three defects (d1, d2, d3), together with its closed-form
// solution; p odd. The solution is verified against the matrix mod p.
struct Sl2System {
  std::vector<std::vector<long long>> entries; // 9x9, entries in {-1, 0, 1}
  FpMatrix matrix;                             // entries mod p
  std::vector<std::uint64_t> rhs;              // mod p
  std::vector<std::uint64_t> solution;         // mod p
};

Sl2System sl2_system(long long d1, long long d2, long long d3, std::uint64_t p);

// ---- Truncated Campbell-Hausdorff -------------------------------------------

using QVec = std::vector<Rat>;

struct BchOptions {
  unsigned degree_cap = 0; // 0: precision + 3
};

// Per-degree contributions Z_1..Z_D to log(exp(X)exp(Y)) evaluated in L over
// exact rationals (Dynkin projection of the associative logarithm). Inputs
// and structure constants must be p-integral; every retained degree is
// checked for p-integrality (TruncationUnstable otherwise). p odd.
std::vector<QVec> bch_degree_terms(const PowerfulLieLattice& L, const QVec& X, const QVec& Y,
                                   unsigned degree_cap);

// Sum of the degree terms.
QVec bch_rational(const PowerfulLieLattice& L, const QVec& X, const QVec& Y,
                  unsigned degree_cap);

// Z with exp(X)exp(Y) = exp(Z) mod p^k. Requires exact inputs and exact
// structure constants; raises TruncationUnstable when the residues differ
// between degree caps D and D+1.
std::vector<TruncatedPadic> bch_multiply(const PowerfulLieLattice& L,
                                         const std::vector<TruncatedPadic>& X,
                                         const std::vector<TruncatedPadic>& Y,
                                         BchOptions opts = {});

struct EdgeRelation {
  TruncatedPadic a, b; // [exp x_i, exp x_j] = exp(x_i)^a exp(x_j)^b mod p^k
};

// Recovers the group-relation exponents for a bracket-closed pair, solving
// digit by digit mod p, p^2, ..., p^k; the commutator is g^-1 h^-1 g h.
// Postcondition: v(a), v(b) >= 1 and (a, b) agrees with the bracket
// coefficients mod p^{1 + min valuation}.
EdgeRelation solve_edge_relation(const PowerfulLieLattice& L, std::size_t i, std::size_t j,
                                 BchOptions opts = {});

} // namespace praag
