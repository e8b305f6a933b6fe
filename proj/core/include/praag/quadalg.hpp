#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "praag/arith.hpp"
#include "praag/graph.hpp"

namespace praag {

// Sparse vector over F_p, indices sorted strictly ascending.
using SparseVec = std::vector<std::pair<std::uint32_t, std::uint64_t>>;

// Quadratic algebra T(V)/(Omega) with dim V = generators.size() and Omega a
// subspace of V (x) V given by sparse vectors in row-major coordinates
// (i * d + j). Omega is normalized to a reduced echelon basis at construction.
struct QuadraticAlgebra {
  std::uint64_t p = 5;
  std::vector<std::string> generators;
  std::vector<SparseVec> omega;

  QuadraticAlgebra() = default;
  QuadraticAlgebra(std::uint64_t p_, std::vector<std::string> gens,
                   std::vector<SparseVec> omega_raw);

  std::size_t dim_v() const { return generators.size(); }
  std::size_t omega_rank() const { return omega.size(); }
};

enum class GraphAlgebraKind {
  MildTest,   // one commutator x_i x_j - x_j x_i per edge
  ExteriorOp, // graded-commutative on all pairs, squares, non-edge products killed
};

QuadraticAlgebra graph_algebra(const PGraph& g, GraphAlgebraKind kind);

// Degree-by-degree graded quotient. Candidates for degree n are V (x) A_{n-1};
// the degree-n relations are the image of Omega (x) A_{n-2}. Relation sets
// whose vectors all have at most two terms run on a multiplier union-find
// instead of row reduction.
class HilbertEngine {
public:
  explicit HilbertEngine(QuadraticAlgebra a);

  const QuadraticAlgebra& algebra() const { return alg_; }
  // dim A_0 .. dim A_n.
  std::vector<long long> dims_up_to(std::size_t n);
  long long dim(std::size_t n);

  // Dimension of the image of S * A_{n-1} in A_n, S a subspace of V given by
  // spanning vectors (dense, length dim V).
  std::size_t product_subspace_dim(const std::vector<std::vector<std::uint64_t>>& s,
                                   std::size_t n);

  // Expression of the product (vector in V) * (basis element of A_{n-1}) in the
  // degree-n basis.
  SparseVec multiply_basis(const std::vector<std::uint64_t>& v, std::size_t b, std::size_t n);

private:
  QuadraticAlgebra alg_;
  bool monomial_mode_ = false;
  // pi_[n][candidate]: expression of candidate (i, b) = i * dim_{n-1} + b in
  // the degree-n basis. Degree 0 is implicit (dim 1).
  std::vector<std::vector<SparseVec>> pi_;
  std::vector<long long> dims_;

  void extend();
  void extend_monomial(std::size_t n);
  void extend_general(std::size_t n);
};

std::vector<long long> hilbert_dims(const QuadraticAlgebra& a, std::size_t n);

// ---- Mildness ---------------------------------------------------------------------

struct MildnessReport {
  bool mild = true;
  std::size_t depth = 0;                  // checked through this degree
  std::vector<long long> dims;            // actual dims of the test algebra
  std::vector<long long> series;          // 1 / (1 - dT + rT^2) coefficients
  std::optional<std::size_t> first_mismatch;
};

// Compares dims of the degree-filtration test algebra against the reciprocal
// series; stops at the first mismatch.
MildnessReport mildness_check(const PGraph& g, std::size_t depth = 8);

// ---- Constructions ------------------------------------------------------------------

// Cohomology of a free product: all cross products vanish.
QuadraticAlgebra direct_sum(const QuadraticAlgebra& a, const QuadraticAlgebra& b);
// Graded-commutative tensor product: cross pairs anticommute.
QuadraticAlgebra wedge_product(const QuadraticAlgebra& a, const QuadraticAlgebra& b);

// Exterior algebra on named generators (clique cohomology building block).
QuadraticAlgebra exterior_algebra(std::uint64_t p, std::vector<std::string> gens);

// r <= d^2 / 4, exact.
bool mantel_bound_check(long long d, long long r);

struct GartnerSplit {
  std::vector<std::size_t> v1; // independent side, meets every edge
  std::vector<std::size_t> v2;
};

// First (in subset order) independent vertex set meeting every edge, if any.
std::optional<GartnerSplit> gartner_split_search(const Graph& g);

} // namespace praag
