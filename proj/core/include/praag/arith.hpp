#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "praag/errors.hpp"

namespace praag {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

bool is_prime(std::uint64_t n);

// ---- F_p helpers -----------------------------------------------------------

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m);
// Inverse of a modulo m, requiring gcd(a, m) = 1.
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m);
// Canonical residue of a signed value.
std::uint64_t residue_mod(long long v, std::uint64_t m);

// ---- Dense matrices over F_p ----------------------------------------------

struct FpMatrix {
  std::uint64_t p = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint64_t> data; // row-major, entries in [0, p)

  FpMatrix() = default;
  FpMatrix(std::uint64_t p_, std::size_t r, std::size_t c);

  std::uint64_t& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  std::uint64_t at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  void set_signed(std::size_t r, std::size_t c, long long v) { at(r, c) = residue_mod(v, p); }
};

struct RrefResult {
  FpMatrix reduced;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};

// Reduced row echelon form over F_p. Deterministic: scans columns left to
// right, picks the first nonzero pivot row.
RrefResult fp_rref(const FpMatrix& m);

std::size_t fp_rank(const FpMatrix& m);

FpMatrix fp_mul(const FpMatrix& a, const FpMatrix& b);

// Kernel basis in free-variable form: vector f has 1 at its free column and
// 0 at every other free column, so kernel coordinates can be read off the
// free-column entries directly.
std::vector<std::vector<std::uint64_t>> fp_kernel_basis(const FpMatrix& m);

// One solution of m x = rhs, if consistent.
std::optional<std::vector<std::uint64_t>> fp_solve(const FpMatrix& m,
                                                   const std::vector<std::uint64_t>& rhs);

// Rank of a matrix with exact rational entries.
std::size_t rational_rank(std::vector<std::vector<Rat>> m);

// ---- Smith normal form over the integers -----------------------------------

// Invariant factors d_1 | d_2 | ... of an integer matrix, min(rows, cols)
// entries, nonnegative, zeros last. Internals use exact big integers.
std::vector<BigInt> smith_normal_form(const std::vector<std::vector<long long>>& m);

// ---- Exact rational power series -------------------------------------------

struct IntSeries {
  std::vector<Rat> coeffs; // coeffs[i] multiplies T^i

  IntSeries() = default;
  explicit IntSeries(std::vector<Rat> c) : coeffs(std::move(c)) {}
  static IntSeries from_ints(const std::vector<long long>& c);
  std::size_t degree_bound() const { return coeffs.size(); }
};

// First n+1 coefficients of 1/s. Requires s to have constant term 1.
IntSeries series_reciprocal(const IntSeries& s, std::size_t n);

// ---- Truncated p-adic scalars -----------------------------------------------

struct Valuation {
  bool known = false;    // false: only a lower bound is available
  bool infinite = false; // exact zero
  unsigned value = 0;    // valuation if known, else the lower bound k
};

// A coset value + O(p^k) in Z_p. `exact` holds the integer when the scalar is
// known exactly (generalizes the exact-zero flag); residue stays canonical in
// [0, p^k) regardless.
class TruncatedPadic {
public:
  TruncatedPadic() = default;
  static TruncatedPadic from_exact(std::uint64_t p, unsigned k, long long value);
  static TruncatedPadic from_residue(std::uint64_t p, unsigned k, long long value);
  static TruncatedPadic exact_zero(std::uint64_t p, unsigned k) { return from_exact(p, k, 0); }

  std::uint64_t p() const { return p_; }
  unsigned k() const { return k_; }
  std::uint64_t modulus() const { return pk_; }
  std::uint64_t residue() const { return residue_; }
  bool is_exact() const { return exact_.has_value(); }
  long long exact_value() const; // requires is_exact()
  bool is_exact_zero() const { return exact_ && *exact_ == 0; }

  Valuation valuation() const;
  // Valuation that must be fully determined; throws PrecisionError otherwise.
  unsigned known_valuation(const std::string& context) const;

  TruncatedPadic operator+(const TruncatedPadic& o) const;
  TruncatedPadic operator-(const TruncatedPadic& o) const;
  TruncatedPadic operator*(const TruncatedPadic& o) const;
  TruncatedPadic operator-() const;

  bool residue_equal(const TruncatedPadic& o) const;
  // Three-way comparison: true/false when decidable, nullopt when the residues
  // agree but at least one side is inexact.
  std::optional<bool> decide_equal(const TruncatedPadic& o) const;

  // Residue is nonzero mod p^k (hence the value is provably nonzero).
  bool provably_nonzero() const { return residue_ != 0; }
  // Zero / nonzero / undecidable at this precision.
  std::optional<bool> decide_zero() const;

  std::string to_string() const;

private:
  std::uint64_t p_ = 5;
  unsigned k_ = 1;
  std::uint64_t pk_ = 5;
  std::uint64_t residue_ = 0;
  std::optional<long long> exact_;

  void check_compatible(const TruncatedPadic& o) const;
};

// p^k as uint64, validating against overflow.
std::uint64_t padic_modulus(std::uint64_t p, unsigned k);

// Residue mod p^k of an exact rational whose denominator is coprime to p.
std::uint64_t rat_residue(const Rat& x, std::uint64_t p, unsigned k);

// "a/b", or "a" when the denominator is 1.
std::string rat_string(const Rat& x);

unsigned int_valuation(std::uint64_t p, long long v); // requires v != 0

} // namespace praag
