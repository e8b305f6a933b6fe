#include "praag/arith.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>

#include "praag/config.hpp"

namespace praag {

std::uint64_t max_matrix_cells() {
  static const std::uint64_t cached = [] {
    if (const char* env = std::getenv("PRAAG_MAX_MATRIX")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
    }
    return std::uint64_t{64} * 1024 * 1024;
  }();
  return cached;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return (a + b) % m;
}
std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return (a + m - b % m) % m;
}
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  long long t = 0, newt = 1;
  long long r = static_cast<long long>(m), newr = static_cast<long long>(a % m);
  while (newr != 0) {
    long long q = r / newr;
    std::swap(t -= q * newt, newt);
    std::swap(r -= q * newr, newr);
  }
  if (r != 1) throw ValidationError("inv_mod: value not invertible");
  return residue_mod(t, m);
}

std::uint64_t residue_mod(long long v, std::uint64_t m) {
  long long mm = static_cast<long long>(m);
  long long r = v % mm;
  if (r < 0) r += mm;
  return static_cast<std::uint64_t>(r);
}

// ---- FpMatrix ----------------------------------------------------------------

FpMatrix::FpMatrix(std::uint64_t p_, std::size_t r, std::size_t c)
    : p(p_), rows(r), cols(c), data(r * c, 0) {
  if (!is_prime(p_)) throw ValidationError("FpMatrix: p must be prime");
  if (static_cast<std::uint64_t>(r) * c > max_matrix_cells())
    throw ResourceError("FpMatrix exceeds PRAAG_MAX_MATRIX cell budget");
}

RrefResult fp_rref(const FpMatrix& m) {
  RrefResult out;
  out.reduced = m;
  FpMatrix& a = out.reduced;
  const std::uint64_t p = a.p;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < a.cols && pivot_row < a.rows; ++col) {
    std::size_t sel = pivot_row;
    while (sel < a.rows && a.at(sel, col) == 0) ++sel;
    if (sel == a.rows) continue;
    if (sel != pivot_row)
      for (std::size_t c = 0; c < a.cols; ++c) std::swap(a.at(sel, c), a.at(pivot_row, c));
    const std::uint64_t inv = inv_mod(a.at(pivot_row, col), p);
    for (std::size_t c = col; c < a.cols; ++c) a.at(pivot_row, c) = mul_mod(a.at(pivot_row, c), inv, p);
    for (std::size_t r = 0; r < a.rows; ++r) {
      if (r == pivot_row) continue;
      const std::uint64_t f = a.at(r, col);
      if (f == 0) continue;
      for (std::size_t c = col; c < a.cols; ++c)
        a.at(r, c) = sub_mod(a.at(r, c), mul_mod(f, a.at(pivot_row, c), p), p);
    }
    out.pivot_cols.push_back(col);
    ++pivot_row;
  }
  out.rank = pivot_row;
  return out;
}

std::size_t fp_rank(const FpMatrix& m) { return fp_rref(m).rank; }

FpMatrix fp_mul(const FpMatrix& a, const FpMatrix& b) {
  if (a.p != b.p) throw ValidationError("fp_mul: mismatched moduli");
  if (a.cols != b.rows) throw ValidationError("fp_mul: mismatched shapes");
  FpMatrix out(a.p, a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const std::uint64_t v = a.at(i, k);
      if (v == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j)
        out.at(i, j) = add_mod(out.at(i, j), mul_mod(v, b.at(k, j), a.p), a.p);
    }
  return out;
}

std::vector<std::vector<std::uint64_t>> fp_kernel_basis(const FpMatrix& m) {
  const RrefResult r = fp_rref(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (const std::size_t c : r.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<std::uint64_t>> basis;
  for (std::size_t f = 0; f < m.cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<std::uint64_t> v(m.cols, 0);
    v[f] = 1;
    for (std::size_t row = 0; row < r.rank; ++row)
      v[r.pivot_cols[row]] = sub_mod(0, r.reduced.at(row, f), m.p);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<std::uint64_t>> fp_solve(const FpMatrix& m,
                                                   const std::vector<std::uint64_t>& rhs) {
  if (rhs.size() != m.rows) throw ValidationError("fp_solve: rhs size mismatch");
  FpMatrix aug(m.p, m.rows, m.cols + 1);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols) = rhs[i] % m.p;
  }
  const RrefResult r = fp_rref(aug);
  std::vector<std::uint64_t> x(m.cols, 0);
  for (std::size_t row = 0; row < r.rank; ++row) {
    if (r.pivot_cols[row] == m.cols) return std::nullopt; // pivot in the rhs column
    x[r.pivot_cols[row]] = r.reduced.at(row, m.cols);
  }
  return x;
}

std::size_t rational_rank(std::vector<std::vector<Rat>> m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t sel = rank;
    while (sel < rows && m[sel][col] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(m[sel], m[rank]);
    const Rat inv = Rat(1) / m[rank][col];
    for (std::size_t c = col; c < cols; ++c) m[rank][c] *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      const Rat f = m[r][col];
      for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

// ---- Smith normal form ---------------------------------------------------------

namespace {

// Position of a nonzero entry of minimal absolute value in the trailing block.
bool find_pivot(const std::vector<std::vector<BigInt>>& a, std::size_t t,
                std::size_t& pr, std::size_t& pc) {
  bool found = false;
  BigInt best;
  for (std::size_t r = t; r < a.size(); ++r)
    for (std::size_t c = t; c < a[r].size(); ++c) {
      if (a[r][c] == 0) continue;
      BigInt v = abs(a[r][c]);
      if (!found || v < best) {
        found = true;
        best = v;
        pr = r;
        pc = c;
      }
    }
  return found;
}

} // namespace

std::vector<BigInt> smith_normal_form(const std::vector<std::vector<long long>>& m0) {
  const std::size_t rows = m0.size();
  const std::size_t cols = rows ? m0[0].size() : 0;
  for (const auto& row : m0)
    if (row.size() != cols) throw ValidationError("smith_normal_form: ragged matrix");
  const std::size_t n = std::min(rows, cols);
  std::vector<std::vector<BigInt>> a(rows, std::vector<BigInt>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) a[r][c] = m0[r][c];

  std::vector<BigInt> inv;
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t pr = t, pc = t;
    if (!find_pivot(a, t, pr, pc)) break;
    std::swap(a[pr], a[t]);
    for (std::size_t r = t; r < rows; ++r) std::swap(a[r][pc], a[r][t]);

    // Clear row and column t; restart when a reduction shrinks the pivot.
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (std::size_t r = t + 1; r < rows; ++r) {
        if (a[r][t] == 0) continue;
        BigInt q = a[r][t] / a[t][t];
        for (std::size_t c = t; c < cols; ++c) a[r][c] -= q * a[t][c];
        if (a[r][t] != 0) { // remainder strictly smaller: swap up and retry
          std::swap(a[r], a[t]);
          dirty = true;
        }
      }
      for (std::size_t c = t + 1; c < cols; ++c) {
        if (a[t][c] == 0) continue;
        BigInt q = a[t][c] / a[t][t];
        for (std::size_t r = t; r < rows; ++r) a[r][c] -= q * a[r][t];
        if (a[t][c] != 0) {
          for (std::size_t r = t; r < rows; ++r) std::swap(a[r][c], a[r][t]);
          dirty = true;
        }
      }
    }

    // Divisibility: fold any entry not divisible by the pivot into column t.
    bool fixed = true;
    while (fixed) {
      fixed = false;
      for (std::size_t r = t + 1; r < rows && !fixed; ++r)
        for (std::size_t c = t + 1; c < cols && !fixed; ++c)
          if (a[r][c] % a[t][t] != 0) {
            for (std::size_t cc = t; cc < cols; ++cc) a[t][cc] += a[r][cc];
            fixed = true;
          }
      if (fixed) {
        // Re-clear after the row addition.
        bool dirty2 = true;
        while (dirty2) {
          dirty2 = false;
          for (std::size_t c = t + 1; c < cols; ++c) {
            if (a[t][c] == 0) continue;
            BigInt q = a[t][c] / a[t][t];
            for (std::size_t r = t; r < rows; ++r) a[r][c] -= q * a[r][t];
            if (a[t][c] != 0) {
              for (std::size_t r = t; r < rows; ++r) std::swap(a[r][c], a[r][t]);
              dirty2 = true;
            }
          }
          for (std::size_t r = t + 1; r < rows; ++r) {
            if (a[r][t] == 0) continue;
            BigInt q = a[r][t] / a[t][t];
            for (std::size_t c = t; c < cols; ++c) a[r][c] -= q * a[t][c];
            if (a[r][t] != 0) {
              std::swap(a[r], a[t]);
              dirty2 = true;
            }
          }
        }
      }
    }
    inv.push_back(abs(a[t][t]));
  }
  inv.resize(n, BigInt(0));
  return inv;
}

// ---- IntSeries -----------------------------------------------------------------

IntSeries IntSeries::from_ints(const std::vector<long long>& c) {
  std::vector<Rat> v;
  v.reserve(c.size());
  for (long long x : c) v.emplace_back(x);
  return IntSeries(std::move(v));
}

IntSeries series_reciprocal(const IntSeries& s, std::size_t n) {
  if (s.coeffs.empty() || s.coeffs[0] != 1)
    throw ValidationError("series_reciprocal: constant term must be 1");
  std::vector<Rat> q(n + 1);
  q[0] = 1;
  for (std::size_t m = 1; m <= n; ++m) {
    Rat acc = 0;
    const std::size_t top = std::min(m, s.coeffs.size() - 1);
    for (std::size_t i = 1; i <= top; ++i) acc += s.coeffs[i] * q[m - i];
    q[m] = -acc;
  }
  return IntSeries(std::move(q));
}

// ---- TruncatedPadic -------------------------------------------------------------

std::uint64_t padic_modulus(std::uint64_t p, unsigned k) {
  if (!is_prime(p)) throw ValidationError("padic: p must be prime");
  if (k == 0) throw ValidationError("padic: precision must be at least 1");
  std::uint64_t pk = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (pk > (std::uint64_t{1} << 62) / p)
      throw ValidationError("padic: p^k exceeds the representable range");
    pk *= p;
  }
  return pk;
}

unsigned int_valuation(std::uint64_t p, long long v) {
  if (v == 0) throw ValidationError("int_valuation: zero has no finite valuation");
  unsigned long long a = static_cast<unsigned long long>(v < 0 ? -(v + 1) + 1ULL : v);
  unsigned n = 0;
  while (a % p == 0) {
    a /= p;
    ++n;
  }
  return n;
}

TruncatedPadic TruncatedPadic::from_exact(std::uint64_t p, unsigned k, long long value) {
  TruncatedPadic t;
  t.p_ = p;
  t.k_ = k;
  t.pk_ = padic_modulus(p, k);
  t.residue_ = residue_mod(value, t.pk_);
  t.exact_ = value;
  return t;
}

TruncatedPadic TruncatedPadic::from_residue(std::uint64_t p, unsigned k, long long value) {
  TruncatedPadic t;
  t.p_ = p;
  t.k_ = k;
  t.pk_ = padic_modulus(p, k);
  t.residue_ = residue_mod(value, t.pk_);
  t.exact_.reset();
  return t;
}

long long TruncatedPadic::exact_value() const {
  if (!exact_) throw PrecisionError("padic scalar is not exactly known");
  return *exact_;
}

Valuation TruncatedPadic::valuation() const {
  Valuation v;
  if (exact_) {
    v.known = true;
    if (*exact_ == 0) {
      v.infinite = true;
    } else {
      v.value = int_valuation(p_, *exact_);
    }
    return v;
  }
  if (residue_ != 0) {
    v.known = true;
    v.value = int_valuation(p_, static_cast<long long>(residue_));
    return v;
  }
  v.known = false;
  v.value = k_; // only the bound v >= k is certain
  return v;
}

unsigned TruncatedPadic::known_valuation(const std::string& context) const {
  Valuation v = valuation();
  if (!v.known)
    throw PrecisionError(context + ": valuation undetermined at precision " + std::to_string(k_));
  if (v.infinite)
    throw PrecisionError(context + ": exact zero has infinite valuation");
  return v.value;
}

void TruncatedPadic::check_compatible(const TruncatedPadic& o) const {
  if (p_ != o.p_ || k_ != o.k_)
    throw ValidationError("padic arithmetic requires matching prime and precision");
}

namespace {
std::optional<long long> checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) return std::nullopt;
  return r;
}
std::optional<long long> checked_sub(long long a, long long b) {
  long long r;
  if (__builtin_sub_overflow(a, b, &r)) return std::nullopt;
  return r;
}
std::optional<long long> checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) return std::nullopt;
  return r;
}
} // namespace

TruncatedPadic TruncatedPadic::operator+(const TruncatedPadic& o) const {
  check_compatible(o);
  TruncatedPadic t = *this;
  t.residue_ = add_mod(residue_, o.residue_, pk_);
  t.exact_.reset();
  if (exact_ && o.exact_)
    if (auto v = checked_add(*exact_, *o.exact_)) t.exact_ = v;
  return t;
}

TruncatedPadic TruncatedPadic::operator-(const TruncatedPadic& o) const {
  check_compatible(o);
  TruncatedPadic t = *this;
  t.residue_ = sub_mod(residue_, o.residue_, pk_);
  t.exact_.reset();
  if (exact_ && o.exact_)
    if (auto v = checked_sub(*exact_, *o.exact_)) t.exact_ = v;
  return t;
}

TruncatedPadic TruncatedPadic::operator*(const TruncatedPadic& o) const {
  check_compatible(o);
  TruncatedPadic t = *this;
  t.residue_ = mul_mod(residue_, o.residue_, pk_);
  t.exact_.reset();
  if (exact_ && o.exact_)
    if (auto v = checked_mul(*exact_, *o.exact_)) t.exact_ = v;
  // An exact-zero factor kills the product even when the other side overflowed.
  if ((exact_ && *exact_ == 0) || (o.exact_ && *o.exact_ == 0)) t.exact_ = 0;
  return t;
}

TruncatedPadic TruncatedPadic::operator-() const {
  TruncatedPadic t = *this;
  t.residue_ = sub_mod(0, residue_, pk_);
  t.exact_.reset();
  if (exact_ && *exact_ != std::numeric_limits<long long>::min()) t.exact_ = -*exact_;
  return t;
}

bool TruncatedPadic::residue_equal(const TruncatedPadic& o) const {
  check_compatible(o);
  return residue_ == o.residue_;
}

std::optional<bool> TruncatedPadic::decide_equal(const TruncatedPadic& o) const {
  check_compatible(o);
  if (residue_ != o.residue_) return false;
  if (exact_ && o.exact_) return *exact_ == *o.exact_;
  return std::nullopt;
}

std::optional<bool> TruncatedPadic::decide_zero() const {
  if (residue_ != 0) return false;
  if (exact_) return *exact_ == 0;
  return std::nullopt;
}

std::string TruncatedPadic::to_string() const {
  std::ostringstream os;
  if (exact_) {
    os << *exact_;
  } else {
    os << residue_ << "~";
  }
  return os.str();
}

std::uint64_t rat_residue(const Rat& x, std::uint64_t p, unsigned k) {
  const std::uint64_t pk = padic_modulus(p, k);
  const BigInt num = numerator(x);
  const BigInt den = denominator(x); // canonical: positive
  if (den % p == 0) throw ValidationError("rat_residue: denominator not coprime to p");
  const BigInt pkb(pk);
  BigInt nr = num % pkb;
  if (nr < 0) nr += pkb;
  const std::uint64_t n64 = nr.convert_to<std::uint64_t>();
  const std::uint64_t d64 = (den % pkb).convert_to<std::uint64_t>();
  return mul_mod(n64, inv_mod(d64, pk), pk);
}

std::string rat_string(const Rat& x) {
  std::string s = numerator(x).str();
  if (denominator(x) != 1) s += "/" + denominator(x).str();
  return s;
}

} // namespace praag
