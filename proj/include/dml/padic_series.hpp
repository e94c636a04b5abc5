#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dml/multipoly.hpp"
#include "dml/padic.hpp"

namespace dml {

/// One-variable p-adic power series on the closed unit disc with a certified
/// uniform error bound.
///
/// Coefficient i is stored as C_i / p^V with C_i an integer modulo p^(tau+V).
/// The represented function differs from the stored polynomial by a series
/// whose coefficients all have valuation >= tau: this covers both the
/// precision lost in the stored digits and everything above degree D.
class PadicSeries {
 public:
  PadicSeries(std::uint64_t p, long scale, long tail, std::vector<mpz_class> scaled_coeffs);

  /// Exact rational coefficients (p-adically bounded), rounded to absolute precision tau.
  static PadicSeries from_rationals(std::span<const mpq_class> coeffs, std::uint64_t p, long tail);
  static PadicSeries constant(const PadicNumber& c, long tail);
  /// The identity series T.
  static PadicSeries variable(std::uint64_t p, long tail);

  std::uint64_t prime() const { return p_; }
  long scale() const { return scale_; }
  long tail() const { return tail_; }
  std::size_t truncation_degree() const { return c_.empty() ? 0 : c_.size() - 1; }
  std::size_t size() const { return c_.size(); }
  const std::vector<mpz_class>& scaled_coefficients() const { return c_; }

  PadicNumber coefficient(std::size_t i) const;
  /// Valuation of coefficient i when it is certifiably nonzero (below the tail).
  std::optional<long> certified_valuation(std::size_t i) const;
  /// Lower bound for the Gauss valuation of the represented function.
  long gauss_valuation() const;

  PadicSeries operator-() const;
  friend PadicSeries operator+(const PadicSeries& a, const PadicSeries& b);
  friend PadicSeries operator-(const PadicSeries& a, const PadicSeries& b);
  /// Product truncated at max(D_a, D_b); the tail absorbs what is dropped.
  friend PadicSeries operator*(const PadicSeries& a, const PadicSeries& b);
  PadicSeries scaled(const PadicNumber& c) const;

  /// Lowers the tail (never raises it).
  PadicSeries with_tail(long tail) const;
  /// Drops coefficients above degree d, folding them into the tail.
  PadicSeries truncated(std::size_t d) const;

  /// Value at an integer (indeed any p-adic integer) T = n, to absolute precision tau.
  PadicNumber eval(const mpz_class& n) const;
  /// The series U -> S(c + p^j U).
  PadicSeries recentered(const mpz_class& c, long j) const;

  std::string to_string() const;

 private:
  void normalize();

  std::uint64_t p_;
  long scale_;
  long tail_;
  std::vector<mpz_class> c_;
};

/// Coefficients (low degree first) of binom(T, i) = T(T-1)...(T-i+1)/i!,
/// truncated to degree D.
std::vector<mpq_class> mahler_term(std::uint64_t i, std::uint64_t D);

/// Lower bound for v(a_i / i!) given v(a_i) >= d*i: d*i - v_p(i!).
long mahler_term_valuation(std::uint64_t i, long d, std::uint64_t p);
/// Certified lower bound for min over i > D of d*i - v_p(i!), valid when d*(p-1) > 1.
long mahler_tail_valuation(std::uint64_t D, long d, std::uint64_t p);

/// Truncation plan for a Mahler series whose i-th difference has valuation >= d*i.
struct MahlerPlan {
  std::uint64_t degree;  ///< D: last Mahler index kept
  long working_precision;  ///< digits needed on the differences: tau + v_p(D!)
  long tail;  ///< achieved tail, >= requested
};
MahlerPlan plan_mahler(std::uint64_t p, long d, long tail);

/// Assembles sum_{i<=D} binom(T,i) a_i from differences a_i known modulo
/// p^W (W = working precision), with tail contribution above D bounded by
/// mahler_tail_valuation.
PadicSeries from_mahler(std::span<const mpz_class> diffs, std::uint64_t p, long working_precision, long d);

/// g evaluated on one-variable series arguments.
PadicSeries compose_polynomial(const MultiPoly& g, std::span<const PadicSeries> args);

/// Strassmann count for a series; nullopt is the Degenerate outcome.
struct StrassmannBound {
  std::optional<std::size_t> bound;
  long dominant_valuation = 0;
  bool degenerate() const { return !bound.has_value(); }
};
StrassmannBound strassmann_bound(const PadicSeries& s);

struct IntegerZeros {
  std::vector<long> zeros;
  bool resolved = false;
  std::size_t bound = 0;
  /// Deepest residue-disc level used to separate zeros.
  long depth = 0;
};

struct ZeroSearchOptions {
  long max_depth = 4;
  /// Zeros certified by other means (e.g. exact backward points at T < 0).
  /// They count against disc bounds but are not reported as hits.
  std::vector<long> known_zeros;
};

/// Hits of the exact oracle on T = 0..n_max, resolved against the Strassmann
/// budget. When hits fall short of the bound, residue discs T = c mod p^j are
/// examined separately; a disc is settled once its own bound equals its hits.
/// Throws PrecisionExhausted when the series (or a disc) is Degenerate.
IntegerZeros find_integer_zeros(const PadicSeries& s, long n_max, const std::function<bool(long)>& oracle,
                                const ZeroSearchOptions& opts = {});

}  // namespace dml
