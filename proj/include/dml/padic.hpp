#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "dml/residue.hpp"

namespace dml {

/// Capped-precision p-adic number p^v * u with u a unit known modulo p^k.
///
/// A value whose relative precision has run out (k = 0) is a zero at the
/// working precision: only v <= valuation is known. Exact zero carries no
/// precision loss.
class PadicNumber {
 public:
  static PadicNumber exact_zero(std::uint64_t p);
  /// q to absolute precision `abs_prec` (q must have p-power denominators or
  /// denominators prime to p; anything is accepted as a p-adic number).
  static PadicNumber from_rational(const mpq_class& q, std::uint64_t p, long abs_prec);
  /// Residue r modulo p^abs_prec.
  static PadicNumber from_residue(const mpz_class& r, std::uint64_t p, long abs_prec);
  /// The value p^shift * r with r known modulo p^abs_prec (so absolute precision abs_prec + shift).
  static PadicNumber from_scaled_residue(const mpz_class& r, long shift, std::uint64_t p, long abs_prec);

  std::uint64_t prime() const { return p_; }
  bool is_exact_zero() const { return exact_zero_; }
  /// True when no nonzero digit is known (exact zero or O(p^v)).
  bool is_zero_at_precision() const { return exact_zero_ || rel_ == 0; }
  /// v with |x| = p^-v; kInfiniteValuation for exact zero. For an O(p^v)
  /// value this is a lower bound.
  long valuation() const { return exact_zero_ ? kInfiniteValuation : v_; }
  long relative_precision() const { return exact_zero_ ? kInfiniteValuation : rel_; }
  long absolute_precision() const { return exact_zero_ ? kInfiniteValuation : v_ + rel_; }
  const mpz_class& unit() const { return u_; }

  PadicNumber operator-() const;
  friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);
  /// Division by a value with known nonzero digits; throws PrecisionExhausted otherwise.
  friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b);

  /// Same value, reduced to a lower absolute precision.
  PadicNumber with_absolute_precision(long abs_prec) const;
  /// A rational representative p^v * u.
  mpq_class representative() const;
  /// x mod p^e; requires v >= 0 (or zero) and e <= absolute_precision().
  mpz_class residue(long e) const;
  /// Agreement modulo p^e.
  bool congruent(const PadicNumber& other, long e) const;

  std::string to_string() const;

 private:
  PadicNumber(std::uint64_t p, bool exact_zero, long v, mpz_class u, long rel);
  static PadicNumber normalized(std::uint64_t p, mpz_class value, long shift, long abs_prec);

  std::uint64_t p_;
  bool exact_zero_;
  long v_;
  mpz_class u_;
  long rel_;
};

long valuation(const PadicNumber& x);

/// R = p^(-1/(p-1)), or 1 in residue characteristic zero (p = 0).
/// Norm comparisons against p^-d are done on exact exponents.
class RConstant {
 public:
  explicit RConstant(std::uint64_t p) : p_(p) {}

  std::uint64_t prime() const { return p_; }
  /// The exponent of p, -1/(p-1); zero when p = 0.
  mpq_class exponent() const;
  double value() const;
  /// p^-d < R, i.e. d*(p-1) > 1.
  bool exceeds_norm(long d) const;
  /// |i!| >= R^i, i.e. v_p(i!) * (p-1) <= i.
  bool bounds_factorial(std::uint64_t i) const;

 private:
  std::uint64_t p_;
};

}  // namespace dml
