#include "dml/padic.hpp"

#include <algorithm>
#include <cmath>

#include "dml/errors.hpp"

namespace dml {

PadicNumber::PadicNumber(std::uint64_t p, bool exact_zero, long v, mpz_class u, long rel)
    : p_(p), exact_zero_(exact_zero), v_(v), u_(std::move(u)), rel_(rel) {}

PadicNumber PadicNumber::exact_zero(std::uint64_t p) { return PadicNumber(p, true, 0, 0, 0); }

// value * p^shift known modulo p^abs_prec (absolute).
PadicNumber PadicNumber::normalized(std::uint64_t p, mpz_class value, long shift, long abs_prec) {
  if (value == 0) return PadicNumber(p, false, abs_prec, 0, 0);
  const long vv = padic_valuation(value, p);
  const long v = vv + shift;
  if (v >= abs_prec) return PadicNumber(p, false, abs_prec, 0, 0);
  const long rel = abs_prec - v;
  mpz_class u = value / prime_power(p, vv);
  const mpz_class mod = prime_power(p, rel);
  mpz_mod(u.get_mpz_t(), u.get_mpz_t(), mod.get_mpz_t());
  return PadicNumber(p, false, v, std::move(u), rel);
}

PadicNumber PadicNumber::from_rational(const mpq_class& q, std::uint64_t p, long abs_prec) {
  if (q == 0) return exact_zero(p);
  const long v = padic_valuation(q, p);
  if (v >= abs_prec) return PadicNumber(p, false, abs_prec, 0, 0);
  const long rel = abs_prec - v;
  mpq_class unit = q;
  if (v > 0) unit /= mpq_class(prime_power(p, v));
  if (v < 0) unit *= mpq_class(prime_power(p, -v));
  return PadicNumber(p, false, v, reduce_rational(unit, p, rel), rel);
}

PadicNumber PadicNumber::from_residue(const mpz_class& r, std::uint64_t p, long abs_prec) {
  return normalized(p, r, 0, abs_prec);
}

PadicNumber PadicNumber::from_scaled_residue(const mpz_class& r, long shift, std::uint64_t p, long abs_prec) {
  return normalized(p, r, shift, abs_prec + shift);
}

PadicNumber PadicNumber::operator-() const {
  if (is_zero_at_precision()) return *this;
  return PadicNumber(p_, false, v_, prime_power(p_, rel_) - u_, rel_);
}

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
  if (a.p_ != b.p_) throw FieldMismatch("adding p-adic numbers for different primes");
  if (a.exact_zero_) return b;
  if (b.exact_zero_) return a;
  const long abs = std::min(a.absolute_precision(), b.absolute_precision());
  const long base = std::min(a.v_, b.v_);
  mpz_class sum = a.u_ * prime_power(a.p_, a.v_ - base) + b.u_ * prime_power(a.p_, b.v_ - base);
  if (abs <= base) return PadicNumber(a.p_, false, abs, 0, 0);
  const mpz_class mod = prime_power(a.p_, abs - base);
  mpz_mod(sum.get_mpz_t(), sum.get_mpz_t(), mod.get_mpz_t());
  return PadicNumber::normalized(a.p_, std::move(sum), base, abs);
}

PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
  if (a.p_ != b.p_) throw FieldMismatch("multiplying p-adic numbers for different primes");
  if (a.exact_zero_ || b.exact_zero_) return PadicNumber::exact_zero(a.p_);
  if (a.rel_ == 0 || b.rel_ == 0) {
    // Only a valuation bound survives: |ab| <= p^-(va+vb), and the known
    // digits of the other factor bound the absolute precision.
    const long abs = std::min(a.v_ + b.absolute_precision(), b.v_ + a.absolute_precision());
    return PadicNumber(a.p_, false, abs, 0, 0);
  }
  const long rel = std::min(a.rel_, b.rel_);
  mpz_class u = a.u_ * b.u_;
  const mpz_class mod = prime_power(a.p_, rel);
  mpz_mod(u.get_mpz_t(), u.get_mpz_t(), mod.get_mpz_t());
  return PadicNumber(a.p_, false, a.v_ + b.v_, std::move(u), rel);
}

PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) {
  if (a.p_ != b.p_) throw FieldMismatch("dividing p-adic numbers for different primes");
  if (b.is_zero_at_precision()) throw PrecisionExhausted("division by a p-adic zero at working precision");
  if (a.exact_zero_) return a;
  if (a.rel_ == 0) return PadicNumber(a.p_, false, a.v_ - b.v_, 0, 0);
  const long rel = std::min(a.rel_, b.rel_);
  const mpz_class mod = prime_power(a.p_, rel);
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), b.u_.get_mpz_t(), mod.get_mpz_t());
  mpz_class u = a.u_ * inv;
  mpz_mod(u.get_mpz_t(), u.get_mpz_t(), mod.get_mpz_t());
  return PadicNumber(a.p_, false, a.v_ - b.v_, std::move(u), rel);
}

PadicNumber PadicNumber::with_absolute_precision(long abs_prec) const {
  if (exact_zero_) return *this;
  if (abs_prec >= absolute_precision()) return *this;
  if (abs_prec <= v_) return PadicNumber(p_, false, abs_prec, 0, 0);
  const long rel = abs_prec - v_;
  mpz_class u = u_;
  const mpz_class mod = prime_power(p_, rel);
  mpz_mod(u.get_mpz_t(), u.get_mpz_t(), mod.get_mpz_t());
  return PadicNumber(p_, false, v_, std::move(u), rel);
}

mpq_class PadicNumber::representative() const {
  if (is_zero_at_precision()) return 0;
  mpq_class r(u_);
  if (v_ >= 0)
    r *= mpq_class(prime_power(p_, v_));
  else
    r /= mpq_class(prime_power(p_, -v_));
  return r;
}

mpz_class PadicNumber::residue(long e) const {
  if (e > absolute_precision()) throw PrecisionExhausted("residue requested beyond known precision");
  if (is_zero_at_precision()) return 0;
  if (v_ < 0) throw NonIntegralAtP("residue of a non-integral p-adic number");
  mpz_class r = u_ * prime_power(p_, v_);
  const mpz_class mod = prime_power(p_, e);
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
  return r;
}

bool PadicNumber::congruent(const PadicNumber& other, long e) const {
  const auto d = *this - other;
  if (d.absolute_precision() < e) throw PrecisionExhausted("congruence beyond known precision");
  return d.valuation() >= e;
}

std::string PadicNumber::to_string() const {
  if (exact_zero_) return "0";
  if (rel_ == 0) return "O(" + std::to_string(p_) + "^" + std::to_string(v_) + ")";
  std::string out = u_.get_str();
  if (v_ != 0) out += "*" + std::to_string(p_) + "^" + std::to_string(v_);
  return out + " + O(" + std::to_string(p_) + "^" + std::to_string(absolute_precision()) + ")";
}

long valuation(const PadicNumber& x) { return x.valuation(); }

mpq_class RConstant::exponent() const {
  if (p_ == 0) return 0;
  return mpq_class(-1, static_cast<unsigned long>(p_ - 1));
}

double RConstant::value() const {
  if (p_ == 0) return 1.0;
  return std::pow(static_cast<double>(p_), -1.0 / static_cast<double>(p_ - 1));
}

bool RConstant::exceeds_norm(long d) const {
  if (p_ == 0) return d >= 0;
  return static_cast<__int128>(d) * static_cast<__int128>(p_ - 1) > 1;
}

bool RConstant::bounds_factorial(std::uint64_t i) const {
  if (p_ == 0) return true;
  return static_cast<__int128>(factorial_valuation(i, p_)) * static_cast<__int128>(p_ - 1) <=
         static_cast<__int128>(i);
}

}  // namespace dml
