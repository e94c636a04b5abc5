#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <variant>

#include "dml/field.hpp"
#include "dml/fp_poly.hpp"

namespace dml {

struct FpElem {
  std::uint64_t value = 0;
  std::uint64_t p = 2;
  friend bool operator==(const FpElem&, const FpElem&) = default;
};

/// Element of Q, F_p or F_p(t). Rationals are kept canonical by GMP.
class Scalar {
 public:
  Scalar() : v_(mpq_class(0)) {}
  explicit Scalar(mpq_class q);
  explicit Scalar(FpElem x);
  explicit Scalar(FptElem x);

  static Scalar zero(const Field& f);
  static Scalar one(const Field& f);
  static Scalar from_integer(const Field& f, const mpz_class& n);
  static Scalar from_rational(const Field& f, const mpq_class& q);
  /// The parameter t of F_p(t).
  static Scalar parameter(const Field& f);

  Field field() const;
  bool is_zero() const;
  bool is_one() const;

  const mpq_class& rational() const { return std::get<mpq_class>(v_); }
  const FpElem& fp() const { return std::get<FpElem>(v_); }
  const FptElem& fpt() const { return std::get<FptElem>(v_); }

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
  Scalar pow(std::uint64_t e) const;

  friend bool operator==(const Scalar& a, const Scalar& b);

  /// True when the printed form needs parentheses as a coefficient.
  bool is_compound() const;
  /// For rationals: true if negative. Other fields have no sign.
  bool is_negative() const;
  std::string to_string() const;

 private:
  std::variant<mpq_class, FpElem, FptElem> v_;
};

}  // namespace dml
