#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dml {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
/// Inverse of a nonzero residue modulo a prime.
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p);
bool is_prime(std::uint64_t n);

/// Dense univariate polynomial over F_p in the parameter t.
/// Coefficients are stored low degree first with no trailing zeros.
class FpPoly {
 public:
  explicit FpPoly(std::uint64_t p = 2) : p_(p) {}
  FpPoly(std::uint64_t p, std::vector<std::uint64_t> coeffs);

  static FpPoly constant(std::uint64_t p, std::uint64_t c);
  static FpPoly monomial(std::uint64_t p, std::uint64_t c, std::size_t degree);

  std::uint64_t prime() const { return p_; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  /// Degree of a nonzero polynomial. Callers check is_zero() first.
  std::size_t degree() const { return c_.size() - 1; }
  std::uint64_t leading() const { return c_.back(); }
  std::uint64_t coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  const std::vector<std::uint64_t>& coeffs() const { return c_; }

  FpPoly operator-() const;
  friend FpPoly operator+(const FpPoly& a, const FpPoly& b);
  friend FpPoly operator-(const FpPoly& a, const FpPoly& b);
  friend FpPoly operator*(const FpPoly& a, const FpPoly& b);
  FpPoly scaled(std::uint64_t c) const;
  FpPoly monic() const;

  /// Euclidean division; throws on division by zero.
  std::pair<FpPoly, FpPoly> divmod(const FpPoly& d) const;

  friend bool operator==(const FpPoly&, const FpPoly&) = default;

  std::string to_string() const;

 private:
  void trim();

  std::uint64_t p_;
  std::vector<std::uint64_t> c_;
};

/// Monic gcd; gcd(0, 0) = 0.
FpPoly gcd(FpPoly a, FpPoly b);

/// Reduced element of F_p(t): gcd(num, den) = 1, den monic and nonzero.
class FptElem {
 public:
  explicit FptElem(std::uint64_t p = 2);
  FptElem(FpPoly num, FpPoly den);
  explicit FptElem(FpPoly num);

  std::uint64_t prime() const { return num_.prime(); }
  const FpPoly& num() const { return num_; }
  const FpPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  FptElem operator-() const;
  friend FptElem operator+(const FptElem& a, const FptElem& b);
  friend FptElem operator-(const FptElem& a, const FptElem& b);
  friend FptElem operator*(const FptElem& a, const FptElem& b);
  friend FptElem operator/(const FptElem& a, const FptElem& b);
  friend bool operator==(const FptElem&, const FptElem&) = default;

  std::string to_string() const;

 private:
  void normalize();

  FpPoly num_;
  FpPoly den_;
};

}  // namespace dml
