#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dml/multipoly.hpp"

namespace dml {

/// Valuation sentinel for values known to vanish at the working precision.
inline constexpr long kInfiniteValuation = std::numeric_limits<long>::max() / 4;

/// v_p(n), kInfiniteValuation for n = 0.
long padic_valuation(const mpz_class& n, std::uint64_t p);
/// v_p(q) for a nonzero rational, kInfiniteValuation for 0.
long padic_valuation(const mpq_class& q, std::uint64_t p);
mpz_class prime_power(std::uint64_t p, long e);
/// q mod p^e for a p-integral rational; throws NonIntegralAtP otherwise.
mpz_class reduce_rational(const mpq_class& q, std::uint64_t p, long e);
/// r/s = a mod m with |r|, s <= sqrt(m/2), when such a fraction exists.
std::optional<mpq_class> rational_reconstruction(const mpz_class& a, const mpz_class& m);
/// v_p(n!) by Legendre's formula.
long factorial_valuation(std::uint64_t n, std::uint64_t p);

/// Polynomial over Z/p^k in N variables. Also serves as a truncated element
/// of the Tate algebra on the closed unit polydisc.
class ResiduePoly {
 public:
  using Terms = std::map<Monomial, mpz_class, GrlexGreater>;

  ResiduePoly(std::size_t nvars, std::uint64_t p, long precision);

  static ResiduePoly constant(std::size_t nvars, std::uint64_t p, long precision, const mpz_class& c);
  static ResiduePoly variable(std::size_t nvars, std::uint64_t p, long precision, std::size_t i);

  std::size_t nvars() const { return nvars_; }
  std::uint64_t prime() const { return p_; }
  long precision() const { return prec_; }
  const mpz_class& modulus() const { return mod_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Degree total_degree() const;
  mpz_class coefficient(const Monomial& m) const;

  void add_term(const Monomial& m, const mpz_class& c);

  ResiduePoly operator-() const;
  friend ResiduePoly operator+(const ResiduePoly& a, const ResiduePoly& b);
  friend ResiduePoly operator-(const ResiduePoly& a, const ResiduePoly& b);
  friend ResiduePoly operator*(const ResiduePoly& a, const ResiduePoly& b);
  ResiduePoly scaled(const mpz_class& c) const;

  /// Product with terms above the degree cap removed; the minimum valuation of
  /// the removed coefficients is folded into `dropped`.
  ResiduePoly mul_truncated(const ResiduePoly& b, std::uint64_t degree_cap, long& dropped) const;
  /// Removes terms above the cap, folding their valuation into `dropped`.
  ResiduePoly truncated(std::uint64_t degree_cap, long& dropped) const;

  /// Min valuation of the coefficients (Gauss valuation); precision() when zero.
  long gauss_valuation() const;
  /// Reinterprets at lower precision.
  ResiduePoly with_precision(long precision) const;
  /// Exact division by p^e; all coefficients must be divisible. Precision drops by e.
  ResiduePoly divided_by_prime_power(long e) const;

  mpz_class eval(std::span<const mpz_class> x) const;

  friend bool operator==(const ResiduePoly&, const ResiduePoly&) = default;
  std::string to_string() const;

 private:
  std::size_t nvars_;
  std::uint64_t p_;
  long prec_;
  mpz_class mod_;
  Terms terms_;
};

/// Residue of a polynomial self-map modulo p^e.
class ResidueMap {
 public:
  ResidueMap() = default;
  explicit ResidueMap(std::vector<ResiduePoly> coords) : c_(std::move(coords)) {}

  std::size_t dim() const { return c_.size(); }
  const ResiduePoly& operator[](std::size_t i) const { return c_[i]; }
  ResiduePoly& operator[](std::size_t i) { return c_[i]; }
  std::span<const ResiduePoly> coords() const { return c_; }
  std::uint64_t prime() const { return c_.empty() ? 0 : c_[0].prime(); }
  long precision() const { return c_.empty() ? 0 : c_[0].precision(); }

  std::vector<mpz_class> eval(std::span<const mpz_class> x) const;

  friend bool operator==(const ResidueMap&, const ResidueMap&) = default;
  std::string to_string() const;

 private:
  std::vector<ResiduePoly> c_;
};

struct ResiduePoint {
  std::uint64_t p = 0;
  long precision = 0;
  std::vector<mpz_class> coords;
  friend bool operator==(const ResiduePoint&, const ResiduePoint&) = default;
};

ResiduePoly reduce_mod_p(const MultiPoly& f, std::uint64_t p, long e);
ResidueMap reduce_mod_p(const PolyMap& f, std::uint64_t p, long e);
ResiduePoint reduce_mod_p(const Point& x, std::uint64_t p, long e);

/// Composition h(args) with a cached power table, truncating every product
/// above a degree cap. Reusing one cache across many h amortizes the powers.
class SubstitutionCache {
 public:
  SubstitutionCache(std::vector<ResiduePoly> args, std::uint64_t degree_cap);

  /// h(args) with terms above the cap removed; `dropped` receives the minimum
  /// valuation of everything removed (including inside the cached powers).
  ResiduePoly apply(const ResiduePoly& h, long& dropped);

  std::uint64_t degree_cap() const { return cap_; }

 private:
  struct Power {
    ResiduePoly value;
    long dropped;
  };
  const Power& power(const Monomial& m, long precision);
  const ResiduePoly& arg(std::size_t j, long precision);

  std::vector<ResiduePoly> args_;
  std::uint64_t cap_;
  std::size_t out_vars_;
  std::map<Monomial, Power> table_;
  std::map<long, std::vector<ResiduePoly>> reduced_;
};

}  // namespace dml
