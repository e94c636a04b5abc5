#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dml/field.hpp"
#include "dml/scalar.hpp"

namespace dml {

using Monomial = std::vector<std::uint32_t>;

std::uint64_t monomial_degree(const Monomial& m);

/// Graded order, largest first: higher total degree, then lexicographically
/// larger exponent vector (x1 dominates x2, ...).
struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Total degree with a distinct sentinel for the zero polynomial.
class Degree {
 public:
  static Degree neg_infinity() { return Degree(); }
  static Degree of(std::uint64_t d) { return Degree(d); }

  bool is_neg_infinity() const { return neg_inf_; }
  /// Finite value; throws for the zero-polynomial sentinel.
  std::uint64_t value() const;

  friend bool operator==(const Degree&, const Degree&) = default;
  friend bool operator<(const Degree& a, const Degree& b) {
    if (a.neg_inf_ || b.neg_inf_) return a.neg_inf_ && !b.neg_inf_;
    return a.d_ < b.d_;
  }
  std::string to_string() const { return neg_inf_ ? "-inf" : std::to_string(d_); }

 private:
  Degree() = default;
  explicit Degree(std::uint64_t d) : neg_inf_(false), d_(d) {}
  bool neg_inf_ = true;
  std::uint64_t d_ = 0;
};

class Point {
 public:
  Point() = default;
  explicit Point(std::vector<Scalar> coords) : c_(std::move(coords)) {}

  std::size_t dim() const { return c_.size(); }
  const Scalar& operator[](std::size_t i) const { return c_[i]; }
  Scalar& operator[](std::size_t i) { return c_[i]; }
  std::span<const Scalar> coords() const { return c_; }
  /// Field of the coordinates (Q for the empty point).
  Field field() const { return c_.empty() ? Field::rational() : c_[0].field(); }

  friend bool operator==(const Point&, const Point&) = default;
  std::string to_string() const;

 private:
  std::vector<Scalar> c_;
};

/// Sparse polynomial in x1..xN over a coefficient field. No zero coefficient
/// is ever stored.
class MultiPoly {
 public:
  using Terms = std::map<Monomial, Scalar, GrlexGreater>;

  MultiPoly(std::size_t nvars, Field field) : nvars_(nvars), field_(field) {}

  static MultiPoly constant(std::size_t nvars, const Scalar& c);
  /// The coordinate x_{i+1}.
  static MultiPoly variable(std::size_t nvars, const Field& field, std::size_t i);

  std::size_t nvars() const { return nvars_; }
  const Field& field() const { return field_; }
  const Terms& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Degree total_degree() const;
  /// Coefficient of a monomial, zero if absent.
  Scalar coefficient(const Monomial& m) const;

  /// Adds c*m, dropping the term when it cancels.
  void add_term(const Monomial& m, const Scalar& c);

  MultiPoly operator-() const;
  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly scaled(const Scalar& c) const;
  MultiPoly pow(std::uint64_t e) const;

  Scalar eval(std::span<const Scalar> x) const;
  /// Substitutes x_i := args[i]; the result lives in the variables of args.
  MultiPoly substitute(std::span<const MultiPoly> args) const;

  friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

  /// Canonical form: terms in graded order, largest first.
  std::string to_string() const;

 private:
  std::size_t nvars_;
  Field field_;
  Terms terms_;
};

/// Polynomial self-map of affine N-space.
class PolyMap {
 public:
  PolyMap() = default;
  explicit PolyMap(std::vector<MultiPoly> coords);

  /// Identity map of A^N.
  static PolyMap identity(std::size_t n, const Field& field);

  std::size_t dim() const { return c_.size(); }
  const Field& field() const { return field_; }
  const MultiPoly& operator[](std::size_t i) const { return c_[i]; }
  std::span<const MultiPoly> coords() const { return c_; }
  Degree total_degree() const;
  std::size_t term_count() const;

  Point eval(const Point& x) const;

  friend bool operator==(const PolyMap&, const PolyMap&) = default;
  std::string to_string() const;

 private:
  Field field_ = Field::rational();
  std::vector<MultiPoly> c_;
};

Point eval_map(const PolyMap& f, const Point& x);
/// f o g, with exact cancellation.
PolyMap compose_maps(const PolyMap& f, const PolyMap& g);

}  // namespace dml
