#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dml/degrees.hpp"
#include "dml/multipoly.hpp"

namespace dml {

/// h = log H over Q; over F_p(t) h is the integer H itself.
struct HeightRecord {
  std::uint64_t n = 0;
  FieldKind field = FieldKind::Rational;
  mpz_class H = 1;

  /// h+ = max(h, 1) is 1 (rather than h) exactly when this holds.
  bool plus_is_one() const;
  /// Natural-log value of h, an estimate over Q.
  double height_estimate() const;
  double plus_estimate() const;
  std::string to_string() const;
};

/// Naive height of (1 : x1 : ... : xN) after clearing to coprime integral
/// coordinates (Q) or coprime polynomials in t (F_p(t)).
HeightRecord weil_height(const Point& x);
/// The coprime homogeneous coordinates used by weil_height over Q.
std::vector<mpz_class> integral_coordinates(const Point& x);

struct ProfileEntry {
  HeightRecord height;
  /// (h+)^(1/n), estimate; absent at n = 0.
  std::optional<double> root;
};

struct ArithmeticDegreeProfile {
  std::vector<ProfileEntry> entries;
  bool budget_exceeded = false;
  /// Max and min of the computed roots over n >= 1, and the last one.
  double upper = 0, lower = 0, last = 0;
};

/// Heights of f^n(x) for n = 0..n_max; stops early when a coordinate passes
/// bit_budget bits.
ArithmeticDegreeProfile arithmetic_degree_profile(const PolyMap& f, const Point& x, std::uint64_t n_max,
                                                  std::uint64_t bit_budget = std::uint64_t{1} << 24);

struct KsmFit {
  /// lambda + epsilon, exact.
  mpq_class base;
  bool lambda_is_estimate = false;
  /// C to about 20 significant digits.
  std::string c_decimal;
  double c = 0;
  /// C when it is provably a rational number.
  std::optional<mpq_class> c_exact;
  std::uint64_t argmax = 0;
  /// Indices whose ratio equals C exactly.
  std::vector<std::uint64_t> equality;
  std::vector<double> ratios;
  std::uint64_t horizon = 0;
  bool budget_exceeded = false;
};

/// Smallest C with h+(f^n(x)) <= C (lambda+eps)^n h+(x) for n <= n_max.
/// lambda defaults to the degree_sequence estimate at the same horizon.
KsmFit ksm_fit(const PolyMap& f, const Point& x, const mpq_class& epsilon, std::uint64_t n_max,
               std::optional<mpq_class> lambda = std::nullopt, std::uint64_t bit_budget = std::uint64_t{1} << 24);

/// Lambda from a degree sequence: exact when the root is an integer, otherwise
/// the double estimate as a dyadic rational.
std::pair<mpq_class, bool> lambda_rational(const DegreeSequence& seq);

/// Multiplicative trivial bound: H(f(y)) <= B * H(y)^deg f for y over Q.
mpz_class height_growth_constant(const PolyMap& f);

}  // namespace dml
