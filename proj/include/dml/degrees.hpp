#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dml/multipoly.hpp"

namespace dml {

/// x^(1/n) for a positive integer x, kept symbolic.
struct IntegerRoot {
  mpz_class radicand = 1;
  std::uint64_t index = 1;

  /// The exact value when radicand is a perfect index-th power.
  std::optional<mpz_class> exact() const;
  /// Floating estimate, never used for comparisons.
  double estimate() const;
  std::string to_string() const;
};

struct DegreeSequence {
  /// deg(f^n) for n = 1..degrees.size().
  std::vector<std::uint64_t> degrees;
  bool budget_exceeded = false;
  std::uint64_t requested = 0;

  /// (deg f^n)^(1/n) at the last computed n.
  IntegerRoot lambda() const;
  /// deg(f^(n+1)) / deg(f^n), estimates only.
  std::vector<double> successive_ratios() const;
  /// First (a, b) with deg(f^(a+b)) > deg(f^a) * deg(f^b), if any.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> submultiplicativity_violation() const;
};

/// Exact total degrees of f, f^2, ..., f^n_max. Stops early, with the prefix
/// flagged, once an iterate carries more than term_budget terms or the next
/// composition would form more than 64 * term_budget term products.
DegreeSequence degree_sequence(const PolyMap& f, std::uint64_t n_max, std::uint64_t term_budget = 200000);

}  // namespace dml
