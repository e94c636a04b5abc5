#pragma once

#include <cstdint>
#include <string>

namespace dml {

enum class FieldKind { Rational, PrimeField, FunctionField };

/// Coefficient field tag: Q, F_p, or F_p(t).
struct Field {
  FieldKind kind = FieldKind::Rational;
  std::uint64_t p = 0;

  static Field rational() { return {FieldKind::Rational, 0}; }
  static Field prime_field(std::uint64_t p) { return {FieldKind::PrimeField, p}; }
  static Field function_field(std::uint64_t p) { return {FieldKind::FunctionField, p}; }

  bool is_rational() const { return kind == FieldKind::Rational; }
  std::uint64_t characteristic() const { return kind == FieldKind::Rational ? 0 : p; }

  friend bool operator==(const Field&, const Field&) = default;

  std::string to_string() const {
    switch (kind) {
      case FieldKind::Rational:
        return "Q";
      case FieldKind::PrimeField:
        return "F_" + std::to_string(p);
      case FieldKind::FunctionField:
        return "F_" + std::to_string(p) + "(t)";
    }
    return "?";
  }
};

}  // namespace dml
