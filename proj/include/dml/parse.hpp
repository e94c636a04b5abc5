#pragma once

#include <string_view>
#include <vector>

#include "dml/field.hpp"
#include "dml/multipoly.hpp"

namespace dml {

/// Polynomial grammar:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*      division only by constants
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' integer)?
///   primary := integer | 'x' index | 't' | '(' expr ')'
/// Variables x1..xN; t is the parameter of F_p(t) and is rejected otherwise.
MultiPoly parse_poly(std::string_view text, std::size_t nvars, const Field& field);

/// A scalar expression (no x variables), e.g. "3/2" or "1/(t+1)".
Scalar parse_scalar(std::string_view text, const Field& field);

/// Map from one string per coordinate; dimension is the list length.
PolyMap parse_map(const std::vector<std::string>& coords, const Field& field);
/// Map written as a tuple, "(x2, x1*x2)".
PolyMap parse_map(std::string_view tuple, const Field& field);

Point parse_point(const std::vector<std::string>& coords, const Field& field);
Point parse_point(std::string_view tuple, const Field& field);

}  // namespace dml
