#include "dml/parse.hpp"

#include <cctype>
#include <string>

#include "dml/errors.hpp"

namespace dml {

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t offset, std::size_t nvars, const Field& field)
      : s_(text), pos_(offset), nvars_(nvars), field_(field) {}

  MultiPoly parse_all() {
    auto r = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    return r;
  }

  MultiPoly expr() {
    auto acc = term();
    for (;;) {
      skip_ws();
      if (accept('+'))
        acc = acc + term();
      else if (accept('-'))
        acc = acc - term();
      else
        return acc;
    }
  }

  std::size_t pos() const { return pos_; }

 private:
  MultiPoly term() {
    auto acc = unary();
    for (;;) {
      skip_ws();
      if (accept('*')) {
        acc = acc * unary();
      } else if (peek() == '/') {
        const auto at = pos_++;
        auto d = unary();
        if (!d.is_constant()) throw ParseError("division by a non-constant expression", at);
        if (d.is_zero()) throw ParseError("division by zero", at);
        acc = acc.scaled(Scalar::one(field_) / d.terms().begin()->second);
      } else {
        return acc;
      }
    }
  }

  MultiPoly unary() {
    skip_ws();
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  MultiPoly power() {
    auto base = primary();
    skip_ws();
    if (accept('^')) {
      skip_ws();
      const auto at = pos_;
      const auto digits = integer_literal();
      if (digits.empty()) throw ParseError("expected exponent", at);
      mpz_class e(digits);
      if (e > 1'000'000) throw ParseError("exponent too large", at);
      return base.pow(e.get_ui());
    }
    return base;
  }

  MultiPoly primary() {
    skip_ws();
    const auto at = pos_;
    if (at >= s_.size()) throw ParseError("unexpected end of input", at);
    const char c = s_[at];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return MultiPoly::constant(nvars_, Scalar::from_integer(field_, mpz_class(integer_literal())));
    }
    if (c == '(') {
      ++pos_;
      auto inner = expr();
      skip_ws();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (c == 't') {
      ++pos_;
      if (field_.kind != FieldKind::FunctionField)
        throw UnknownVariable("parameter t is only allowed over F_p(t)", at);
      return MultiPoly::constant(nvars_, Scalar::parameter(field_));
    }
    if (c == 'x') {
      ++pos_;
      const auto digits = integer_literal();
      if (digits.empty()) throw UnknownVariable("variable 'x' needs an index", at);
      const auto idx = std::stoul(digits);
      if (idx == 0 || idx > nvars_) throw UnknownVariable("unknown variable x" + digits, at);
      return MultiPoly::variable(nvars_, field_, idx - 1);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = at;
      while (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) ++end;
      throw UnknownVariable("unknown variable " + std::string(s_.substr(at, end - at)), at);
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", at);
  }

  std::string integer_literal() {
    const auto start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string_view s_;
  std::size_t pos_;
  std::size_t nvars_;
  Field field_;
};

/// Splits "(a, b, c)" at top-level commas; returns (offset, piece) pairs.
std::vector<std::pair<std::size_t, std::string_view>> split_tuple(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i >= text.size() || text[i] != '(') throw ParseError("expected '(' opening a tuple", i);
  std::size_t end = text.size();
  while (end > i && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  if (end <= i + 1 || text[end - 1] != ')') throw ParseError("expected ')' closing a tuple", end);
  std::vector<std::pair<std::size_t, std::string_view>> parts;
  int depth = 0;
  std::size_t start = i + 1;
  for (std::size_t j = i + 1; j < end - 1; ++j) {
    if (text[j] == '(') ++depth;
    if (text[j] == ')') {
      if (--depth < 0) throw ParseError("unbalanced ')'", j);
    }
    if (text[j] == ',' && depth == 0) {
      parts.emplace_back(start, text.substr(start, j - start));
      start = j + 1;
    }
  }
  if (depth != 0) throw ParseError("unbalanced '('", end - 1);
  parts.emplace_back(start, text.substr(start, end - 1 - start));
  return parts;
}

MultiPoly parse_at(std::string_view whole, std::size_t offset, std::size_t len, std::size_t nvars,
                   const Field& field) {
  // Parse the slice in place so error offsets refer to the whole text.
  Parser p(whole.substr(0, offset + len), offset, nvars, field);
  return p.parse_all();
}

}  // namespace

MultiPoly parse_poly(std::string_view text, std::size_t nvars, const Field& field) {
  return Parser(text, 0, nvars, field).parse_all();
}

Scalar parse_scalar(std::string_view text, const Field& field) {
  auto p = parse_poly(text, 0, field);
  return p.is_zero() ? Scalar::zero(field) : p.terms().begin()->second;
}

PolyMap parse_map(const std::vector<std::string>& coords, const Field& field) {
  std::vector<MultiPoly> polys;
  for (const auto& c : coords) polys.push_back(parse_poly(c, coords.size(), field));
  return PolyMap(std::move(polys));
}

PolyMap parse_map(std::string_view tuple, const Field& field) {
  const auto parts = split_tuple(tuple);
  std::vector<MultiPoly> polys;
  for (const auto& [off, piece] : parts) polys.push_back(parse_at(tuple, off, piece.size(), parts.size(), field));
  return PolyMap(std::move(polys));
}

Point parse_point(const std::vector<std::string>& coords, const Field& field) {
  std::vector<Scalar> xs;
  for (const auto& c : coords) xs.push_back(parse_scalar(c, field));
  return Point(std::move(xs));
}

Point parse_point(std::string_view tuple, const Field& field) {
  std::vector<Scalar> xs;
  for (const auto& [off, piece] : split_tuple(tuple)) {
    auto p = parse_at(tuple, off, piece.size(), 0, field);
    xs.push_back(p.is_zero() ? Scalar::zero(field) : p.terms().begin()->second);
  }
  return Point(std::move(xs));
}

}  // namespace dml
