#include "dml/multipoly.hpp"

#include <algorithm>
#include <limits>

#include "dml/errors.hpp"

namespace dml {

std::uint64_t monomial_degree(const Monomial& m) {
  std::uint64_t d = 0;
  for (auto e : m) d += e;
  return d;
}

bool GrlexGreater::operator()(const Monomial& a, const Monomial& b) const {
  const auto da = monomial_degree(a);
  const auto db = monomial_degree(b);
  if (da != db) return da > db;
  return a > b;
}

std::uint64_t Degree::value() const {
  if (neg_inf_) throw Error("degree of the zero polynomial is -inf");
  return d_;
}

std::string Point::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) out += ", ";
    out += c_[i].to_string();
  }
  return out + ")";
}

MultiPoly MultiPoly::constant(std::size_t nvars, const Scalar& c) {
  MultiPoly r(nvars, c.field());
  r.add_term(Monomial(nvars, 0), c);
  return r;
}

MultiPoly MultiPoly::variable(std::size_t nvars, const Field& field, std::size_t i) {
  MultiPoly r(nvars, field);
  Monomial m(nvars, 0);
  m.at(i) = 1;
  r.add_term(m, Scalar::one(field));
  return r;
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && monomial_degree(terms_.begin()->first) == 0);
}

Degree MultiPoly::total_degree() const {
  if (terms_.empty()) return Degree::neg_infinity();
  return Degree::of(monomial_degree(terms_.begin()->first));
}

Scalar MultiPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar::zero(field_) : it->second;
}

void MultiPoly::add_term(const Monomial& m, const Scalar& c) {
  if (m.size() != nvars_) throw DimensionMismatch("monomial length does not match variable count");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(*this);
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

namespace {

void require_compatible(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars() != b.nvars()) throw DimensionMismatch("polynomials in different variable counts");
  if (!(a.field() == b.field()))
    throw FieldMismatch("polynomials over " + a.field().to_string() + " and " + b.field().to_string());
}

}  // namespace

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
  require_compatible(a, b);
  MultiPoly r(a);
  for (const auto& [m, c] : b.terms_) r.add_term(m, c);
  return r;
}

MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return a + (-b); }

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  require_compatible(a, b);
  MultiPoly r(a.nvars_, a.field_);
  Monomial m(a.nvars_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      for (std::size_t i = 0; i < m.size(); ++i) {
        const std::uint64_t e = std::uint64_t{ma[i]} + mb[i];
        if (e > std::numeric_limits<std::uint32_t>::max()) throw BudgetExceeded("exponent overflow");
        m[i] = static_cast<std::uint32_t>(e);
      }
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

MultiPoly MultiPoly::scaled(const Scalar& c) const {
  MultiPoly r(nvars_, field_);
  if (c.is_zero()) return r;
  for (const auto& [m, x] : terms_) r.terms_.emplace(m, x * c);
  return r;
}

MultiPoly MultiPoly::pow(std::uint64_t e) const {
  MultiPoly base = *this;
  MultiPoly r = constant(nvars_, Scalar::one(field_));
  while (e > 0) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return r;
}

Scalar MultiPoly::eval(std::span<const Scalar> x) const {
  if (x.size() != nvars_) throw DimensionMismatch("point dimension does not match variable count");
  for (const auto& xi : x)
    if (!(xi.field() == field_)) throw FieldMismatch("point field does not match polynomial field");
  // Cache x_i^e per variable; iterates rarely revisit large exponents.
  std::vector<std::map<std::uint32_t, Scalar>> cache(nvars_);
  auto power = [&](std::size_t i, std::uint32_t e) -> const Scalar& {
    auto it = cache[i].find(e);
    if (it != cache[i].end()) return it->second;
    return cache[i].emplace(e, x[i].pow(e)).first->second;
  };
  Scalar acc = Scalar::zero(field_);
  for (const auto& [m, c] : terms_) {
    Scalar t = c;
    for (std::size_t i = 0; i < nvars_; ++i)
      if (m[i] != 0) t = t * power(i, m[i]);
    acc += t;
  }
  return acc;
}

MultiPoly MultiPoly::substitute(std::span<const MultiPoly> args) const {
  if (args.size() != nvars_) throw DimensionMismatch("substitution arity does not match variable count");
  if (args.empty()) return *this;
  const auto out_vars = args[0].nvars();
  for (const auto& a : args) {
    if (a.nvars() != out_vars) throw DimensionMismatch("substituted polynomials disagree on variables");
    if (!(a.field() == field_)) throw FieldMismatch("substituted polynomial over a different field");
  }
  std::vector<std::map<std::uint32_t, MultiPoly>> cache(nvars_);
  auto power = [&](std::size_t i, std::uint32_t e) -> const MultiPoly& {
    auto it = cache[i].find(e);
    if (it != cache[i].end()) return it->second;
    return cache[i].emplace(e, args[i].pow(e)).first->second;
  };
  MultiPoly acc(out_vars, field_);
  for (const auto& [m, c] : terms_) {
    MultiPoly t = constant(out_vars, c);
    for (std::size_t i = 0; i < nvars_; ++i)
      if (m[i] != 0) t = t * power(i, m[i]);
    acc = acc + t;
  }
  return acc;
}

namespace {

std::string monomial_string(const Monomial& m) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += "x" + std::to_string(i + 1);
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out;
}

}  // namespace

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    const bool negative = c.is_negative();
    const Scalar mag = negative ? -c : c;
    if (out.empty())
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    const auto mono = monomial_string(m);
    if (mono.empty()) {
      out += mag.is_compound() ? "(" + mag.to_string() + ")" : mag.to_string();
    } else if (mag.is_one()) {
      out += mono;
    } else {
      out += (mag.is_compound() ? "(" + mag.to_string() + ")" : mag.to_string()) + "*" + mono;
    }
  }
  return out;
}

PolyMap::PolyMap(std::vector<MultiPoly> coords) : c_(std::move(coords)) {
  if (c_.empty()) return;
  field_ = c_[0].field();
  for (const auto& p : c_) {
    if (p.nvars() != c_.size())
      throw DimensionMismatch("map coordinate in " + std::to_string(p.nvars()) + " variables, expected " +
                              std::to_string(c_.size()));
    if (!(p.field() == field_)) throw FieldMismatch("map coordinates over different fields");
  }
}

PolyMap PolyMap::identity(std::size_t n, const Field& field) {
  std::vector<MultiPoly> c;
  for (std::size_t i = 0; i < n; ++i) c.push_back(MultiPoly::variable(n, field, i));
  return PolyMap(std::move(c));
}

Degree PolyMap::total_degree() const {
  Degree d = Degree::neg_infinity();
  for (const auto& p : c_) d = std::max(d, p.total_degree());
  return d;
}

std::size_t PolyMap::term_count() const {
  std::size_t n = 0;
  for (const auto& p : c_) n += p.term_count();
  return n;
}

Point PolyMap::eval(const Point& x) const {
  if (x.dim() != dim()) throw DimensionMismatch("point dimension does not match map dimension");
  std::vector<Scalar> out;
  out.reserve(dim());
  for (const auto& p : c_) out.push_back(p.eval(x.coords()));
  return Point(std::move(out));
}

std::string PolyMap::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) out += ", ";
    out += c_[i].to_string();
  }
  return out + ")";
}

Point eval_map(const PolyMap& f, const Point& x) { return f.eval(x); }

PolyMap compose_maps(const PolyMap& f, const PolyMap& g) {
  if (f.dim() != g.dim()) throw DimensionMismatch("composing maps of different dimensions");
  if (!(f.field() == g.field())) throw FieldMismatch("composing maps over different fields");
  std::vector<MultiPoly> out;
  out.reserve(f.dim());
  for (const auto& p : f.coords()) out.push_back(p.substitute(g.coords()));
  return PolyMap(std::move(out));
}

}  // namespace dml
