#include "dml/scalar.hpp"

#include "dml/errors.hpp"

namespace dml {

namespace {

std::uint64_t reduce_mpz(const mpz_class& n, std::uint64_t p) {
  mpz_class r = n % mpz_class(static_cast<unsigned long>(p));
  if (r < 0) r += static_cast<unsigned long>(p);
  return r.get_ui();
}

void require_same(const Scalar& a, const Scalar& b) {
  if (!(a.field() == b.field()))
    throw FieldMismatch("scalar field mismatch: " + a.field().to_string() + " vs " +
                        b.field().to_string());
}

}  // namespace

Scalar::Scalar(mpq_class q) : v_(std::move(q)) { std::get<mpq_class>(v_).canonicalize(); }
Scalar::Scalar(FpElem x) : v_(x) {}
Scalar::Scalar(FptElem x) : v_(std::move(x)) {}

Scalar Scalar::zero(const Field& f) { return from_integer(f, 0); }
Scalar Scalar::one(const Field& f) { return from_integer(f, 1); }

Scalar Scalar::from_integer(const Field& f, const mpz_class& n) {
  switch (f.kind) {
    case FieldKind::Rational:
      return Scalar(mpq_class(n));
    case FieldKind::PrimeField:
      return Scalar(FpElem{reduce_mpz(n, f.p), f.p});
    case FieldKind::FunctionField:
      return Scalar(FptElem(FpPoly::constant(f.p, reduce_mpz(n, f.p))));
  }
  return {};
}

Scalar Scalar::from_rational(const Field& f, const mpq_class& q) {
  if (f.is_rational()) return Scalar(q);
  const auto den = reduce_mpz(q.get_den(), f.p);
  if (den == 0) throw Error("denominator vanishes in characteristic " + std::to_string(f.p));
  return from_integer(f, q.get_num()) / from_integer(f, den);
}

Scalar Scalar::parameter(const Field& f) {
  if (f.kind != FieldKind::FunctionField) throw FieldMismatch("t is only defined over F_p(t)");
  return Scalar(FptElem(FpPoly::monomial(f.p, 1, 1)));
}

Field Scalar::field() const {
  if (std::holds_alternative<mpq_class>(v_)) return Field::rational();
  if (auto* x = std::get_if<FpElem>(&v_)) return Field::prime_field(x->p);
  return Field::function_field(std::get<FptElem>(v_).prime());
}

bool Scalar::is_zero() const {
  if (auto* q = std::get_if<mpq_class>(&v_)) return sgn(*q) == 0;
  if (auto* x = std::get_if<FpElem>(&v_)) return x->value == 0;
  return std::get<FptElem>(v_).is_zero();
}

bool Scalar::is_one() const {
  if (auto* q = std::get_if<mpq_class>(&v_)) return *q == 1;
  if (auto* x = std::get_if<FpElem>(&v_)) return x->value == 1;
  const auto& e = std::get<FptElem>(v_);
  return e.den().is_one() && e.num().is_one();
}

Scalar Scalar::operator-() const {
  if (auto* q = std::get_if<mpq_class>(&v_)) return Scalar(mpq_class(-*q));
  if (auto* x = std::get_if<FpElem>(&v_)) return Scalar(FpElem{x->value == 0 ? 0 : x->p - x->value, x->p});
  return Scalar(-std::get<FptElem>(v_));
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  require_same(a, b);
  if (auto* q = std::get_if<mpq_class>(&a.v_)) return Scalar(mpq_class(*q + b.rational()));
  if (auto* x = std::get_if<FpElem>(&a.v_)) {
    const auto s = (x->value + b.fp().value) % x->p;
    return Scalar(FpElem{s, x->p});
  }
  return Scalar(a.fpt() + b.fpt());
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& a, const Scalar& b) {
  require_same(a, b);
  if (auto* q = std::get_if<mpq_class>(&a.v_)) return Scalar(mpq_class(*q * b.rational()));
  if (auto* x = std::get_if<FpElem>(&a.v_))
    return Scalar(FpElem{mul_mod(x->value, b.fp().value, x->p), x->p});
  return Scalar(a.fpt() * b.fpt());
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  require_same(a, b);
  if (b.is_zero()) throw Error("division by zero");
  if (auto* q = std::get_if<mpq_class>(&a.v_)) return Scalar(mpq_class(*q / b.rational()));
  if (auto* x = std::get_if<FpElem>(&a.v_))
    return Scalar(FpElem{mul_mod(x->value, inv_mod(b.fp().value, x->p), x->p), x->p});
  return Scalar(a.fpt() / b.fpt());
}

Scalar Scalar::pow(std::uint64_t e) const {
  Scalar base = *this;
  Scalar r = one(field());
  while (e > 0) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return r;
}

bool operator==(const Scalar& a, const Scalar& b) { return a.v_ == b.v_; }

bool Scalar::is_compound() const {
  if (!std::holds_alternative<FptElem>(v_)) return false;
  const auto& e = std::get<FptElem>(v_);
  if (!e.den().is_one()) return true;
  std::size_t nonzero = 0;
  for (auto c : e.num().coeffs()) nonzero += c != 0;
  return nonzero > 1;
}

bool Scalar::is_negative() const {
  if (auto* q = std::get_if<mpq_class>(&v_)) return sgn(*q) < 0;
  return false;
}

std::string Scalar::to_string() const {
  if (auto* q = std::get_if<mpq_class>(&v_)) return q->get_str();
  if (auto* x = std::get_if<FpElem>(&v_)) return std::to_string(x->value);
  return std::get<FptElem>(v_).to_string();
}

}  // namespace dml
