#include "dml/fp_poly.hpp"

#include <stdexcept>

#include "dml/errors.hpp"

namespace dml {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e > 0) {
    if (e & 1) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) throw Error("division by zero in F_" + std::to_string(p));
  return pow_mod(a, p - 2, p);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

FpPoly::FpPoly(std::uint64_t p, std::vector<std::uint64_t> coeffs) : p_(p), c_(std::move(coeffs)) {
  for (auto& c : c_) c %= p_;
  trim();
}

FpPoly FpPoly::constant(std::uint64_t p, std::uint64_t c) { return FpPoly(p, {c}); }

FpPoly FpPoly::monomial(std::uint64_t p, std::uint64_t c, std::size_t degree) {
  std::vector<std::uint64_t> v(degree + 1, 0);
  v[degree] = c;
  return FpPoly(p, std::move(v));
}

void FpPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

FpPoly FpPoly::operator-() const {
  FpPoly r(*this);
  for (auto& c : r.c_) c = c == 0 ? 0 : p_ - c;
  return r;
}

FpPoly operator+(const FpPoly& a, const FpPoly& b) {
  const auto p = a.p_;
  FpPoly r(p);
  r.c_.resize(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < r.c_.size(); ++i) {
    std::uint64_t s = a.coeff(i) + b.coeff(i);
    r.c_[i] = s >= p ? s - p : s;
  }
  r.trim();
  return r;
}

FpPoly operator-(const FpPoly& a, const FpPoly& b) { return a + (-b); }

FpPoly operator*(const FpPoly& a, const FpPoly& b) {
  const auto p = a.p_;
  if (a.is_zero() || b.is_zero()) return FpPoly(p);
  std::vector<std::uint64_t> r(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j)
      r[i + j] = (r[i + j] + mul_mod(a.c_[i], b.c_[j], p)) % p;
  }
  return FpPoly(p, std::move(r));
}

FpPoly FpPoly::scaled(std::uint64_t c) const {
  FpPoly r(*this);
  for (auto& x : r.c_) x = mul_mod(x, c, p_);
  r.trim();
  return r;
}

FpPoly FpPoly::monic() const {
  if (is_zero()) return *this;
  return scaled(inv_mod(leading(), p_));
}

std::pair<FpPoly, FpPoly> FpPoly::divmod(const FpPoly& d) const {
  if (d.is_zero()) throw Error("polynomial division by zero");
  FpPoly q(p_), r(*this);
  if (r.c_.size() < d.c_.size()) return {q, r};
  q.c_.assign(r.c_.size() - d.c_.size() + 1, 0);
  const auto inv_lead = inv_mod(d.leading(), p_);
  while (!r.is_zero() && r.degree() >= d.degree()) {
    const auto shift = r.degree() - d.degree();
    const auto factor = mul_mod(r.leading(), inv_lead, p_);
    q.c_[shift] = factor;
    for (std::size_t j = 0; j < d.c_.size(); ++j) {
      const auto sub = mul_mod(factor, d.c_[j], p_);
      auto& slot = r.c_[shift + j];
      slot = slot >= sub ? slot - sub : slot + p_ - sub;
    }
    r.trim();
  }
  q.trim();
  return {q, r};
}

std::string FpPoly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    if (!out.empty()) out += " + ";
    const bool unit = c_[i] == 1;
    if (i == 0) {
      out += std::to_string(c_[i]);
    } else {
      if (!unit) out += std::to_string(c_[i]) + "*";
      out += "t";
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

FpPoly gcd(FpPoly a, FpPoly b) {
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

FptElem::FptElem(std::uint64_t p) : num_(p), den_(FpPoly::constant(p, 1)) {}

FptElem::FptElem(FpPoly num) : num_(std::move(num)), den_(FpPoly::constant(num_.prime(), 1)) {}

FptElem::FptElem(FpPoly num, FpPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error("zero denominator in F_p(t)");
  normalize();
}

void FptElem::normalize() {
  const auto p = num_.prime();
  if (num_.is_zero()) {
    den_ = FpPoly::constant(p, 1);
    return;
  }
  auto g = gcd(num_, den_);
  if (!g.is_one()) {
    num_ = num_.divmod(g).first;
    den_ = den_.divmod(g).first;
  }
  const auto lead_inv = inv_mod(den_.leading(), p);
  num_ = num_.scaled(lead_inv);
  den_ = den_.scaled(lead_inv);
}

FptElem FptElem::operator-() const {
  FptElem r(*this);
  r.num_ = -r.num_;
  return r;
}

FptElem operator+(const FptElem& a, const FptElem& b) {
  if (a.den_ == b.den_) return FptElem(a.num_ + b.num_, a.den_);
  return FptElem(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

FptElem operator-(const FptElem& a, const FptElem& b) { return a + (-b); }

FptElem operator*(const FptElem& a, const FptElem& b) {
  return FptElem(a.num_ * b.num_, a.den_ * b.den_);
}

FptElem operator/(const FptElem& a, const FptElem& b) {
  if (b.is_zero()) throw Error("division by zero in F_p(t)");
  return FptElem(a.num_ * b.den_, a.den_ * b.num_);
}

std::string FptElem::to_string() const {
  if (den_.is_one()) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

}  // namespace dml
