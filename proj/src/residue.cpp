#include "dml/residue.hpp"

#include <algorithm>
#include <unordered_map>

#include "dml/errors.hpp"

namespace dml {

namespace {

// Sums coefficient products per monomial. Monomials are packed into one
// 64-bit key (equal-width exponent fields) while every exponent fits; the
// first one that does not switches to an ordered map.
class TermAccumulator {
 public:
  explicit TermAccumulator(std::size_t nvars)
      : n_(nvars), bits_(nvars == 0 ? 64 : static_cast<unsigned>(std::min<std::size_t>(64 / nvars, 32))) {}

  unsigned field_bits() const { return bits_; }
  bool packed() const { return packed_; }

  bool pack(const Monomial& m, std::uint64_t& key) const {
    key = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (bits_ < 32 && m[i] >= (std::uint64_t{1} << bits_)) return false;
      key |= static_cast<std::uint64_t>(m[i]) << (bits_ * i);
    }
    return true;
  }

  Monomial unpack(std::uint64_t key) const {
    Monomial m(n_);
    const std::uint64_t mask = bits_ >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits_) - 1;
    for (std::size_t i = 0; i < n_; ++i) m[i] = static_cast<std::uint32_t>((key >> (bits_ * i)) & mask);
    return m;
  }

  // slot(key) += a * b, for a key already known to be a valid packing.
  void addmul_packed(std::uint64_t key, const mpz_class& a, const mpz_class& b) {
    mpz_addmul(packed_terms_[key].get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }

  void addmul(const Monomial& m, const mpz_class& a, const mpz_class& b) {
    std::uint64_t key;
    if (packed_ && pack(m, key)) return addmul_packed(key, a, b);
    unpack_all();
    mpz_addmul(map_terms_[m].get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }

  template <class F>
  void for_each(F&& f) {
    if (packed_)
      for (auto& [k, c] : packed_terms_) f(unpack(k), c);
    else
      for (auto& [m, c] : map_terms_) f(m, c);
  }

 private:
  void unpack_all() {
    if (!packed_) return;
    for (auto& [k, c] : packed_terms_) map_terms_[unpack(k)] += c;
    packed_terms_.clear();
    packed_ = false;
  }

  std::size_t n_;
  unsigned bits_;
  bool packed_ = true;
  std::unordered_map<std::uint64_t, mpz_class> packed_terms_;
  std::map<Monomial, mpz_class> map_terms_;
};

std::uint32_t max_exponent(const ResiduePoly::Terms& t) {
  std::uint32_t e = 0;
  for (const auto& [m, c] : t)
    for (auto x : m) e = std::max(e, x);
  return e;
}

}  // namespace

long padic_valuation(const mpz_class& n, std::uint64_t p) {
  if (n == 0) return kInfiniteValuation;
  mpz_class pz(static_cast<unsigned long>(p));
  return static_cast<long>(mpz_remove(mpz_class().get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t()));
}

long padic_valuation(const mpq_class& q, std::uint64_t p) {
  if (q == 0) return kInfiniteValuation;
  return padic_valuation(q.get_num(), p) - padic_valuation(q.get_den(), p);
}

mpz_class prime_power(std::uint64_t p, long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(std::max(e, 0L)));
  return r;
}

mpz_class reduce_rational(const mpq_class& q, std::uint64_t p, long e) {
  const mpz_class mod = prime_power(p, e);
  if (padic_valuation(q.get_den(), p) > 0)
    throw NonIntegralAtP(q.get_str() + " is not integral at p=" + std::to_string(p));
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), q.get_den().get_mpz_t(), mod.get_mpz_t());
  mpz_class r = q.get_num() * inv;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
  return r;
}

std::optional<mpq_class> rational_reconstruction(const mpz_class& a, const mpz_class& m) {
  mpz_class bound;
  mpz_class half = m / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  mpz_class r0 = m, r1, s0 = 0, s1 = 1;
  mpz_mod(r1.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  while (r1 > bound) {
    const mpz_class q = r0 / r1;
    r0 -= q * r1;
    std::swap(r0, r1);
    s0 -= q * s1;
    std::swap(s0, s1);
  }
  if (s1 == 0 || abs(s1) > bound) return std::nullopt;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), s1.get_mpz_t(), m.get_mpz_t());
  if (g != 1) return std::nullopt;
  mpq_class out(r1, s1);
  out.canonicalize();
  return out;
}

long factorial_valuation(std::uint64_t n, std::uint64_t p) {
  long v = 0;
  for (std::uint64_t q = n / p; q > 0; q /= p) v += static_cast<long>(q);
  return v;
}

ResiduePoly::ResiduePoly(std::size_t nvars, std::uint64_t p, long precision)
    : nvars_(nvars), p_(p), prec_(precision), mod_(prime_power(p, precision)) {}

ResiduePoly ResiduePoly::constant(std::size_t nvars, std::uint64_t p, long precision, const mpz_class& c) {
  ResiduePoly r(nvars, p, precision);
  r.add_term(Monomial(nvars, 0), c);
  return r;
}

ResiduePoly ResiduePoly::variable(std::size_t nvars, std::uint64_t p, long precision, std::size_t i) {
  ResiduePoly r(nvars, p, precision);
  Monomial m(nvars, 0);
  m.at(i) = 1;
  r.add_term(m, 1);
  return r;
}

Degree ResiduePoly::total_degree() const {
  if (terms_.empty()) return Degree::neg_infinity();
  return Degree::of(monomial_degree(terms_.begin()->first));
}

mpz_class ResiduePoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? mpz_class(0) : it->second;
}

void ResiduePoly::add_term(const Monomial& m, const mpz_class& c) {
  if (m.size() != nvars_) throw DimensionMismatch("monomial length does not match variable count");
  auto it = terms_.find(m);
  mpz_class v = it == terms_.end() ? c : it->second + c;
  mpz_mod(v.get_mpz_t(), v.get_mpz_t(), mod_.get_mpz_t());
  if (v == 0) {
    if (it != terms_.end()) terms_.erase(it);
  } else if (it == terms_.end()) {
    terms_.emplace(m, std::move(v));
  } else {
    it->second = std::move(v);
  }
}

ResiduePoly ResiduePoly::operator-() const {
  ResiduePoly r(*this);
  for (auto& [m, c] : r.terms_) c = mod_ - c;
  return r;
}

namespace {

void require_compatible(const ResiduePoly& a, const ResiduePoly& b) {
  if (a.nvars() != b.nvars()) throw DimensionMismatch("residue polynomials in different variable counts");
  if (a.prime() != b.prime() || a.precision() != b.precision())
    throw FieldMismatch("residue polynomials over different rings");
}

}  // namespace

ResiduePoly operator+(const ResiduePoly& a, const ResiduePoly& b) {
  require_compatible(a, b);
  ResiduePoly r(a);
  for (const auto& [m, c] : b.terms_) r.add_term(m, c);
  return r;
}

ResiduePoly operator-(const ResiduePoly& a, const ResiduePoly& b) { return a + (-b); }

ResiduePoly operator*(const ResiduePoly& a, const ResiduePoly& b) {
  long dropped = kInfiniteValuation;
  return a.mul_truncated(b, std::numeric_limits<std::uint64_t>::max(), dropped);
}

ResiduePoly ResiduePoly::mul_truncated(const ResiduePoly& b, std::uint64_t degree_cap, long& dropped) const {
  require_compatible(*this, b);
  ResiduePoly r(nvars_, p_, prec_);
  TermAccumulator acc(nvars_);
  const std::uint64_t limit = acc.field_bits() >= 32 ? (std::uint64_t{1} << 32) : (std::uint64_t{1} << acc.field_bits());
  if (static_cast<std::uint64_t>(max_exponent(terms_)) + max_exponent(b.terms_) < limit) {
    // Exponent sums cannot overflow a field, so packed keys add.
    std::vector<std::pair<std::uint64_t, const mpz_class*>> kb;
    kb.reserve(b.terms_.size());
    std::uint64_t key;
    for (const auto& [mb, cb] : b.terms_) {
      acc.pack(mb, key);
      kb.emplace_back(key, &cb);
    }
    for (const auto& [ma, ca] : terms_) {
      acc.pack(ma, key);
      for (const auto& [k2, cb] : kb) acc.addmul_packed(key + k2, ca, *cb);
    }
  } else {
    Monomial m(nvars_);
    for (const auto& [ma, ca] : terms_)
      for (const auto& [mb, cb] : b.terms_) {
        for (std::size_t i = 0; i < nvars_; ++i) m[i] = ma[i] + mb[i];
        acc.addmul(m, ca, cb);
      }
  }
  acc.for_each([&](const Monomial& mono, mpz_class& c) {
    mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod_.get_mpz_t());
    if (c == 0) return;
    if (monomial_degree(mono) > degree_cap) {
      dropped = std::min(dropped, padic_valuation(c, p_));
      return;
    }
    r.terms_.emplace(mono, std::move(c));
  });
  return r;
}

ResiduePoly ResiduePoly::truncated(std::uint64_t degree_cap, long& dropped) const {
  ResiduePoly r(nvars_, p_, prec_);
  for (const auto& [m, c] : terms_) {
    if (monomial_degree(m) > degree_cap)
      dropped = std::min(dropped, padic_valuation(c, p_));
    else
      r.terms_.emplace(m, c);
  }
  return r;
}

ResiduePoly ResiduePoly::scaled(const mpz_class& c) const {
  ResiduePoly r(nvars_, p_, prec_);
  for (const auto& [m, x] : terms_) r.add_term(m, x * c);
  return r;
}

long ResiduePoly::gauss_valuation() const {
  long v = prec_;
  for (const auto& [m, c] : terms_) v = std::min(v, padic_valuation(c, p_));
  return v;
}

ResiduePoly ResiduePoly::with_precision(long precision) const {
  ResiduePoly r(nvars_, p_, precision);
  for (const auto& [m, c] : terms_) r.add_term(m, c);
  return r;
}

ResiduePoly ResiduePoly::divided_by_prime_power(long e) const {
  const mpz_class pe = prime_power(p_, e);
  ResiduePoly r(nvars_, p_, prec_ - e);
  for (const auto& [m, c] : terms_) {
    if (!mpz_divisible_p(c.get_mpz_t(), pe.get_mpz_t()))
      throw NonIntegralAtP("coefficient " + c.get_str() + " not divisible by p^" + std::to_string(e));
    r.add_term(m, c / pe);
  }
  return r;
}

mpz_class ResiduePoly::eval(std::span<const mpz_class> x) const {
  if (x.size() != nvars_) throw DimensionMismatch("point dimension does not match variable count");
  mpz_class acc = 0, t, pw;
  for (const auto& [m, c] : terms_) {
    t = c;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      mpz_powm_ui(pw.get_mpz_t(), x[i].get_mpz_t(), m[i], mod_.get_mpz_t());
      t *= pw;
      mpz_mod(t.get_mpz_t(), t.get_mpz_t(), mod_.get_mpz_t());
    }
    acc += t;
  }
  mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), mod_.get_mpz_t());
  return acc;
}

std::string ResiduePoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += " + ";
    std::string mono;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(i + 1);
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    if (mono.empty())
      out += c.get_str();
    else if (c == 1)
      out += mono;
    else
      out += c.get_str() + "*" + mono;
  }
  return out;
}

std::vector<mpz_class> ResidueMap::eval(std::span<const mpz_class> x) const {
  std::vector<mpz_class> out;
  out.reserve(c_.size());
  for (const auto& p : c_) out.push_back(p.eval(x));
  return out;
}

std::string ResidueMap::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) out += ", ";
    out += c_[i].to_string();
  }
  return out + ")";
}

ResiduePoly reduce_mod_p(const MultiPoly& f, std::uint64_t p, long e) {
  if (!f.field().is_rational()) throw FieldMismatch("reduction mod p requires a polynomial over Q");
  ResiduePoly r(f.nvars(), p, e);
  for (const auto& [m, c] : f.terms()) r.add_term(m, reduce_rational(c.rational(), p, e));
  return r;
}

ResidueMap reduce_mod_p(const PolyMap& f, std::uint64_t p, long e) {
  std::vector<ResiduePoly> out;
  for (const auto& c : f.coords()) out.push_back(reduce_mod_p(c, p, e));
  return ResidueMap(std::move(out));
}

ResiduePoint reduce_mod_p(const Point& x, std::uint64_t p, long e) {
  ResiduePoint r{p, e, {}};
  for (const auto& c : x.coords()) {
    if (!c.field().is_rational()) throw FieldMismatch("reduction mod p requires a point over Q");
    r.coords.push_back(reduce_rational(c.rational(), p, e));
  }
  return r;
}

SubstitutionCache::SubstitutionCache(std::vector<ResiduePoly> args, std::uint64_t degree_cap)
    : args_(std::move(args)), cap_(degree_cap), out_vars_(args_.empty() ? 0 : args_[0].nvars()) {}

const ResiduePoly& SubstitutionCache::arg(std::size_t j, long precision) {
  auto& slot = reduced_[precision];
  if (slot.empty())
    for (const auto& a : args_) slot.push_back(a.with_precision(precision));
  return slot[j];
}

const SubstitutionCache::Power& SubstitutionCache::power(const Monomial& m, long precision) {
  auto it = table_.find(m);
  if (it != table_.end() && it->second.value.precision() >= precision) return it->second;
  const auto& ref = args_.at(0);
  std::size_t j = 0;
  while (j < m.size() && m[j] == 0) ++j;
  Power pw{ResiduePoly::constant(out_vars_, ref.prime(), precision, 1), kInfiniteValuation};
  if (j < m.size()) {
    Monomial prev = m;
    --prev[j];
    const Power& base = power(prev, precision);
    pw.dropped = base.dropped;
    pw.value = base.value.with_precision(precision).mul_truncated(arg(j, precision), cap_, pw.dropped);
  }
  if (it != table_.end()) {
    it->second = std::move(pw);
    return it->second;
  }
  return table_.emplace(m, std::move(pw)).first->second;
}

ResiduePoly SubstitutionCache::apply(const ResiduePoly& h, long& dropped) {
  if (h.nvars() != args_.size()) throw DimensionMismatch("substitution arity does not match variable count");
  const auto& ref = args_.at(0);
  const long k = std::min(ref.precision(), h.precision());
  TermAccumulator acc(out_vars_);
  for (const auto& [m, c] : h.terms()) {
    // c * args^m mod p^k only needs args^m mod p^(k - v(c)).
    const long v = padic_valuation(c, ref.prime());
    if (v >= k) continue;
    const auto& pw = power(m, k - v);
    if (pw.dropped < kInfiniteValuation) dropped = std::min(dropped, v + pw.dropped);
    for (const auto& [mm, cc] : pw.value.terms()) acc.addmul(mm, c, cc);
  }
  ResiduePoly out(out_vars_, ref.prime(), k);
  acc.for_each([&](const Monomial& mono, const mpz_class& c) { out.add_term(mono, c); });
  return out;
}

}  // namespace dml
