#include "dml/padic_series.hpp"

#include <algorithm>
#include <map>

#include "dml/errors.hpp"

namespace dml {

namespace {

constexpr long kMaxTail = 1L << 20;

long sat_add(long a, long b) {
  if (a >= kInfiniteValuation || b >= kInfiniteValuation) return kInfiniteValuation;
  return a + b;
}

void check_tail(long tail) {
  if (tail > kMaxTail) throw BudgetExceeded("series tail precision " + std::to_string(tail) + " is beyond the supported cap");
}

}  // namespace

PadicSeries::PadicSeries(std::uint64_t p, long scale, long tail, std::vector<mpz_class> scaled_coeffs)
    : p_(p), scale_(scale), tail_(tail), c_(std::move(scaled_coeffs)) {
  check_tail(tail_);
  if (scale_ < 0) throw Error("negative series scale");
  if (c_.empty()) c_.push_back(0);
  normalize();
}

void PadicSeries::normalize() {
  const long top = tail_ + scale_;
  if (top <= 0) {
    for (auto& c : c_) c = 0;
    scale_ = std::max(0L, -tail_);
    return;
  }
  const mpz_class mod = prime_power(p_, top);
  for (auto& c : c_) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
  if (scale_ == 0) return;
  long common = scale_;
  for (const auto& c : c_) {
    if (c == 0) continue;
    common = std::min(common, padic_valuation(c, p_));
    if (common == 0) return;
  }
  if (common == 0) return;
  const mpz_class div = prime_power(p_, common);
  for (auto& c : c_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), div.get_mpz_t());
  scale_ -= common;
}

PadicSeries PadicSeries::from_rationals(std::span<const mpq_class> coeffs, std::uint64_t p, long tail) {
  long low = 0;
  for (const auto& q : coeffs)
    if (q != 0) low = std::min(low, padic_valuation(q, p));
  const long scale = -low;
  const mpz_class shift = prime_power(p, scale);
  std::vector<mpz_class> c;
  c.reserve(coeffs.size());
  for (const auto& q : coeffs) {
    if (q == 0) {
      c.emplace_back(0);
      continue;
    }
    c.push_back(reduce_rational(q * mpq_class(shift), p, tail + scale));
  }
  return PadicSeries(p, scale, tail, std::move(c));
}

PadicSeries PadicSeries::constant(const PadicNumber& c, long tail) {
  const std::uint64_t p = c.prime();
  const long t = std::min(tail, c.absolute_precision());
  if (c.is_zero_at_precision()) return PadicSeries(p, 0, t, {0});
  const long scale = std::max(0L, -c.valuation());
  mpz_class v = c.unit() * prime_power(p, c.valuation() + scale);
  return PadicSeries(p, scale, t, {v});
}

PadicSeries PadicSeries::variable(std::uint64_t p, long tail) { return PadicSeries(p, 0, tail, {0, 1}); }

PadicNumber PadicSeries::coefficient(std::size_t i) const {
  if (i >= c_.size()) return PadicNumber::from_residue(0, p_, tail_);
  return PadicNumber::from_scaled_residue(c_[i], -scale_, p_, tail_ + scale_);
}

std::optional<long> PadicSeries::certified_valuation(std::size_t i) const {
  if (i >= c_.size() || c_[i] == 0) return std::nullopt;
  const long v = padic_valuation(c_[i], p_) - scale_;
  if (v >= tail_) return std::nullopt;
  return v;
}

long PadicSeries::gauss_valuation() const {
  long v = tail_;
  for (const auto& c : c_)
    if (c != 0) v = std::min(v, padic_valuation(c, p_) - scale_);
  return v;
}

PadicSeries PadicSeries::operator-() const {
  std::vector<mpz_class> c;
  c.reserve(c_.size());
  for (const auto& x : c_) c.push_back(-x);
  return PadicSeries(p_, scale_, tail_, std::move(c));
}

PadicSeries operator+(const PadicSeries& a, const PadicSeries& b) {
  if (a.p_ != b.p_) throw FieldMismatch("adding series for different primes");
  const long scale = std::max(a.scale_, b.scale_);
  const mpz_class sa = prime_power(a.p_, scale - a.scale_);
  const mpz_class sb = prime_power(a.p_, scale - b.scale_);
  std::vector<mpz_class> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i] * sa;
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i] * sb;
  return PadicSeries(a.p_, scale, std::min(a.tail_, b.tail_), std::move(c));
}

PadicSeries operator-(const PadicSeries& a, const PadicSeries& b) { return a + (-b); }

PadicSeries operator*(const PadicSeries& a, const PadicSeries& b) {
  if (a.p_ != b.p_) throw FieldMismatch("multiplying series for different primes");
  const long va = a.gauss_valuation();
  const long vb = b.gauss_valuation();
  long tail = std::min({sat_add(va, b.tail_), sat_add(vb, a.tail_), sat_add(a.tail_, b.tail_)});
  const long scale = a.scale_ + b.scale_;
  const std::size_t keep = std::max(a.c_.size(), b.c_.size());
  std::vector<mpz_class> full(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) full[i + j] += a.c_[i] * b.c_[j];
  }
  const mpz_class mod = prime_power(a.p_, std::max(0L, tail + scale));
  for (std::size_t i = keep; i < full.size(); ++i) {
    mpz_mod(full[i].get_mpz_t(), full[i].get_mpz_t(), mod.get_mpz_t());
    if (full[i] != 0) tail = std::min(tail, padic_valuation(full[i], a.p_) - scale);
  }
  full.resize(keep);
  return PadicSeries(a.p_, scale, tail, std::move(full));
}

PadicSeries PadicSeries::scaled(const PadicNumber& c) const { return *this * constant(c, c.absolute_precision()); }

PadicSeries PadicSeries::with_tail(long tail) const {
  if (tail >= tail_) return *this;
  return PadicSeries(p_, scale_, tail, c_);
}

PadicSeries PadicSeries::truncated(std::size_t d) const {
  if (d + 1 >= c_.size()) return *this;
  long tail = tail_;
  for (std::size_t i = d + 1; i < c_.size(); ++i)
    if (c_[i] != 0) tail = std::min(tail, padic_valuation(c_[i], p_) - scale_);
  return PadicSeries(p_, scale_, tail, std::vector<mpz_class>(c_.begin(), c_.begin() + static_cast<long>(d) + 1));
}

PadicNumber PadicSeries::eval(const mpz_class& n) const {
  const long top = tail_ + scale_;
  if (top <= 0) return PadicNumber::from_residue(0, p_, tail_);
  const mpz_class mod = prime_power(p_, top);
  mpz_class acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) {
    acc = acc * n + c_[i];
    mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), mod.get_mpz_t());
  }
  return PadicNumber::from_scaled_residue(acc, -scale_, p_, top);
}

PadicSeries PadicSeries::recentered(const mpz_class& c, long j) const {
  const long top = std::max(0L, tail_ + scale_);
  const mpz_class mod = prime_power(p_, top);
  std::vector<mpz_class> a = c_;
  const std::size_t n = a.size();
  // Taylor shift T -> c + T.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t k = n - 1; k-- > i;) {
      a[k] += c * a[k + 1];
      mpz_mod(a[k].get_mpz_t(), a[k].get_mpz_t(), mod.get_mpz_t());
    }
  }
  const mpz_class step = prime_power(p_, j);
  mpz_class w = 1;
  for (std::size_t l = 0; l < n; ++l) {
    a[l] *= w;
    w *= step;
    if (w >= mod) w = 0;
  }
  return PadicSeries(p_, scale_, tail_, std::move(a));
}

std::string PadicSeries::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!out.empty()) out += " + ";
    out += "(" + coefficient(i).representative().get_str() + ")";
    if (i == 1) out += "*T";
    if (i > 1) out += "*T^" + std::to_string(i);
  }
  if (out.empty()) out = "0";
  return out + " + O(" + std::to_string(p_) + "^" + std::to_string(tail_) + ")";
}

std::vector<mpq_class> mahler_term(std::uint64_t i, std::uint64_t D) {
  std::vector<mpz_class> poly{1};
  mpz_class fact = 1;
  for (std::uint64_t k = 0; k < i; ++k) {
    std::vector<mpz_class> next(poly.size() + 1);
    for (std::size_t j = 0; j < poly.size(); ++j) {
      next[j + 1] += poly[j];
      next[j] -= poly[j] * static_cast<unsigned long>(k);
    }
    poly = std::move(next);
    fact *= static_cast<unsigned long>(k + 1);
  }
  const std::size_t keep = static_cast<std::size_t>(std::min<std::uint64_t>(i, D)) + 1;
  std::vector<mpq_class> out;
  out.reserve(keep);
  for (std::size_t j = 0; j < keep; ++j) {
    mpq_class q(poly[j], fact);
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

long mahler_term_valuation(std::uint64_t i, long d, std::uint64_t p) {
  return d * static_cast<long>(i) - factorial_valuation(i, p);
}

long mahler_tail_valuation(std::uint64_t D, long d, std::uint64_t p) {
  return d * static_cast<long>(D + 1) - static_cast<long>(D / (p - 1));
}

MahlerPlan plan_mahler(std::uint64_t p, long d, long tail) {
  if (!RConstant(p).exceeds_norm(d))
    throw ContractionNotCertified("difference decay p^-" + std::to_string(d) + " does not beat R at p=" +
                                  std::to_string(p));
  std::uint64_t D = 0;
  while (mahler_tail_valuation(D, d, p) < tail) ++D;
  return {D, tail + factorial_valuation(D, p), tail};
}

PadicSeries from_mahler(std::span<const mpz_class> diffs, std::uint64_t p, long working_precision, long d) {
  if (diffs.empty()) throw Error("empty Mahler data");
  const std::uint64_t D = diffs.size() - 1;
  const long scale = factorial_valuation(D, p);
  const long tail = std::min(mahler_tail_valuation(D, d, p), working_precision - scale);
  const long top = std::max(0L, tail + scale);
  const mpz_class mod = prime_power(p, top);
  // A_i = a_i / i! scaled by p^scale.
  std::vector<mpz_class> A(diffs.size());
  mpz_class unit_fact = 1;
  for (std::uint64_t i = 0; i <= D; ++i) {
    if (i > 0) {
      mpz_class k(static_cast<unsigned long>(i));
      mpz_class pz(static_cast<unsigned long>(p));
      mpz_remove(k.get_mpz_t(), k.get_mpz_t(), pz.get_mpz_t());
      unit_fact *= k;
      mpz_mod(unit_fact.get_mpz_t(), unit_fact.get_mpz_t(), mod.get_mpz_t());
    }
    if (top == 0) continue;
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), unit_fact.get_mpz_t(), mod.get_mpz_t());
    A[i] = diffs[i] * inv * prime_power(p, scale - factorial_valuation(i, p));
    mpz_mod(A[i].get_mpz_t(), A[i].get_mpz_t(), mod.get_mpz_t());
  }
  // Nested form: P_D = A_D, P_i = A_i + (T - i) P_{i+1}.
  std::vector<mpz_class> P{A[D]};
  for (std::uint64_t i = D; i-- > 0;) {
    std::vector<mpz_class> next(P.size() + 1);
    for (std::size_t j = 0; j < P.size(); ++j) {
      next[j + 1] += P[j];
      next[j] -= P[j] * static_cast<unsigned long>(i);
    }
    next[0] += A[i];
    for (auto& x : next) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
    P = std::move(next);
  }
  return PadicSeries(p, scale, tail, std::move(P));
}

PadicSeries compose_polynomial(const MultiPoly& g, std::span<const PadicSeries> args) {
  if (!g.field().is_rational()) throw FieldMismatch("series composition requires a polynomial over Q");
  if (args.size() != g.nvars()) throw DimensionMismatch("series composition arity does not match variable count");
  if (args.empty()) throw DimensionMismatch("series composition needs at least one argument");
  const std::uint64_t p = args[0].prime();
  long base_tail = args[0].tail();
  for (const auto& a : args) base_tail = std::min(base_tail, a.tail());
  std::vector<std::map<std::uint32_t, PadicSeries>> powers(args.size());
  auto power = [&](std::size_t j, std::uint32_t k) -> const PadicSeries& {
    auto& table = powers[j];
    if (table.empty()) table.emplace(0, PadicSeries(p, 0, base_tail, {1}));
    auto it = table.find(k);
    if (it != table.end()) return it->second;
    auto prev = std::prev(table.end());
    PadicSeries acc = prev->second;
    for (std::uint32_t e = prev->first; e < k; ++e) {
      acc = acc * args[j];
      table.emplace(e + 1, acc);
    }
    return table.find(k)->second;
  };
  std::optional<PadicSeries> total;
  for (const auto& [m, c] : g.terms()) {
    PadicSeries term(p, 0, base_tail, {1});
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m[j] > 0) term = term * power(j, m[j]);
    const long abs = term.tail() - std::min(0L, term.gauss_valuation());
    term = term * PadicSeries::constant(PadicNumber::from_rational(c.rational(), p, abs), abs);
    total = total ? *total + term : term;
  }
  if (!total) return PadicSeries(p, 0, base_tail, {0});
  return *total;
}

StrassmannBound strassmann_bound(const PadicSeries& s) {
  StrassmannBound out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto v = s.certified_valuation(i);
    if (!v) continue;
    if (!out.bound || *v <= out.dominant_valuation) {
      out.bound = i;
      out.dominant_valuation = *v;
    }
  }
  return out;
}

namespace {

struct DiscSearch {
  std::uint64_t p;
  long max_depth;
  const std::vector<long>& hits;
  long depth_used = 0;

  // Disc of T = c mod p^j, series U -> S(c + p^j U).
  bool settle(const PadicSeries& s, const mpz_class& c, long j) {
    const auto b = strassmann_bound(s);
    if (b.degenerate())
      throw PrecisionExhausted("disc " + c.get_str() + " mod " + std::to_string(p) + "^" + std::to_string(j) +
                               " is indistinguishable from zero");
    const mpz_class mod = prime_power(p, j);
    std::size_t count = 0;
    for (long h : hits) {
      mpz_class diff = mpz_class(h) - c;
      if (mpz_divisible_p(diff.get_mpz_t(), mod.get_mpz_t())) ++count;
    }
    if (count > *b.bound) throw Error("Strassmann bound violated by exact hits");
    if (count == *b.bound) return true;
    if (j >= max_depth) return false;
    bool ok = true;
    depth_used = std::max(depth_used, j + 1);
    for (std::uint64_t a = 0; a < p && ok; ++a) {
      const PadicSeries sub = s.recentered(mpz_class(static_cast<unsigned long>(a)), 1);
      ok = settle(sub, c + mpz_class(static_cast<unsigned long>(a)) * mod, j + 1);
    }
    return ok;
  }
};

}  // namespace

IntegerZeros find_integer_zeros(const PadicSeries& s, long n_max, const std::function<bool(long)>& oracle,
                                const ZeroSearchOptions& opts) {
  const auto b = strassmann_bound(s);
  if (b.degenerate()) throw PrecisionExhausted("series is indistinguishable from zero at working precision");
  IntegerZeros out;
  out.bound = *b.bound;
  for (long n = 0; n <= n_max; ++n)
    if (oracle(n)) out.zeros.push_back(n);
  std::vector<long> counted = out.zeros;
  for (long z : opts.known_zeros)
    if (z < 0 || z > n_max) counted.push_back(z);
  DiscSearch search{s.prime(), opts.max_depth, counted};
  out.resolved = search.settle(s, 0, 0);
  out.depth = search.depth_used;
  return out;
}

}  // namespace dml
