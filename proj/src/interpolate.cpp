#include "dml/interpolate.hpp"

#include <algorithm>
#include <cmath>

#include "dml/errors.hpp"

namespace dml {

namespace {

DeltaNorm require_contraction(const AffinoidSelfMap& H) {
  const DeltaNorm n = delta_norm(H);
  if (!RConstant(H.prime()).exceeds_norm(n.d))
    throw ContractionNotCertified("||Delta|| <= " + std::to_string(H.prime()) + "^-" + std::to_string(n.d) +
                                  " does not beat R; boost first");
  return n;
}

std::string r_comparison(std::uint64_t p, long d) {
  const long lhs = d * static_cast<long>(p - 1);
  return std::to_string(d) + "*(" + std::to_string(p) + "-1) = " + std::to_string(lhs) + (lhs > 1 ? " > 1" : " <= 1");
}

std::uint64_t default_cap(const AffinoidSelfMap& H, long d) {
  std::uint64_t cap = static_cast<std::uint64_t>(4 * H.precision() / std::max(1L, d));
  const Degree deg = H.total_degree();
  if (!deg.is_neg_infinity()) cap = std::max(cap, deg.value());
  return std::max<std::uint64_t>(cap, 1);
}

// Best truncation for differences known modulo p^W decaying like p^-(d*i).
std::uint64_t best_degree(std::uint64_t p, long d, long W, long& tail) {
  tail = std::min(mahler_tail_valuation(0, d, p), W);
  std::uint64_t best = 0;
  for (std::uint64_t D = 1;; ++D) {
    const long prec = W - factorial_valuation(D, p);
    const long t = std::min(mahler_tail_valuation(D, d, p), prec);
    if (t > tail) {
      tail = t;
      best = D;
    }
    if (mahler_tail_valuation(D, d, p) >= prec) break;
  }
  return best;
}

void check_postcondition(const AffinoidSelfMap& H, std::span<const mpz_class> base, const InterpolationResult& r) {
  const long tau = r.certificate.tail;
  if (tau <= 0) return;
  const mpz_class mod = prime_power(H.prime(), tau);
  std::vector<mpz_class> x(base.begin(), base.end());
  for (long n = 0; n <= 2; ++n) {
    const auto g = r.eval(n);
    for (std::size_t j = 0; j < x.size(); ++j) {
      mpz_class want = x[j];
      mpz_mod(want.get_mpz_t(), want.get_mpz_t(), mod.get_mpz_t());
      if (g[j].residue(tau) != want) throw Error("interpolation failed its G(n) = H^n(base) check at n=" + std::to_string(n));
    }
    x = H.eval(x);
  }
}

InterpolationResult assemble(const AffinoidSelfMap& H, std::vector<std::vector<mpz_class>> diffs, long d, bool exact,
                             long W, std::uint64_t D, std::uint64_t cap, long truncation) {
  InterpolationResult r;
  const std::uint64_t p = H.prime();
  for (auto& a : diffs) {
    a.resize(D + 1, 0);
    r.series.push_back(from_mahler(a, p, W, d));
  }
  r.differences = std::move(diffs);
  r.certificate.p = p;
  r.certificate.d = d;
  r.certificate.d_exact = exact;
  r.certificate.r_comparison = r_comparison(p, d);
  r.certificate.degree = D;
  r.certificate.tail = r.series.empty() ? 0 : r.series[0].tail();
  for (const auto& s : r.series) r.certificate.tail = std::min(r.certificate.tail, s.tail());
  r.certificate.working_precision = W;
  r.certificate.degree_cap = cap;
  r.certificate.truncation_valuation = truncation;
  return r;
}

}  // namespace

std::vector<PadicNumber> InterpolationResult::eval(const mpz_class& n) const {
  std::vector<PadicNumber> out;
  for (const auto& s : series) out.push_back(s.eval(n));
  return out;
}

std::vector<ResiduePoly> delta_powers(const AffinoidSelfMap& H, const ResiduePoly& h, std::size_t count,
                                      std::uint64_t degree_cap, long& dropped) {
  std::vector<ResiduePoly> args(H.coords().coords().begin(), H.coords().coords().end());
  SubstitutionCache cache(std::move(args), degree_cap);
  std::vector<ResiduePoly> out;
  if (count == 0) return out;
  out.push_back(h.truncated(degree_cap, dropped));
  while (out.size() < count) {
    const ResiduePoly& cur = out.back();
    if (cur.is_zero()) {
      out.push_back(cur);
      continue;
    }
    out.push_back(cache.apply(cur, dropped) - cur);
  }
  return out;
}

std::vector<mpz_class> forward_differences(std::span<const mpz_class> samples, const mpz_class& m) {
  std::vector<mpz_class> row(samples.begin(), samples.end());
  std::vector<mpz_class> out;
  out.reserve(row.size());
  while (!row.empty()) {
    mpz_mod(row[0].get_mpz_t(), row[0].get_mpz_t(), m.get_mpz_t());
    out.push_back(row[0]);
    for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = row[i + 1] - row[i];
    row.pop_back();
  }
  return out;
}

ActionInterpolator::ActionInterpolator(const AffinoidSelfMap& H, const InterpolateOptions& opts)
    : H_(H), norm_(require_contraction(H)) {
  const std::uint64_t p = H.prime();
  const long k = H.precision();
  cap_ = opts.degree_cap ? opts.degree_cap : default_cap(H, norm_.d);
  long tail0 = 0;
  const std::uint64_t Dk = best_degree(p, norm_.d, k, tail0);
  for (std::size_t j = 0; j < H.dim(); ++j)
    powers_.push_back(delta_powers(H, ResiduePoly::variable(H.dim(), p, k, j), Dk + 1, cap_, dropped_));
  working_ = std::min(k, dropped_);
  long tail = 0;
  degree_ = working_ == k ? Dk : best_degree(p, norm_.d, working_, tail);
}

InterpolationResult ActionInterpolator::at(std::span<const mpz_class> base) const {
  if (base.size() != H_.dim()) throw DimensionMismatch("base point dimension does not match the map");
  std::vector<std::vector<mpz_class>> diffs;
  for (const auto& powers : powers_) {
    std::vector<mpz_class> a;
    for (const auto& q : powers) a.push_back(q.eval(base));
    diffs.push_back(std::move(a));
  }
  auto r = assemble(H_, std::move(diffs), norm_.d, norm_.exact, working_, degree_, cap_, dropped_);
  check_postcondition(H_, base, r);
  return r;
}

InterpolationResult interpolate_action(const AffinoidSelfMap& H, std::span<const mpz_class> base,
                                       const InterpolateOptions& opts) {
  if (base.size() != H.dim()) throw DimensionMismatch("base point dimension does not match the map");
  return ActionInterpolator(H, opts).at(base);
}

InterpolationResult interpolate_orbit(const AffinoidSelfMap& H, std::span<const mpz_class> base) {
  if (base.size() != H.dim()) throw DimensionMismatch("base point dimension does not match the map");
  const DeltaNorm n = require_contraction(H);
  const std::uint64_t p = H.prime();
  const long k = H.precision();
  long tail = 0;
  const std::uint64_t D = best_degree(p, n.d, k, tail);
  const mpz_class mod = prime_power(p, k);
  std::vector<std::vector<mpz_class>> samples(H.dim());
  std::vector<mpz_class> x(base.begin(), base.end());
  for (auto& c : x) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
  for (std::uint64_t l = 0; l <= D; ++l) {
    for (std::size_t j = 0; j < x.size(); ++j) samples[j].push_back(x[j]);
    if (l < D) x = H.eval(x);
  }
  std::vector<std::vector<mpz_class>> diffs;
  for (const auto& s : samples) diffs.push_back(forward_differences(s, mod));
  auto r = assemble(H, std::move(diffs), n.d, n.exact, k, D, 0, kInfiniteValuation);
  check_postcondition(H, base, r);
  return r;
}

AffinoidSelfMap invert_map(const AffinoidSelfMap& H, std::uint64_t degree_cap) {
  const DeltaNorm n = delta_norm(H);
  if (n.d < 1) throw ContractionNotCertified("inversion needs ||Delta|| < 1");
  const long k = H.precision();
  const std::uint64_t cap = degree_cap ? degree_cap : default_cap(H, n.d);
  const std::size_t count = static_cast<std::size_t>((k + n.d - 1) / n.d);
  long dropped = kInfiniteValuation;
  std::vector<ResiduePoly> out;
  for (std::size_t j = 0; j < H.dim(); ++j) {
    const auto powers = delta_powers(H, ResiduePoly::variable(H.dim(), H.prime(), k, j), count, cap, dropped);
    ResiduePoly acc(H.dim(), H.prime(), k);
    for (std::size_t i = 0; i < powers.size(); ++i) acc = (i % 2 == 0) ? acc + powers[i] : acc - powers[i];
    out.push_back(std::move(acc));
  }
  const long eff = std::min(k, dropped);
  for (auto& c : out) c = c.with_precision(eff);
  return AffinoidSelfMap(ResidueMap(std::move(out)));
}

ResiduePoly apply_vector_field(const AffinoidSelfMap& H, const ResiduePoly& h, std::uint64_t degree_cap) {
  const DeltaNorm n = require_contraction(H);
  const std::uint64_t p = H.prime();
  const long k = std::min(H.precision(), h.precision());
  const std::uint64_t cap = degree_cap ? degree_cap : default_cap(H, n.d);
  // Terms i with d*i - floor(log_p i) below the running precision are kept;
  // that bound is nondecreasing in i once d >= 1.
  auto log_floor = [p](std::uint64_t i) {
    long l = 0;
    for (std::uint64_t q = i; q >= p; q /= p) ++l;
    return l;
  };
  std::size_t count = 1;
  long prec = k;
  for (std::uint64_t i = 1;; ++i) {
    if (n.d * static_cast<long>(i) - log_floor(i) >= prec) break;
    prec = std::min(prec, k - padic_valuation(mpz_class(static_cast<unsigned long>(i)), p));
    count = i + 1;
  }
  long dropped = kInfiniteValuation;
  const auto powers = delta_powers(H, h.with_precision(k), count, cap, dropped);
  const long W = std::min(k, dropped);
  long out_prec = W;
  for (std::size_t i = 1; i < powers.size(); ++i)
    out_prec = std::min(out_prec, W - padic_valuation(mpz_class(static_cast<unsigned long>(i)), p));
  out_prec = std::min(out_prec, prec);
  out_prec = std::max(out_prec, 0L);
  ResiduePoly acc(H.dim(), p, out_prec);
  const mpz_class mod = prime_power(p, out_prec);
  for (std::size_t i = 1; i < powers.size(); ++i) {
    mpz_class ii(static_cast<unsigned long>(i));
    const long v = padic_valuation(ii, p);
    const mpz_class pv = prime_power(p, v);
    mpz_class unit = ii / pv, inv;
    if (out_prec > 0) mpz_invert(inv.get_mpz_t(), unit.get_mpz_t(), mod.get_mpz_t());
    const bool negative = i % 2 == 0;
    const ResiduePoly term = powers[i].with_precision(W);
    for (const auto& [m, c] : term.terms()) {
      if (!mpz_divisible_p(c.get_mpz_t(), pv.get_mpz_t())) throw PrecisionExhausted("log series term not divisible by i");
      mpz_class t = (c / pv) * inv;
      if (negative) t = -t;
      acc.add_term(m, t);
    }
  }
  return acc;
}

std::vector<ResiduePoly> vector_field(const AffinoidSelfMap& H, std::uint64_t degree_cap) {
  std::vector<ResiduePoly> out;
  for (std::size_t j = 0; j < H.dim(); ++j)
    out.push_back(apply_vector_field(H, ResiduePoly::variable(H.dim(), H.prime(), H.precision(), j), degree_cap));
  return out;
}

}  // namespace dml
