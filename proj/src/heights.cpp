#include "dml/heights.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>

#include "dml/errors.hpp"

namespace dml {

namespace {

double log_of(const mpz_class& H) {
  long exp = 0;
  const double m = mpz_get_d_2exp(&exp, H.get_mpz_t());
  return std::log(m) + static_cast<double>(exp) * std::log(2.0);
}

FpPoly lcm(const FpPoly& a, const FpPoly& b) {
  return (a * b.divmod(gcd(a, b)).first).monic();
}

std::uint64_t coordinate_bits(const Scalar& c) {
  if (c.field().is_rational())
    return mpz_sizeinbase(c.rational().get_num_mpz_t(), 2) + mpz_sizeinbase(c.rational().get_den_mpz_t(), 2);
  if (c.field().kind == FieldKind::FunctionField) return c.fpt().num().coeffs().size() + c.fpt().den().coeffs().size();
  return 0;
}

bool over_budget(const Point& z, std::uint64_t budget) {
  if (!budget) return false;
  return std::any_of(z.coords().begin(), z.coords().end(), [&](const Scalar& c) { return coordinate_bits(c) > budget; });
}

// x = r^e with r not a perfect power.
std::pair<mpz_class, std::uint64_t> minimal_root(mpz_class x) {
  std::uint64_t e = 1;
  for (bool again = true; again;) {
    again = false;
    if (x < 4 || !mpz_perfect_power_p(x.get_mpz_t())) break;
    const std::uint64_t bits = mpz_sizeinbase(x.get_mpz_t(), 2);
    for (std::uint64_t q = 2; q <= bits; ++q) {
      if (!is_prime(q)) continue;
      mpz_class r;
      if (mpz_root(r.get_mpz_t(), x.get_mpz_t(), q)) {
        x = r;
        e *= q;
        again = true;
        break;
      }
    }
  }
  return {x, e};
}

struct Mpfr {
  mpfr_t v;
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v, prec); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
};

constexpr mpfr_prec_t kPrec = 256;

}  // namespace

bool HeightRecord::plus_is_one() const {
  return field == FieldKind::Rational ? H <= 2 : H <= 1;
}

double HeightRecord::height_estimate() const {
  return field == FieldKind::Rational ? log_of(H) : H.get_d();
}

double HeightRecord::plus_estimate() const { return plus_is_one() ? 1.0 : height_estimate(); }

std::string HeightRecord::to_string() const {
  return field == FieldKind::Rational ? "log " + H.get_str() : H.get_str();
}

std::vector<mpz_class> integral_coordinates(const Point& x) {
  if (!x.field().is_rational()) throw FieldMismatch("integral coordinates need a point over Q");
  mpz_class L = 1;
  for (const auto& c : x.coords()) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), c.rational().get_den_mpz_t());
  std::vector<mpz_class> out{L};
  for (const auto& c : x.coords()) out.push_back(L / c.rational().get_den() * c.rational().get_num());
  mpz_class g = 0;
  for (const auto& v : out) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  for (auto& v : out) v /= g;
  return out;
}

HeightRecord weil_height(const Point& x) {
  HeightRecord rec;
  const Field F = x.field();
  rec.field = F.kind;
  if (F.is_rational()) {
    rec.H = 1;
    for (const auto& v : integral_coordinates(x)) rec.H = std::max<mpz_class>(rec.H, abs(v));
    return rec;
  }
  if (F.kind != FieldKind::FunctionField) throw FieldMismatch("heights are defined over Q and F_p(t), not " + F.to_string());
  const std::uint64_t p = F.p;
  FpPoly L = FpPoly::constant(p, 1);
  for (const auto& c : x.coords()) L = lcm(L, c.fpt().den());
  std::vector<FpPoly> coords{L};
  for (const auto& c : x.coords()) coords.push_back(L.divmod(c.fpt().den()).first * c.fpt().num());
  FpPoly g(p);
  for (const auto& c : coords) g = gcd(g, c);
  std::size_t h = 0;
  for (const auto& c : coords) {
    if (c.is_zero()) continue;
    h = std::max(h, c.divmod(g).first.degree());
  }
  rec.H = static_cast<unsigned long>(h);
  return rec;
}

ArithmeticDegreeProfile arithmetic_degree_profile(const PolyMap& f, const Point& x, std::uint64_t n_max,
                                                  std::uint64_t bit_budget) {
  ArithmeticDegreeProfile out;
  Point z = x;
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    if (over_budget(z, bit_budget)) {
      out.budget_exceeded = true;
      break;
    }
    ProfileEntry e{weil_height(z), std::nullopt};
    e.height.n = n;
    if (n > 0) e.root = std::pow(e.height.plus_estimate(), 1.0 / static_cast<double>(n));
    out.entries.push_back(std::move(e));
    if (n < n_max) z = eval_map(f, z);
  }
  bool first = true;
  for (const auto& e : out.entries) {
    if (!e.root) continue;
    out.upper = first ? *e.root : std::max(out.upper, *e.root);
    out.lower = first ? *e.root : std::min(out.lower, *e.root);
    out.last = *e.root;
    first = false;
  }
  return out;
}

std::pair<mpq_class, bool> lambda_rational(const DegreeSequence& seq) {
  const IntegerRoot r = seq.lambda();
  if (auto e = r.exact()) return {mpq_class(*e), false};
  return {mpq_class(r.estimate()), true};
}

KsmFit ksm_fit(const PolyMap& f, const Point& x, const mpq_class& epsilon, std::uint64_t n_max,
               std::optional<mpq_class> lambda, std::uint64_t bit_budget) {
  if (epsilon < 0) throw Error("epsilon must be nonnegative");
  KsmFit out;
  if (lambda) {
    out.base = *lambda + epsilon;
  } else {
    const auto [lam, est] = lambda_rational(degree_sequence(f, std::max<std::uint64_t>(n_max, 1)));
    out.base = lam + epsilon;
    out.lambda_is_estimate = est;
  }
  if (out.base <= 0) throw Error("lambda + epsilon must be positive");
  const auto prof = arithmetic_degree_profile(f, x, n_max, bit_budget);
  out.budget_exceeded = prof.budget_exceeded;
  out.horizon = prof.entries.empty() ? 0 : prof.entries.back().height.n;
  const auto& h0 = prof.entries.at(0).height;
  const bool rational_field = h0.field == FieldKind::Rational;

  // ratio_n = h+_n * b^n / (a^n * h+_0) with base = a/b.
  auto plus_value = [&](const HeightRecord& h, mpfr_t out_v) {
    if (h.plus_is_one()) {
      mpfr_set_ui(out_v, 1, MPFR_RNDN);
    } else if (rational_field) {
      mpfr_set_z(out_v, h.H.get_mpz_t(), MPFR_RNDN);
      mpfr_log(out_v, out_v, MPFR_RNDN);
    } else {
      mpfr_set_z(out_v, h.H.get_mpz_t(), MPFR_RNDN);
    }
  };
  // Exact ratio when it is rational.
  auto exact_ratio = [&](const HeightRecord& h, std::uint64_t n) -> std::optional<mpq_class> {
    mpz_class an, bn;
    mpz_pow_ui(an.get_mpz_t(), out.base.get_num_mpz_t(), n);
    mpz_pow_ui(bn.get_mpz_t(), out.base.get_den_mpz_t(), n);
    const mpq_class scale(bn, an);
    if (!rational_field) {
      const mpz_class hn = h.plus_is_one() ? mpz_class(1) : h.H;
      const mpz_class hz = h0.plus_is_one() ? mpz_class(1) : h0.H;
      mpq_class r = scale * mpq_class(hn, hz);
      r.canonicalize();
      return r;
    }
    if (h.plus_is_one() && h0.plus_is_one()) {
      mpq_class r = scale;
      r.canonicalize();
      return r;
    }
    if (h.plus_is_one() != h0.plus_is_one()) return std::nullopt;
    const auto [rn, en] = minimal_root(h.H);
    const auto [r0, e0] = minimal_root(h0.H);
    if (rn != r0) return std::nullopt;
    mpq_class r = scale * mpq_class(mpz_class(static_cast<unsigned long>(en)), mpz_class(static_cast<unsigned long>(e0)));
    r.canonicalize();
    return r;
  };

  Mpfr hz(kPrec), best(kPrec), cur(kPrec), t(kPrec);
  plus_value(h0, hz.v);
  std::vector<std::uint64_t> ties;
  for (const auto& e : prof.entries) {
    const std::uint64_t n = e.height.n;
    mpz_class an, bn;
    mpz_pow_ui(an.get_mpz_t(), out.base.get_num_mpz_t(), n);
    mpz_pow_ui(bn.get_mpz_t(), out.base.get_den_mpz_t(), n);
    plus_value(e.height, cur.v);
    mpfr_mul_z(cur.v, cur.v, bn.get_mpz_t(), MPFR_RNDN);
    mpfr_div_z(cur.v, cur.v, an.get_mpz_t(), MPFR_RNDN);
    mpfr_div(cur.v, cur.v, hz.v, MPFR_RNDN);
    out.ratios.push_back(mpfr_get_d(cur.v, MPFR_RNDN));
    if (ties.empty()) {
      mpfr_set(best.v, cur.v, MPFR_RNDN);
      ties = {n};
      continue;
    }
    // Relative gap below 2^-200 counts as a tie, settled exactly below.
    mpfr_sub(t.v, cur.v, best.v, MPFR_RNDN);
    mpfr_abs(t.v, t.v, MPFR_RNDN);
    mpfr_mul_2si(t.v, t.v, 200, MPFR_RNDN);
    if (mpfr_lessequal_p(t.v, best.v)) {
      ties.push_back(n);
    } else if (mpfr_greater_p(cur.v, best.v)) {
      mpfr_set(best.v, cur.v, MPFR_RNDN);
      ties = {n};
    }
  }
  out.argmax = ties.front();
  out.c = mpfr_get_d(best.v, MPFR_RNDN);
  char buf[64];
  mpfr_snprintf(buf, sizeof buf, "%.20Rg", best.v);
  out.c_decimal = buf;

  std::optional<mpq_class> common;
  bool all_exact = true;
  for (auto n : ties) {
    auto r = exact_ratio(prof.entries[n].height, n);
    if (!r) {
      all_exact = false;
      continue;
    }
    if (!common || *r > *common) common = r;
  }
  if (common && all_exact) {
    out.c_exact = common;
    for (auto n : ties)
      if (*exact_ratio(prof.entries[n].height, n) == *common) out.equality.push_back(n);
    out.argmax = out.equality.front();
  }
  return out;
}

mpz_class height_growth_constant(const PolyMap& f) {
  if (!f.field().is_rational()) throw FieldMismatch("height growth constant needs a map over Q");
  mpz_class D = 1;
  for (const auto& c : f.coords())
    for (const auto& [m, s] : c.terms()) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), s.rational().get_den_mpz_t());
  mpz_class B = D;
  for (const auto& c : f.coords()) {
    mpz_class norm = 0;
    for (const auto& [m, s] : c.terms()) norm += abs(s.rational().get_num()) * (D / s.rational().get_den());
    B = std::max(B, norm);
  }
  return B;
}

}  // namespace dml
