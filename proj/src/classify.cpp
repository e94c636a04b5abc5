#include <algorithm>
#include <map>
#include <numeric>

#include "dml/affinoid.hpp"
#include "dml/errors.hpp"
#include "dml/interpolate.hpp"
#include "dml/padic_series.hpp"
#include "dml/return_set.hpp"

namespace dml {

namespace {

struct Oracle {
  std::vector<char> hit;
  std::uint64_t horizon = 0;
  bool operator()(std::uint64_t n) const { return n <= horizon && n < hit.size() && hit[n]; }
};

std::vector<std::vector<mpz_class>> residue_orbit(const PolyMap& f, const Point& x, std::uint64_t p, long prec,
                                                  std::uint64_t count) {
  const ResidueMap fr = reduce_mod_p(f, p, prec);
  std::vector<mpz_class> z = reduce_mod_p(x, p, prec).coords;
  std::vector<std::vector<mpz_class>> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    out.push_back(z);
    if (i + 1 < count) z = fr.eval(z);
  }
  return out;
}

using Matrix = std::vector<std::vector<std::uint64_t>>;

struct AffineMap {
  Matrix J;
  std::vector<std::uint64_t> c;
  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

AffineMap affine_reduction(const AffinoidSelfMap& H) {
  const std::size_t n = H.dim();
  const std::uint64_t p = H.prime();
  const mpz_class pz(static_cast<unsigned long>(p));
  AffineMap A{Matrix(n, std::vector<std::uint64_t>(n, 0)), std::vector<std::uint64_t>(n, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [m, coef] : H[i].terms()) {
      mpz_class r;
      mpz_mod(r.get_mpz_t(), coef.get_mpz_t(), pz.get_mpz_t());
      const std::uint64_t v = r.get_ui();
      const std::uint64_t deg = monomial_degree(m);
      if (deg == 0) {
        A.c[i] = v;
      } else if (deg == 1) {
        const auto j = static_cast<std::size_t>(std::find(m.begin(), m.end(), 1u) - m.begin());
        A.J[i][j] = v;
      } else if (v != 0) {
        throw Error("recentered map is not affine modulo p");
      }
    }
  }
  return A;
}

bool invertible_mod(Matrix J, std::uint64_t p) {
  const std::size_t n = J.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && J[piv][col] % p == 0) ++piv;
    if (piv == n) return false;
    std::swap(J[piv], J[col]);
    const std::uint64_t inv = inv_mod(J[col][col], p);
    for (std::size_t r = col + 1; r < n; ++r) {
      const std::uint64_t f = mul_mod(J[r][col], inv, p);
      for (std::size_t k = col; k < n; ++k) J[r][k] = (J[r][k] + p - mul_mod(f, J[col][k], p)) % p;
    }
  }
  return true;
}

AffineMap compose_affine(const AffineMap& a, const AffineMap& b, std::uint64_t p) {
  const std::size_t n = a.c.size();
  AffineMap out{Matrix(n, std::vector<std::uint64_t>(n, 0)), a.c};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < n; ++k) acc = (acc + mul_mod(a.J[i][k], b.J[k][j], p)) % p;
      out.J[i][j] = acc;
      out.c[i] = (out.c[i] + mul_mod(a.J[i][j], b.c[j], p)) % p;
    }
  }
  return out;
}

std::optional<std::uint64_t> affine_order(const AffineMap& A, std::uint64_t p, std::uint64_t cap) {
  const std::size_t n = A.c.size();
  AffineMap id{Matrix(n, std::vector<std::uint64_t>(n, 0)), std::vector<std::uint64_t>(n, 0)};
  for (std::size_t i = 0; i < n; ++i) id.J[i][i] = 1;
  AffineMap cur = A;
  for (std::uint64_t M = 1; M <= cap; ++M) {
    if (cur == id) return M;
    cur = compose_affine(A, cur, p);
  }
  return std::nullopt;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r.fits_ulong_p() ? r.get_ui() : std::numeric_limits<std::uint64_t>::max();
}

struct Level {
  MahlerPlan plan;
  std::vector<std::vector<mpz_class>> orbit;
};

ReturnSet classify_at_prime(const OrbitProblem& prob, std::uint64_t p, const ClassifyConfig& cfg, const Oracle& oracle) {
  ReturnSet rs;
  auto& cert = rs.certificate;
  cert.method = "p-adic";
  cert.prime = p;
  cert.level = 1;
  cert.oracle_horizon = oracle.horizon;
  cert.k_evidence = cfg.k_evidence;
  auto partial = [&](const std::string& why) {
    rs.progressions.clear();
    rs.sporadic.clear();
    rs.unresolved = {{1, 0, why}};
    rs.status = Status::Partial;
    return rs;
  };

  const PolyMap& f = prob.f;
  const std::size_t N = f.dim();
  ResidueCycle cyc;
  try {
    cyc = residue_cycle(f, prob.x, p, 1, cfg.state_cap);
  } catch (const BudgetExceeded& e) {
    return partial(e.what());
  }
  const std::uint64_t s = cyc.preperiod, m = cyc.period;
  cert.preperiod = s;
  cert.period = m;
  if (oracle.horizon < s) return partial("oracle horizon does not reach the preperiod");

  // Every class map H_r reduces mod p to an affine map; its order M_r makes
  // the recentered f^(m*M_r) the identity mod p, so ||Delta|| <= 1/p.
  constexpr long kd = 2;
  std::uint64_t M = 1;
  {
    const auto centers = residue_orbit(f, prob.x, p, kd + 1, s + m);
    for (std::uint64_t r = 0; r < m; ++r) {
      const auto H = AffinoidSelfMap::recenter(f, centers[s + r], p, 1, m, kd);
      const AffineMap A = affine_reduction(H);
      if (!invertible_mod(A.J, p)) return partial("Jacobian of f^m is singular modulo p on the residue cycle");
      const auto ord = affine_order(A, p, cfg.class_cap);
      if (!ord) return partial("affine reduction order exceeds the class cap");
      M = std::lcm(M, *ord);
      if (m * M > cfg.class_cap) return partial("class modulus exceeds the cap");
    }
  }
  const RConstant R(p);
  std::uint64_t boost = 1;
  long d = 1;
  if (!R.exceeds_norm(1)) {
    // Residue characteristic 2: recompute the norm on p-fold iterates until it beats R.
    for (int round = 0;; ++round) {
      const std::uint64_t mb = m * M * boost;
      if (mb > cfg.class_cap || round > cfg.e_cap) return partial("boosting exceeds the class cap or the boost exponent cap");
      const auto centers = residue_orbit(f, prob.x, p, kd + 1, s + mb);
      long dmin = kd;
      for (std::uint64_t r = 0; r < mb && R.exceeds_norm(dmin); ++r)
        dmin = std::min(dmin, delta_norm(AffinoidSelfMap::recenter(f, centers[s + r], p, 1, mb, kd)).d);
      if (R.exceeds_norm(dmin)) {
        d = dmin;
        break;
      }
      boost *= p;
    }
  }
  const std::uint64_t mm = m * M * boost;
  cert.extension = M;
  cert.boost = boost;
  cert.class_modulus = mm;

  for (std::uint64_t n = 0; n < s; ++n)
    if (oracle(n)) rs.sporadic.push_back(n);

  std::vector<long> ladder;
  for (long k = cfg.k; k < cfg.k_max; k *= 2) ladder.push_back(k);
  ladder.push_back(std::max(cfg.k, cfg.k_max));
  cert.precision_ladder = ladder;

  std::map<long, Level> levels;
  auto level = [&](long k) -> const Level& {
    auto it = levels.find(k);
    if (it != levels.end()) return it->second;
    Level L;
    L.plan = plan_mahler(p, d, k);
    L.orbit = residue_orbit(f, prob.x, p, L.plan.working_precision + 1, s + mm * (L.plan.degree + 1));
    return levels.emplace(k, std::move(L)).first->second;
  };

  std::vector<Point> exact{prob.x};
  auto exact_point = [&](std::uint64_t n) -> const Point& {
    while (exact.size() <= n) exact.push_back(eval_map(f, exact.back()));
    return exact[n];
  };
  // G(T) at T < 0 is rebuilt from its digits and accepted only if it lies in
  // the class disc and f^mm maps it exactly onto G(T+1); H is injective on
  // the disc, so the rebuilt point is G(T) itself.
  auto backward_zeros = [&](std::span<const PadicSeries> X, std::uint64_t b) {
    std::vector<long> out;
    Point next = exact_point(b);
    for (long T = -1; T >= -cfg.negative_probe; --T) {
      std::vector<Scalar> coords;
      for (std::size_t j = 0; j < N; ++j) {
        const PadicNumber v = X[j].eval(mpz_class(T));
        const long tau = v.absolute_precision();
        if (tau < 2) return out;
        const auto q = rational_reconstruction(v.residue(tau), prime_power(p, tau));
        if (!q || padic_valuation(q->get_den(), p) > 0) return out;
        if (reduce_rational(*q, p, 1) != reduce_rational(next[j].rational(), p, 1)) return out;
        coords.emplace_back(*q);
      }
      const Point w(std::move(coords));
      Point img = w;
      for (std::uint64_t i = 0; i < mm; ++i) img = eval_map(f, img);
      if (!(img == next)) return out;
      if (prob.g.eval(w.coords()).is_zero()) out.push_back(T);
      next = w;
    }
    return out;
  };

  const bool affine = !f.total_degree().is_neg_infinity() && f.total_degree().value() <= 1;
  const std::uint64_t gdeg = prob.g.total_degree().value();
  const std::uint64_t closure = binomial(N + gdeg, N);
  bool numeric = false;

  for (std::uint64_t r = 0; r < mm; ++r) {
    const std::uint64_t b = s + r;
    ClassRecord rec;
    rec.modulus = mm;
    rec.offset = b;
    rec.delta_exponent = d;
    const long t_max = oracle.horizon >= b ? static_cast<long>((oracle.horizon - b) / mm) : -1;
    auto class_hit = [&](long T) { return oracle(b + mm * static_cast<std::uint64_t>(T)); };

    // Affine f: the monomials of degree <= deg g span an f-stable space of
    // dimension C(N+deg g, N), so that many consecutive zeros force all zeros.
    if (affine && t_max + 1 >= static_cast<long>(closure)) {
      bool all = true;
      for (std::uint64_t T = 0; T < closure && all; ++T) all = class_hit(static_cast<long>(T));
      if (all) {
        rec.method = "affine-closure";
        rs.progressions.push_back({mm, b});
        cert.classes.push_back(rec);
        continue;
      }
    }

    bool settled = false, ever_nondegenerate = false;
    for (long k : ladder) {
      const Level& L = level(k);
      const long W = L.plan.working_precision;
      const mpz_class modW = prime_power(p, W);
      const std::uint64_t D = L.plan.degree;
      std::vector<PadicSeries> X;
      const auto& z0 = L.orbit[b];
      for (std::size_t j = 0; j < N; ++j) {
        std::vector<mpz_class> u;
        u.reserve(D + 1);
        for (std::uint64_t T = 0; T <= D; ++T) {
          mpz_class diff = L.orbit[b + mm * T][j] - z0[j];
          mpz_divexact_ui(diff.get_mpz_t(), diff.get_mpz_t(), static_cast<unsigned long>(p));
          u.push_back(std::move(diff));
        }
        const PadicSeries G = from_mahler(forward_differences(u, modW), p, W, d);
        std::vector<mpz_class> shifted = G.scaled_coefficients();
        for (auto& c : shifted) c *= static_cast<unsigned long>(p);
        const PadicSeries pG(p, G.scale(), G.tail() + 1, std::move(shifted));
        X.push_back(PadicSeries::constant(PadicNumber::from_residue(z0[j], p, W + 1), W + 1) + pG);
      }
      const PadicSeries S = compose_polynomial(prob.g, X);
      if (strassmann_bound(S).degenerate()) continue;
      ever_nondegenerate = true;
      IntegerZeros z;
      ZeroSearchOptions zopts;
      zopts.max_depth = cfg.zero_search_depth;
      try {
        z = find_integer_zeros(S, t_max, class_hit, zopts);
        if (!z.resolved && cfg.negative_probe > 0) {
          zopts.known_zeros = backward_zeros(X, b);
          if (!zopts.known_zeros.empty()) z = find_integer_zeros(S, t_max, class_hit, zopts);
        }
      } catch (const PrecisionExhausted&) {
        continue;
      }
      rec.backward_zeros.clear();
      for (long T : zopts.known_zeros) rec.backward_zeros.push_back(static_cast<long long>(b) + static_cast<long long>(mm) * T);
      rec.strassmann_bound = z.bound;
      rec.precision = k;
      rec.tail = S.tail();
      rec.series_degree = D;
      rec.separation_depth = z.depth;
      for (long T : z.zeros) rec.hits.push_back(b + mm * static_cast<std::uint64_t>(T));
      if (z.resolved) {
        rec.method = "strassmann";
        rs.sporadic.insert(rs.sporadic.end(), rec.hits.begin(), rec.hits.end());
      } else {
        rec.method = "unresolved";
        rs.unresolved.push_back({mm, b,
                                 "Strassmann bound " + std::to_string(z.bound) + " exceeds the " +
                                     std::to_string(z.zeros.size()) + " hits found up to n=" +
                                     std::to_string(oracle.horizon)});
      }
      settled = true;
      break;
    }
    if (!settled) {
      rec.precision = ladder.back();
      bool evidence = !ever_nondegenerate && oracle.horizon >= cfg.k_evidence && b <= cfg.k_evidence;
      for (std::uint64_t n = b; evidence && n <= cfg.k_evidence; n += mm) evidence = oracle(n);
      if (evidence) {
        rec.method = "numeric-evidence";
        rs.progressions.push_back({mm, b});
        numeric = true;
      } else {
        rec.method = "unresolved";
        rs.unresolved.push_back({mm, b,
                                 ever_nondegenerate ? "zero separation failed up to k_max"
                                                    : "class series vanishes to k_max without exact evidence"});
      }
    }
    cert.classes.push_back(std::move(rec));
  }
  rs.status = !rs.unresolved.empty() ? Status::Partial : numeric ? Status::CertifiedNumeric : Status::Certified;
  minimize(rs);
  return rs;
}

ReturnSet classify_single(const OrbitProblem& prob, const ClassifyConfig& cfg) {
  ReturnSet rs;
  rs.certificate.method = "trivial";
  rs.certificate.k_evidence = cfg.k_evidence;
  if (prob.g.is_zero()) {
    rs.progressions.push_back({1, 0});
    return rs;
  }
  if (prob.g.is_constant()) return rs;

  const auto scan = brute_force_scan(prob, cfg.n_max, cfg.bit_budget);
  if (scan.exact_cycle) {
    const auto [s, m] = *scan.exact_cycle;
    rs.certificate.method = "exact-cycle";
    rs.certificate.preperiod = s;
    rs.certificate.period = m;
    rs.certificate.class_modulus = m;
    rs.certificate.oracle_horizon = scan.horizon;
    for (auto n : scan.hits) {
      if (n < s)
        rs.sporadic.push_back(n);
      else if (n < s + m)
        rs.progressions.push_back({m, n});
    }
    minimize(rs);
    return rs;
  }

  Oracle oracle;
  oracle.horizon = scan.horizon;
  oracle.hit.assign(scan.horizon + 1, 0);
  for (auto n : scan.hits) oracle.hit[n] = 1;

  std::vector<std::uint64_t> primes;
  for (auto p : prime_order(cfg.primes))
    if (is_integral_at(prob, p)) primes.push_back(p);
  if (primes.empty()) throw NoGoodPrime("no candidate prime makes the problem integral");

  std::optional<ReturnSet> best;
  std::size_t attempts = 0;
  for (auto p : primes) {
    ReturnSet cand = classify_at_prime(prob, p, cfg, oracle);
    if (scan.budget_exceeded)
      cand.certificate.notes.push_back("exact orbit stopped at n=" + std::to_string(scan.horizon) + " by the bit budget");
    if (!best || status_rank(cand.status) > status_rank(best->status)) best = std::move(cand);
    ++attempts;
    if (best->status == Status::Certified || (cfg.prime_attempts && attempts >= cfg.prime_attempts)) break;
  }
  return *best;
}

}  // namespace

ReturnSet classify_returns(const OrbitProblem& prob, const ClassifyConfig& config) {
  if (!prob.f.field().is_rational())
    throw FieldMismatch("the p-adic classifier needs a problem over Q; use brute force over " +
                        prob.f.field().to_string());
  if (prob.extra_targets.empty()) return classify_single(prob, config);
  std::optional<ReturnSet> acc;
  for (const auto& t : prob.targets()) {
    ReturnSet one = classify_single(OrbitProblem(prob.f, prob.x, t), config);
    acc = acc ? intersect(*acc, one) : one;
  }
  return *acc;
}

}  // namespace dml
