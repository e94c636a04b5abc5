#include "dml/return_set.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "dml/errors.hpp"
#include "dml/fp_poly.hpp"
#include "dml/residue.hpp"

namespace dml {

OrbitProblem::OrbitProblem(PolyMap f_, Point x_, MultiPoly g_, std::vector<MultiPoly> extra)
    : f(std::move(f_)), x(std::move(x_)), g(std::move(g_)), extra_targets(std::move(extra)) {
  if (x.dim() != f.dim()) throw DimensionMismatch("point dimension does not match the map");
  for (const auto& t : targets()) {
    if (t.nvars() != f.dim()) throw DimensionMismatch("target variable count does not match the map");
    if (!(t.field() == f.field())) throw FieldMismatch("target and map over different fields");
  }
  for (const auto& c : x.coords())
    if (!(c.field() == f.field())) throw FieldMismatch("point and map over different fields");
}

std::vector<MultiPoly> OrbitProblem::targets() const {
  std::vector<MultiPoly> out{g};
  out.insert(out.end(), extra_targets.begin(), extra_targets.end());
  return out;
}

Recurrence::Recurrence(std::vector<mpq_class> a, std::vector<mpq_class> init)
    : coeffs(std::move(a)), initial(std::move(init)) {
  if (coeffs.empty()) throw Error("recurrence order must be at least 1");
  if (initial.size() != coeffs.size())
    throw DimensionMismatch("recurrence needs exactly l initial values for order l");
}

std::vector<mpq_class> Recurrence::terms(std::size_t count) const {
  std::vector<mpq_class> out(initial.begin(), initial.end());
  const std::size_t l = order();
  while (out.size() < count) {
    mpq_class next = 0;
    const std::size_t n = out.size() - l;
    for (std::size_t i = 0; i < l; ++i) next += coeffs[i] * out[n + i];
    out.push_back(next);
  }
  out.resize(count);
  return out;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Certified: return "CERTIFIED";
    case Status::CertifiedNumeric: return "CERTIFIED-NUMERIC";
    case Status::Partial: return "PARTIAL";
  }
  return "PARTIAL";
}

Status status_from_string(const std::string& s) {
  if (s == "CERTIFIED") return Status::Certified;
  if (s == "CERTIFIED-NUMERIC") return Status::CertifiedNumeric;
  if (s == "PARTIAL") return Status::Partial;
  throw SchemaError("unknown status '" + s + "'");
}

int status_rank(Status s) {
  switch (s) {
    case Status::Certified: return 2;
    case Status::CertifiedNumeric: return 1;
    case Status::Partial: return 0;
  }
  return 0;
}

bool ReturnSet::contains(std::uint64_t n) const {
  if (std::binary_search(sporadic.begin(), sporadic.end(), n)) return true;
  return std::any_of(progressions.begin(), progressions.end(), [n](const Progression& pr) { return pr.contains(n); });
}

std::vector<std::uint64_t> ReturnSet::members_up_to(std::uint64_t n_max) const {
  std::set<std::uint64_t> out;
  for (auto n : sporadic)
    if (n <= n_max) out.insert(n);
  for (const auto& pr : progressions)
    for (std::uint64_t n = pr.b; n <= n_max; n += pr.a) out.insert(n);
  return {out.begin(), out.end()};
}

namespace {

std::uint64_t scalar_bits(const Scalar& c) {
  switch (c.field().kind) {
    case FieldKind::Rational:
      return mpz_sizeinbase(c.rational().get_num_mpz_t(), 2) + mpz_sizeinbase(c.rational().get_den_mpz_t(), 2);
    case FieldKind::PrimeField: return 64;
    case FieldKind::FunctionField: {
      const auto& q = c.fpt();
      const std::uint64_t w = static_cast<std::uint64_t>(std::bit_width(c.field().p));
      return (q.num().coeffs().size() + q.den().coeffs().size()) * w;
    }
  }
  return 0;
}

}  // namespace

BruteForceResult brute_force_scan(const OrbitProblem& prob, std::uint64_t n_max, std::uint64_t bit_budget) {
  BruteForceResult out;
  const auto targets = prob.targets();
  auto member = [&](const Point& z) {
    for (const auto& t : targets)
      if (!t.eval(z.coords()).is_zero()) return false;
    return true;
  };
  constexpr std::size_t kKeyLimit = 512;
  std::unordered_map<std::string, std::uint64_t> seen;
  Point z = prob.x;
  std::vector<char> hit;
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    if (bit_budget) {
      for (const auto& c : z.coords()) {
        if (scalar_bits(c) > bit_budget) {
          out.budget_exceeded = true;
          break;
        }
      }
      if (out.budget_exceeded) {
        out.horizon = n == 0 ? 0 : n - 1;
        if (n == 0) hit.clear();
        break;
      }
    }
    const std::string key = z.to_string();
    if (key.size() <= kKeyLimit) {
      auto [it, fresh] = seen.emplace(key, n);
      if (!fresh) {
        const std::uint64_t s = it->second, m = n - s;
        out.exact_cycle = std::make_pair(s, m);
        for (std::uint64_t k = n; k <= n_max; ++k) {
          const char h = hit[s + (k - s) % m];
          hit.push_back(h);
        }
        out.horizon = n_max;
        break;
      }
    }
    hit.push_back(member(z) ? 1 : 0);
    out.horizon = n;
    if (n < n_max) z = eval_map(prob.f, z);
  }
  for (std::uint64_t n = 0; n < hit.size() && n <= out.horizon; ++n)
    if (hit[n]) out.hits.push_back(n);
  return out;
}

std::vector<std::uint64_t> brute_force_returns(const OrbitProblem& prob, std::uint64_t n_max, std::uint64_t bit_budget) {
  auto r = brute_force_scan(prob, n_max, bit_budget);
  if (r.budget_exceeded)
    throw BudgetExceeded("orbit coefficients exceed " + std::to_string(bit_budget) + " bits after n=" +
                         std::to_string(r.horizon));
  return r.hits;
}

bool is_integral_at(const OrbitProblem& prob, std::uint64_t p) {
  if (!prob.f.field().is_rational()) return false;
  auto ok = [p](const Scalar& c) { return padic_valuation(c.rational().get_den(), p) == 0; };
  for (const auto& c : prob.f.coords())
    for (const auto& [m, s] : c.terms())
      if (!ok(s)) return false;
  for (const auto& t : prob.targets())
    for (const auto& [m, s] : t.terms())
      if (!ok(s)) return false;
  for (const auto& c : prob.x.coords())
    if (!ok(c)) return false;
  return true;
}

std::vector<std::uint64_t> prime_order(std::span<const std::uint64_t> candidates) {
  std::vector<std::uint64_t> odd, two;
  for (auto p : candidates) {
    if (!is_prime(p)) throw Error("prime candidate " + std::to_string(p) + " is not prime");
    (p == 2 ? two : odd).push_back(p);
  }
  std::sort(odd.begin(), odd.end());
  odd.erase(std::unique(odd.begin(), odd.end()), odd.end());
  if (!two.empty()) odd.push_back(2);
  return odd;
}

std::uint64_t select_prime(const OrbitProblem& prob, std::span<const std::uint64_t> candidates) {
  if (!prob.f.field().is_rational()) throw FieldMismatch("prime selection needs a problem over Q");
  for (auto p : prime_order(candidates))
    if (is_integral_at(prob, p)) return p;
  throw NoGoodPrime("no candidate prime makes the problem integral");
}

ResidueCycle residue_cycle(const PolyMap& f, const Point& x, std::uint64_t p, long e, std::uint64_t state_cap) {
  const std::size_t n = f.dim();
  mpz_class states = prime_power(p, e * static_cast<long>(n));
  if (states > mpz_class(static_cast<unsigned long>(state_cap)))
    throw BudgetExceeded("residue state space " + std::to_string(p) + "^" + std::to_string(e * static_cast<long>(n)) +
                         " exceeds the cap");
  const ResidueMap fr = reduce_mod_p(f, p, e);
  std::vector<mpz_class> z = reduce_mod_p(x, p, e).coords;
  std::map<std::vector<mpz_class>, std::uint64_t> seen;
  std::vector<std::vector<mpz_class>> orbit;
  for (std::uint64_t i = 0;; ++i) {
    auto [it, fresh] = seen.emplace(z, i);
    if (!fresh) {
      ResidueCycle c;
      c.p = p;
      c.e = e;
      c.preperiod = it->second;
      c.period = i - it->second;
      c.cycle.assign(orbit.begin() + static_cast<long>(c.preperiod), orbit.end());
      return c;
    }
    orbit.push_back(z);
    z = fr.eval(z);
  }
}

namespace {

std::uint64_t gcd_u(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

// Smallest n >= lower with n = b1 mod a1 and n = b2 mod a2.
std::optional<Progression> crt(const Progression& x, const Progression& y) {
  const std::uint64_t g = gcd_u(x.a, y.a);
  const __int128 diff = static_cast<__int128>(y.b) - static_cast<__int128>(x.b);
  if (diff % static_cast<__int128>(g) != 0) return std::nullopt;
  const std::uint64_t a1 = x.a / g, a2 = y.a / g;
  const __int128 L = static_cast<__int128>(x.a) * a2;
  // x.b + x.a * t with x.a*t = diff mod y.a  ->  a1*t = diff/g mod a2
  __int128 t = 0;
  if (a2 > 1) {
    const std::uint64_t inv = inv_mod(a1 % a2, a2);
    __int128 r = (diff / g) % static_cast<__int128>(a2);
    if (r < 0) r += a2;
    t = (r * inv) % a2;
  }
  __int128 n0 = static_cast<__int128>(x.b) + static_cast<__int128>(x.a) * t;
  const __int128 lower = std::max(x.b, y.b);
  if (n0 < lower) n0 += ((lower - n0 + L - 1) / L) * L;
  return Progression{static_cast<std::uint64_t>(L), static_cast<std::uint64_t>(n0)};
}

}  // namespace

void minimize(ReturnSet& rs) {
  auto& P = rs.progressions;
  auto& S = rs.sporadic;
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(P.begin(), P.end());
    P.erase(std::unique(P.begin(), P.end()), P.end());
    // Coarsen: (a, b), (a, b+q), ..., (a, b+a-q) -> (q, b).
    std::set<Progression> have(P.begin(), P.end());
    for (const auto& pr : P) {
      for (std::uint64_t q = 1; q < pr.a && !changed; ++q) {
        if (pr.a % q) continue;
        bool all = true;
        for (std::uint64_t j = 1; j < pr.a / q && all; ++j) all = have.count({pr.a, pr.b + j * q}) > 0;
        if (!all) continue;
        std::vector<Progression> next;
        for (const auto& o : P) {
          const bool absorbed = o.a == pr.a && o.b >= pr.b && (o.b - pr.b) % q == 0 && o.b < pr.b + pr.a;
          if (!absorbed) next.push_back(o);
        }
        next.push_back({q, pr.b});
        P = std::move(next);
        changed = true;
      }
      if (changed) break;
    }
    if (changed) continue;
    // Extend backwards through sporadic points.
    for (auto& pr : P) {
      while (pr.b >= pr.a && std::binary_search(S.begin(), S.end(), pr.b - pr.a)) {
        S.erase(std::lower_bound(S.begin(), S.end(), pr.b - pr.a));
        pr.b -= pr.a;
        changed = true;
      }
    }
    // Drop progressions contained in others.
    for (std::size_t i = 0; i < P.size() && !changed; ++i) {
      for (std::size_t j = 0; j < P.size(); ++j) {
        if (i == j) continue;
        if (P[i].a % P[j].a == 0 && P[j].contains(P[i].b)) {
          P.erase(P.begin() + static_cast<long>(i));
          changed = true;
          break;
        }
      }
    }
  }
  std::sort(P.begin(), P.end());
  S.erase(std::remove_if(S.begin(), S.end(),
                         [&](std::uint64_t n) {
                           return std::any_of(P.begin(), P.end(), [n](const Progression& pr) { return pr.contains(n); });
                         }),
          S.end());
}

ReturnSet intersect(const ReturnSet& a, const ReturnSet& b) {
  ReturnSet out;
  for (auto n : a.sporadic)
    if (b.contains(n)) out.sporadic.push_back(n);
  for (auto n : b.sporadic)
    if (a.contains(n)) out.sporadic.push_back(n);
  for (const auto& x : a.progressions)
    for (const auto& y : b.progressions)
      if (auto z = crt(x, y)) out.progressions.push_back(*z);
  out.unresolved = a.unresolved;
  out.unresolved.insert(out.unresolved.end(), b.unresolved.begin(), b.unresolved.end());
  out.status = status_rank(a.status) <= status_rank(b.status) ? a.status : b.status;
  if (!out.unresolved.empty()) out.status = Status::Partial;
  out.certificate.method = "intersection";
  out.certificate.oracle_horizon = std::min(a.certificate.oracle_horizon, b.certificate.oracle_horizon);
  out.certificate.notes.push_back("first target: " + a.certificate.method + " at p=" + std::to_string(a.certificate.prime));
  out.certificate.notes.push_back("second target: " + b.certificate.method + " at p=" + std::to_string(b.certificate.prime));
  minimize(out);
  return out;
}

}  // namespace dml
