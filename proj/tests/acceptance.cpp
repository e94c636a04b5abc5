// Acceptance checks 1-8. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "classifier_corpus.hpp"
#include "dml/degrees.hpp"
#include "dml/density.hpp"
#include "dml/errors.hpp"
#include "dml/heights.hpp"
#include "dml/interpolate.hpp"
#include "dml/parse.hpp"
#include "dml/report.hpp"
#include "dml/return_set.hpp"
#include "random_maps.hpp"

using namespace dml;

namespace {

const Field Q = Field::rational();

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail.clear();
    pass = false;
    detail += (detail.empty() ? "" : "; ") + what;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(3);
  os << s << "s";
  return os.str();
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << "}";
  return os.str();
}

OrbitProblem problem(const char* f, const char* x, const char* g, const Field& F = Q) {
  const PolyMap map = parse_map(f, F);
  return OrbitProblem(map, parse_point(x, F), parse_poly(g, map.dim(), F));
}

std::vector<mpq_class> qs(std::initializer_list<long> v) {
  std::vector<mpq_class> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

std::vector<mpz_class> residues(const std::vector<PadicNumber>& v, long e) {
  std::vector<mpz_class> out;
  for (const auto& x : v) out.push_back(x.residue(e));
  return out;
}

std::vector<mpz_class> reduced(std::vector<mpz_class> v, std::uint64_t p, long e) {
  const mpz_class m = prime_power(p, e);
  for (auto& c : v) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  return v;
}

bool identity_at(const AffinoidSelfMap& H, long prec) {
  for (std::size_t j = 0; j < H.dim(); ++j)
    if (H[j].with_precision(prec) != ResiduePoly::variable(H.dim(), H.prime(), prec, j)) return false;
  return true;
}

// The 50 maps shared by criteria 3 and 4.
std::vector<testing::RandomAffinoid> random_corpus() {
  std::mt19937_64 rng(20240611);
  std::vector<testing::RandomAffinoid> out;
  const std::uint64_t primes[] = {3, 5, 7};
  for (int i = 0; i < 50; ++i) {
    const std::uint64_t p = primes[i % 3];
    const std::size_t dim = 1 + static_cast<std::size_t>((i / 3) % 3);
    out.push_back(testing::random_affinoid(rng, p, dim, 16));
  }
  return out;
}

// Criterion 1: positive characteristic return sets.
Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto c2 = brute_force_returns(
      problem("(t*x1, (1-t)*x2)", "(1, 1)", "x1 + x2 - 1", Field::function_field(2)), 64);
  const double s2 = seconds_since(t0);
  const auto t1 = std::chrono::steady_clock::now();
  const auto c3 = brute_force_returns(
      problem("(t*x1, (1-t)*x2)", "(1, 1)", "x1 + x2 - 1", Field::function_field(3)), 81);
  const double s3 = seconds_since(t1);
  o.require(c2 == std::vector<std::uint64_t>{1, 2, 4, 8, 16, 32, 64}, "F_2(t) returns " + join(c2));
  o.require(c3 == std::vector<std::uint64_t>{1, 3, 9, 27, 81}, "F_3(t) returns " + join(c3));
  o.require(s2 < 5 && s3 < 5, "runtime over 5s");
  if (o.pass)
    o.detail = "F_2(t) " + join(c2) + " in " + fmt_seconds(s2) + ", F_3(t) " + join(c3) + " in " + fmt_seconds(s3);
  return o;
}

// Criterion 2: recurrences, checked against the terms themselves on [0, 10^4].
Outcome criterion2() {
  Outcome o;
  struct Case {
    const char* name;
    Recurrence rec;
    std::vector<Progression> progressions;
    std::vector<std::uint64_t> sporadic;
  };
  const std::vector<Case> cases{
      {"fibonacci", Recurrence(qs({1, 1}), qs({0, 1})), {}, {0}},
      {"A(n+2)=4A(n)", Recurrence(qs({4, 0}), qs({0, 1})), {{2, 0}}, {}},
  };
  const std::uint64_t horizon = 10000;
  std::string summary;
  for (const auto& c : cases) {
    const auto rs = sml_solve(c.rec);
    const std::string name = c.name;
    o.require(rs.status == Status::Certified || rs.status == Status::CertifiedNumeric,
              name + " status " + to_string(rs.status));
    o.require(rs.progressions == c.progressions && rs.sporadic == c.sporadic, name + " wrong zero set");
    const auto terms = c.rec.terms(horizon + 1);
    std::vector<std::uint64_t> zeros;
    for (std::uint64_t n = 0; n <= horizon; ++n)
      if (terms[n] == 0) zeros.push_back(n);
    o.require(rs.members_up_to(horizon) == zeros, name + " disagrees with the sequence on [0, 10^4]");
    o.require(brute_force_returns(companion_problem(c.rec), horizon) == zeros,
              name + " companion orbit disagrees with the sequence");
    std::size_t accounted = 0;
    for (const auto& cls : rs.certificate.classes) {
      if (cls.method == "strassmann") {
        o.require(cls.strassmann_bound.has_value(), name + " class without a bound");
        if (cls.strassmann_bound) {
          o.require(cls.hits.size() + cls.backward_zeros.size() <= *cls.strassmann_bound,
                    name + " class exceeds its Strassmann bound");
          ++accounted;
        }
      }
    }
    o.require(!rs.certificate.classes.empty(), name + " certificate has no class records");
    summary += (summary.empty() ? "" : ", ") + name + " " + to_string(rs.status) + " (" +
               std::to_string(rs.certificate.classes.size()) + " classes, " + std::to_string(accounted) +
               " by Strassmann)";
  }
  if (o.pass) o.detail = summary;
  return o;
}

// Criterion 3: interpolation, action law, p = 2 boosting.
Outcome criterion3() {
  Outcome o;
  std::size_t checked = 0;
  long min_tau = kInfiniteValuation;
  for (const auto& inst : random_corpus()) {
    const auto& H = inst.map;
    const std::uint64_t p = H.prime();
    const ActionInterpolator action(H);
    const auto G = action.at(inst.base);
    const long tau = G.certificate.tail;
    min_tau = std::min(min_tau, tau);
    o.require(tau > 0, inst.description + ": empty tail");
    if (tau <= 0) continue;
    for (std::uint64_t n = 0; n <= 20; ++n)
      o.require(residues(G.eval(static_cast<long>(n)), tau) == reduced(H.iterate(inst.base, n), p, tau),
                inst.description + ": G(" + std::to_string(n) + ") mismatch");
    for (long b = 0; b <= 5; ++b) {
      const auto moved = H.iterate(inst.base, static_cast<std::uint64_t>(b));
      const auto Gb = action.at(moved);
      const long t = std::min(tau, Gb.certificate.tail);
      for (long a = 0; a <= 5; ++a)
        o.require(residues(G.eval(a + b), t) == residues(Gb.eval(a), t),
                  inst.description + ": action law fails at a=" + std::to_string(a) + ", b=" + std::to_string(b));
    }
    ++checked;
  }
  std::mt19937_64 rng(2);
  std::size_t boosted = 0;
  std::vector<std::uint64_t> Ns;
  for (int i = 0; i < 12; ++i) {
    const auto inst = testing::random_affinoid(rng, 2, 1 + static_cast<std::size_t>(i % 3), 20);
    const auto b = boost_iterate(inst.map);
    o.require(b.N > 0 && (b.N & (b.N - 1)) == 0, inst.description + ": N not a power of 2");
    o.require(RConstant(2).exceeds_norm(b.norm.d), inst.description + ": boosted map does not beat R");
    const auto G = interpolate_action(b.map, inst.base);
    const long tau = G.certificate.tail;
    for (std::uint64_t n = 0; n <= 5; ++n)
      o.require(residues(G.eval(static_cast<long>(n)), tau) == reduced(inst.map.iterate(inst.base, n * b.N), 2, tau),
                inst.description + ": boosted G(n) mismatch");
    Ns.push_back(b.N);
    ++boosted;
  }
  if (o.pass)
    o.detail = std::to_string(checked) + " maps (p in {3,5,7}, dim 1-3), min tail p^" + std::to_string(min_tau) +
               "; " + std::to_string(boosted) + " p=2 maps boosted with N in " + join(Ns);
  return o;
}

// Criterion 4: inversion, Leibniz rule for theta, equal Delta-norms.
Outcome criterion4() {
  Outcome o;
  long min_inverse = kInfiniteValuation, min_theta = kInfiniteValuation;
  for (const auto& inst : random_corpus()) {
    const auto& H = inst.map;
    const long k = H.precision();
    const auto K = invert_map(H);
    o.require(K.precision() == k, inst.description + ": inverse lost precision");
    min_inverse = std::min(min_inverse, K.precision());
    o.require(identity_at(H.compose(K), k), inst.description + ": H o K != id");
    o.require(identity_at(K.compose(H), k), inst.description + ": K o H != id");
    o.require(delta_norm(K).d == delta_norm(H).d, inst.description + ": Delta-norm exponents differ");

    const std::size_t dim = H.dim();
    const std::uint64_t cap = 6;
    const auto u1 = ResiduePoly::variable(dim, H.prime(), k, 0);
    const auto u2 = ResiduePoly::variable(dim, H.prime(), k, dim - 1);
    const auto t1 = apply_vector_field(H, u1, cap);
    const auto t2 = apply_vector_field(H, u2, cap);
    const auto t12 = apply_vector_field(H, u1 * u2, cap);
    const long prec = std::min({t1.precision(), t2.precision(), t12.precision()});
    min_theta = std::min(min_theta, prec);
    o.require(prec > 0, inst.description + ": theta has no precision left");
    if (prec <= 0) continue;
    long dropped = kInfiniteValuation;
    const auto rhs = (u1.with_precision(prec) * t2.with_precision(prec) +
                      u2.with_precision(prec) * t1.with_precision(prec))
                         .truncated(cap, dropped);
    o.require(t12.with_precision(prec) == rhs, inst.description + ": Leibniz rule fails");
  }
  if (o.pass)
    o.detail = "50 maps: inverses exact mod p^" + std::to_string(min_inverse) +
               ", Leibniz holds mod the degraded tail (min p^" + std::to_string(min_theta) + "), Delta-norms equal";
  return o;
}

// Criterion 5: classifier against the exact oracle.
Outcome criterion5(std::vector<std::vector<std::uint64_t>>& finite_sets) {
  Outcome o;
  const std::uint64_t horizon = 10000;
  std::size_t certified = 0, classes = 0;
  double worst = 0;
  for (const auto& inst : testing::classifier_corpus()) {
    const auto prob = problem(inst.map, inst.point, inst.target);
    const auto t0 = std::chrono::steady_clock::now();
    const auto rs = classify_returns(prob);
    worst = std::max(worst, seconds_since(t0));
    const std::string name = inst.name;
    o.require(rs.members_up_to(horizon) == brute_force_returns(prob, horizon),
              name + " disagrees with brute force on [0, 10^4]");
    o.require(rs.unresolved.empty(), name + " has unresolved classes");
    if (rs.status == Status::Certified) {
      ++certified;
      for (const auto& cls : rs.certificate.classes) {
        ++classes;
        if (cls.strassmann_bound)
          o.require(cls.hits.size() + cls.backward_zeros.size() <= *cls.strassmann_bound,
                    name + " violates Strassmann accounting");
      }
      if (rs.is_finite()) finite_sets.push_back(rs.sporadic);
    }
  }
  const std::size_t total = testing::classifier_corpus().size();
  o.require(total == 30, "corpus has " + std::to_string(total) + " instances");
  if (o.pass)
    o.detail = std::to_string(total) + " instances agree on [0, 10^4], " + std::to_string(certified) +
               " CERTIFIED, " + std::to_string(classes) + " classes accounted, slowest " + fmt_seconds(worst);
  return o;
}

// Criterion 6: lambda_1 estimates.
Outcome criterion6() {
  Outcome o;
  auto timed = [&](const char* f) {
    const auto t0 = std::chrono::steady_clock::now();
    auto s = degree_sequence(parse_map(f, Q), 20);
    const double secs = seconds_since(t0);
    o.require(secs < 60, std::string(f) + " took " + fmt_seconds(secs));
    o.require(!s.budget_exceeded && s.degrees.size() == 20, std::string(f) + " stopped early");
    return s;
  };
  const auto sq = timed("(x1^2)");
  const auto fib = timed("(x2, x1*x2)");
  const auto tr = timed("(x1+1)");
  const double phi = (1 + std::sqrt(5.0)) / 2;
  const double rel = std::abs(fib.lambda().estimate() - phi) / phi;
  o.require(sq.lambda().exact() == mpz_class(2), "(x^2) lambda " + sq.lambda().to_string());
  o.require(rel < 0.05, "(y, xy) lambda " + fib.lambda().to_string() + " off by " + std::to_string(rel));
  o.require(tr.lambda().exact() == mpz_class(1), "(x+1) lambda " + tr.lambda().to_string());
  if (o.pass) {
    std::ostringstream os;
    os << "(x^2) -> " << sq.lambda().to_string() << ", (y, xy) -> " << fib.lambda().to_string() << " ~ "
       << fib.lambda().estimate() << " (" << rel * 100 << "% from the golden ratio), (x+1) -> "
       << tr.lambda().to_string();
    o.detail = os.str();
  }
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Criterion 7: KSM constants.
Outcome criterion7() {
  Outcome o;
  const auto a = ksm_fit(parse_map("(x1^2)", Q), parse_point("(3)", Q), 0, 20, mpq_class(2));
  o.require(a.c_exact && *a.c_exact == 1, "(x^2), x=3, eps=0 gives C=" + a.c_decimal);

  const auto b = ksm_fit(parse_map("(x1+1)", Q), parse_point("(0)", Q), mpq_class(1, 2), 60);
  o.require(std::isfinite(b.c) && b.c > 0, "(x+1) C not finite");
  o.require(b.argmax <= 10, "(x+1) C attained at n=" + std::to_string(b.argmax));
  // Recompute the ratio at the reported argmax independently.
  const double n = static_cast<double>(b.argmax);
  const double h = std::max(b.argmax > 1 ? std::log(n) : 0.0, 1.0);
  const double want = h / std::pow(1.5, n);
  o.require(std::abs(b.c - want) < 1e-12 * std::max(1.0, want), "(x+1) C does not match its argmax ratio");
  for (std::uint64_t m = 0; m <= 60; ++m) {
    const double hm = std::max(m > 1 ? std::log(static_cast<double>(m)) : 0.0, 1.0);
    o.require(hm / std::pow(1.5, static_cast<double>(m)) <= b.c * (1 + 1e-12), "(x+1) ratio exceeds C");
  }

  std::size_t fits = 0;
  const std::filesystem::path dir = DML_CORPUS_DIR;
  for (const char* name : {"height_square", "height_translation", "height_function_field"}) {
    const auto pf = parse_problem_text(slurp(dir / (std::string(name) + ".json")), {R"(height.epsilons=["1/10","1/2"])"});
    const auto r = run(pf);
    o.require(r.status == "COMPLETE", std::string(name) + " status " + r.status);
    for (const auto& fit : r.result.at("ksm")) {
      const double c = fit.at("estimate").at("C").get<double>();
      o.require(fit.at("finite").get<bool>() && std::isfinite(c) && c > 0,
                std::string(name) + " C not finite at eps " + fit.at("epsilon").get<std::string>());
      ++fits;
    }
  }
  if (o.pass) {
    std::ostringstream os;
    os << "(x^2): C=1 exactly; (x+1), eps=1/2: C=" << b.c_decimal << " at n=" << b.argmax << "; " << fits
       << " fixture fits finite";
    o.detail = os.str();
  }
  return o;
}

// Criterion 8: window densities.
Outcome criterion8(const std::vector<std::vector<std::uint64_t>>& finite_sets) {
  Outcome o;
  const std::uint64_t horizon = 1u << 14;
  const auto S = brute_force_returns(
      problem("(t*x1, (1-t)*x2)", "(1, 1)", "x1 + x2 - 1", Field::function_field(2)), horizon);
  std::vector<std::uint64_t> powers;
  for (std::uint64_t q = 1; q <= horizon; q *= 2) powers.push_back(q);
  o.require(S == powers, "Example return set differs from the powers of 2");
  const auto prof = density_profile(S, horizon, dyadic_windows(horizon));
  o.require(prof.profile.size() == 15, "expected 15 dyadic windows");
  mpq_class prev = 2;
  for (std::size_t j = 0; j < prof.profile.size(); ++j) {
    const auto& w = prof.profile[j];
    mpq_class want(static_cast<unsigned long>(j + 1), static_cast<unsigned long>(w.length));
    want.canonicalize();
    o.require(w.length == (std::uint64_t{1} << j), "window schedule");
    o.require(w.density() == want, "L=" + std::to_string(w.length) + " density " + w.density().get_str());
    o.require(w.density() <= prev, "density increases at L=" + std::to_string(w.length));
    prev = w.density();
  }
  for (const auto& fs : finite_sets) {
    const auto p = density_profile(fs, horizon, dyadic_windows(horizon));
    for (const auto& w : p.profile) {
      mpq_class cap(static_cast<unsigned long>(fs.size()), static_cast<unsigned long>(w.length));
      cap.canonicalize();
      o.require(w.density() <= cap, "finite set exceeds |S|/L");
    }
  }
  if (o.pass)
    o.detail = "max density at L=2^j is (j+1)/2^j for j=0..14, non-increasing; " + std::to_string(finite_sets.size()) +
               " finite certified sets within |S|/L";
  return o;
}

}  // namespace

int main() {
  std::vector<std::vector<std::uint64_t>> finite_sets;
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, criterion1},
      {2, criterion2},
      {3, criterion3},
      {4, criterion4},
      {5, [&] { return criterion5(finite_sets); }},
      {6, criterion6},
      {7, criterion7},
      {8, [&] { return criterion8(finite_sets); }},
  };
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " [" << fmt_seconds(seconds_since(t0))
              << "]: " << o.detail << std::endl;
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
