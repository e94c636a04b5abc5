#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include "dml/degrees.hpp"
#include "dml/density.hpp"
#include "dml/errors.hpp"
#include "dml/heights.hpp"
#include "dml/parse.hpp"
#include "dml/return_set.hpp"

using namespace dml;

namespace {

const Field Q = Field::rational();

PolyMap random_integral_map(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> c(-4, 4), e(0, 2), terms(1, 3);
  std::vector<MultiPoly> coords;
  for (std::size_t i = 0; i < n; ++i) {
    MultiPoly p(n, Q);
    for (int t = terms(rng); t > 0; --t) {
      Monomial m(n, 0);
      for (auto& x : m) x = static_cast<std::uint32_t>(e(rng));
      p.add_term(m, Scalar(mpq_class(c(rng))));
    }
    coords.push_back(p);
  }
  return PolyMap(coords);
}

// max over windows [a, a+L-1] inside [0, horizon], by direct counting.
mpq_class naive_density(const std::vector<std::uint64_t>& S, std::uint64_t horizon, std::uint64_t L) {
  std::uint64_t best = 0;
  for (std::uint64_t a = 0; a + L <= horizon + 1; ++a) {
    const auto c = static_cast<std::uint64_t>(
        std::count_if(S.begin(), S.end(), [&](std::uint64_t s) { return s >= a && s < a + L; }));
    best = std::max(best, c);
  }
  mpq_class q(static_cast<unsigned long>(best), static_cast<unsigned long>(L));
  q.canonicalize();
  return q;
}

mpz_class pow_z(long b, unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(b), e);
  return r;
}

}  // namespace

TEST_CASE("degree_sequence examples") {
  const auto sq = degree_sequence(parse_map("(x1^2)", Q), 10);
  for (std::size_t n = 0; n < 10; ++n) CHECK(sq.degrees[n] == (std::uint64_t{1} << (n + 1)));
  CHECK(sq.lambda().exact() == mpz_class(2));

  const auto fib = degree_sequence(parse_map("(x2, x1*x2)", Q), 20);
  REQUIRE(fib.degrees.size() == 20);
  std::uint64_t a = 1, b = 2;
  for (std::size_t n = 0; n < 20; ++n) {
    CHECK(fib.degrees[n] == b);
    const auto c = a + b;
    a = b;
    b = c;
  }
  const double phi = (1 + std::sqrt(5.0)) / 2;
  CHECK(std::abs(fib.lambda().estimate() - phi) / phi < 0.05);

  const auto tr = degree_sequence(parse_map("(x1+1)", Q), 12);
  CHECK(std::all_of(tr.degrees.begin(), tr.degrees.end(), [](auto d) { return d == 1; }));
  CHECK(tr.lambda().exact() == mpz_class(1));
}

TEST_CASE("degree_sequence stops on budget with a flagged prefix") {
  const auto s = degree_sequence(parse_map("(x1^2 + x2, x1*x2 + 1)", Q), 30, 200);
  CHECK(s.budget_exceeded);
  CHECK(s.degrees.size() < 30);
  CHECK_FALSE(s.degrees.empty());
}

TEST_CASE("degrees are submultiplicative") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_integral_map(rng, 1 + trial % 2);
    const auto s = degree_sequence(f, 5, 5000);
    CHECK_FALSE(s.submultiplicativity_violation().has_value());
    for (std::size_t i = 0; i < s.degrees.size(); ++i)
      for (std::size_t j = 0; i + j + 1 < s.degrees.size(); ++j)
        CHECK(s.degrees[i + j + 1] <= s.degrees[i] * s.degrees[j]);
  }
}

TEST_CASE("weil_height examples") {
  CHECK(weil_height(parse_point("(3/2)", Q)).H == 3);
  CHECK(integral_coordinates(parse_point("(3/2)", Q)) == std::vector<mpz_class>{2, 3});
  CHECK(weil_height(parse_point("(2, 8)", Q)).H == 8);
  const Field F2t = Field::function_field(2);
  CHECK(weil_height(parse_point("(t^3, 1/(t+1))", F2t)).H == 4);
  CHECK(weil_height(parse_point("(0)", Q)).H == 1);
  CHECK(weil_height(parse_point("(2)", Q)).plus_is_one());
  CHECK_FALSE(weil_height(parse_point("(3)", Q)).plus_is_one());
  CHECK_THROWS_AS(weil_height(parse_point("(2)", Field::prime_field(5))), FieldMismatch);
}

TEST_CASE("arithmetic_degree_profile examples") {
  const auto sq = arithmetic_degree_profile(parse_map("(x1^2)", Q), parse_point("(3)", Q), 8);
  REQUIRE(sq.entries.size() == 9);
  for (unsigned n = 0; n <= 8; ++n) CHECK(sq.entries[n].height.H == pow_z(3, 1ul << n));
  // (2^n log 3)^(1/n) = 2 (log 3)^(1/n) tends to 2.
  CHECK(sq.last == doctest::Approx(2.0 * std::pow(std::log(3.0), 1.0 / 8)));

  const auto tr = arithmetic_degree_profile(parse_map("(x1+1)", Q), parse_point("(0)", Q), 200);
  for (unsigned n = 1; n <= 200; ++n) CHECK(tr.entries[n].height.H == n);
  CHECK(tr.last < 1.02);

  // 3 is fixed by x^2 - 6: the heights are constant and the roots tend to 1.
  const auto fx = arithmetic_degree_profile(parse_map("(x1^2 - 6)", Q), parse_point("(3)", Q), 20);
  for (const auto& e : fx.entries) CHECK(e.height.H == 3);
  CHECK(std::abs(fx.last - 1.0) < 0.01);
}

TEST_CASE("ksm_fit examples") {
  const auto a = ksm_fit(parse_map("(x1^2)", Q), parse_point("(3)", Q), 0, 10, mpq_class(2));
  REQUIRE(a.c_exact.has_value());
  CHECK(*a.c_exact == 1);
  CHECK(a.equality.size() == 11);

  const auto b = ksm_fit(parse_map("(x1+1)", Q), parse_point("(0)", Q), mpq_class(1, 2), 60, mpq_class(1));
  long double want = 0;
  for (int n = 0; n <= 60; ++n)
    want = std::max(want, std::max(std::log(static_cast<long double>(std::max(n, 1))), 1.0L) /
                              std::pow(1.5L, static_cast<long double>(n)));
  CHECK(b.c == doctest::Approx(static_cast<double>(want)).epsilon(1e-12));
  CHECK(b.argmax < 10);

  const auto c = ksm_fit(parse_map("(x1^2 - 6)", Q), parse_point("(3)", Q), mpq_class(1, 10), 20, mpq_class(2));
  REQUIRE(c.c_exact.has_value());
  CHECK(*c.c_exact == 1);
}

TEST_CASE("heights grow at most like the trivial bound") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<long> num(-30, 30), den(1, 9);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto f = random_integral_map(rng, n);
    const auto deg = f.total_degree();
    if (deg.is_neg_infinity()) continue;
    const mpz_class B = height_growth_constant(f);
    std::vector<Scalar> y;
    for (std::size_t i = 0; i < n; ++i) y.emplace_back(mpq_class(num(rng), den(rng)));
    const Point x(y);
    const mpz_class Hx = weil_height(x).H;
    const mpz_class Hfx = weil_height(eval_map(f, x)).H;
    mpz_class bound;
    mpz_pow_ui(bound.get_mpz_t(), Hx.get_mpz_t(), deg.value());
    CHECK(Hfx <= B * bound);
  }
}

TEST_CASE("density_profile examples") {
  const std::vector<std::uint64_t> pw{1, 2, 4, 8, 16, 32, 64};
  const std::vector<std::uint64_t> L16{16};
  const auto d = density_profile(pw, 64, L16);
  REQUIRE(d.profile.size() == 1);
  CHECK(d.profile[0].density() == mpq_class(5, 16));
  CHECK(d.profile[0].start == 1);

  const std::vector<std::uint64_t> none;
  const auto w = dyadic_windows(100);
  const auto e = density_profile(none, 100, w);
  CHECK(e.profile.size() == w.size());
  for (const auto& x : e.profile) CHECK(x.count == 0);

  std::vector<std::uint64_t> even;
  for (std::uint64_t n = 0; n <= 1000; n += 2) even.push_back(n);
  for (const auto& x : density_profile(even, 1000, dyadic_windows(1000)).profile) {
    mpq_class want(static_cast<unsigned long>((x.length + 1) / 2), static_cast<unsigned long>(x.length));
    want.canonicalize();
    CHECK(x.density() == want);
  }
  CHECK(dyadic_windows(64).back() == 64);
  const std::vector<std::uint64_t> too_long{200};
  CHECK(density_profile(pw, 64, too_long).profile.empty());
}

TEST_CASE("density_profile agrees with naive window counting") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_int_distribution<std::uint64_t> hz(1, 150);
    const std::uint64_t horizon = hz(rng);
    std::uniform_int_distribution<std::uint64_t> pt(0, horizon);
    std::vector<std::uint64_t> S;
    for (int i = 0; i < trial % 12; ++i) S.push_back(pt(rng));
    std::sort(S.begin(), S.end());
    S.erase(std::unique(S.begin(), S.end()), S.end());
    const std::vector<std::uint64_t> Ls{1, 3, 7, 10, 32, horizon + 1};
    const auto prof = density_profile(S, horizon, Ls);
    for (const auto& x : prof.profile) {
      CAPTURE(x.length);
      CHECK(x.density() == naive_density(S, horizon, x.length));
    }
  }
}

TEST_CASE("window maxima grow with the horizon on nested inputs") {
  std::vector<std::uint64_t> S;
  for (std::uint64_t n = 1; n <= 4096; n *= 3) S.push_back(n);
  for (std::uint64_t L : {4u, 16u, 64u}) {
    mpq_class prev = 0;
    for (std::uint64_t h = 100; h <= 4000; h += 300) {
      const std::vector<std::uint64_t> LL{L};
      std::vector<std::uint64_t> cut;
      for (auto s : S)
        if (s <= h) cut.push_back(s);
      const auto d = density_profile(cut, h, LL).profile.at(0).density();
      CHECK(d >= prev);
      prev = d;
    }
  }
}

TEST_CASE("finite certified return sets have vanishing density") {
  const PolyMap f = parse_map("(x1 + 1, x2 + x1)", Q);
  const OrbitProblem prob(f, parse_point("(0, 0)", Q), parse_poly("(x2 - 10)*(x2 - 45)*(x2 - 3)", 2, Q));
  const auto rs = classify_returns(prob);
  REQUIRE(rs.status == Status::Certified);
  REQUIRE(rs.is_finite());
  const auto S = rs.members_up_to(1u << 12);
  const auto prof = density_profile(S, 1u << 12, dyadic_windows(1u << 12));
  for (const auto& x : prof.profile) {
    const mpq_class cap(static_cast<unsigned long>(S.size()), static_cast<unsigned long>(x.length));
    CHECK(x.density() <= cap);
  }
  CHECK(prof.profile.back().density() < mpq_class(1, 1000));
}
