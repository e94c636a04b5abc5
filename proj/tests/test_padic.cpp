#include <random>

#include "doctest.h"

#include "dml/errors.hpp"
#include "dml/padic.hpp"
#include "dml/padic_series.hpp"

using namespace dml;

namespace {

mpz_class binomial(long n, long i) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(i));
  return r;
}

mpq_class eval_rational(const std::vector<mpq_class>& c, const mpq_class& t) {
  mpq_class acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
  return acc;
}

}  // namespace

TEST_CASE("valuation examples") {
  CHECK(valuation(PadicNumber::from_rational(250, 5, 20)) == 3);
  CHECK(valuation(PadicNumber::from_rational(mpq_class(1, 9), 3, 20)) == -2);
  CHECK(valuation(PadicNumber::exact_zero(7)) == kInfiniteValuation);
  CHECK(padic_valuation(mpz_class(0), 5) == kInfiniteValuation);
}

TEST_CASE("precision soundness against exact arithmetic") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-2000, 2000), den(1, 400);
  for (std::uint64_t p : {2u, 3u, 5u, 7u}) {
    for (int trial = 0; trial < 100; ++trial) {
      const mpq_class a(num(rng), den(rng)), b(num(rng), den(rng));
      mpq_class a2 = a, b2 = b;
      a2.canonicalize();
      b2.canonicalize();
      if (a2 == 0 || b2 == 0) continue;
      const long k = 24;
      const auto A = PadicNumber::from_rational(a2, p, k), B = PadicNumber::from_rational(b2, p, k);
      auto agree = [&](const PadicNumber& got, const mpq_class& want) {
        const auto W = PadicNumber::from_rational(want, p, got.absolute_precision() + 4);
        if (want == 0) return got.is_zero_at_precision() || got.valuation() >= got.absolute_precision();
        return got.congruent(W, got.absolute_precision());
      };
      CHECK(agree(A + B, mpq_class(a2 + b2)));
      CHECK(agree(A - B, mpq_class(a2 - b2)));
      CHECK(agree(A * B, mpq_class(a2 * b2)));
      CHECK(agree(A / B, mpq_class(a2 / b2)));
    }
  }
}

TEST_CASE("exact zero and vanishing precision") {
  const auto z = PadicNumber::exact_zero(5);
  const auto x = PadicNumber::from_rational(7, 5, 10);
  CHECK((z * x).is_exact_zero());
  CHECK((x - x).is_zero_at_precision());
  CHECK_THROWS_AS(x / (x - x), PrecisionExhausted);
}

TEST_CASE("mahler_term examples") {
  CHECK(mahler_term(0, 10) == std::vector<mpq_class>{1});
  CHECK(mahler_term(2, 10) == std::vector<mpq_class>{0, mpq_class(-1, 2), mpq_class(1, 2)});
  CHECK(mahler_term(3, 10) == std::vector<mpq_class>{0, mpq_class(1, 3), mpq_class(-1, 2), mpq_class(1, 6)});
}

TEST_CASE("mahler_term evaluates to binomial coefficients") {
  for (long i = 0; i <= 30; ++i) {
    const auto c = mahler_term(static_cast<std::uint64_t>(i), 30);
    for (long n = 0; n <= 30; ++n) CHECK(eval_rational(c, n) == mpq_class(binomial(n, i)));
  }
}

TEST_CASE("mahler_term denominators are controlled by R") {
  for (std::uint64_t p : {2u, 3u, 5u, 7u}) {
    const RConstant R(p);
    for (std::uint64_t i = 0; i <= 40; ++i) {
      CHECK(R.bounds_factorial(i));
      const long vfact = factorial_valuation(i, p);
      for (const auto& c : mahler_term(i, i)) {
        if (c == 0) continue;
        CHECK(padic_valuation(mpq_class(c), p) >= -vfact);
        // |c| <= R^-i, i.e. -v(c) * (p-1) <= i.
        CHECK(-padic_valuation(mpq_class(c), p) * static_cast<long>(p - 1) <= static_cast<long>(i));
      }
    }
  }
}

TEST_CASE("RConstant comparisons are exact") {
  CHECK(RConstant(3).exponent() == mpq_class(-1, 2));
  CHECK(RConstant(3).exceeds_norm(1));
  CHECK_FALSE(RConstant(2).exceeds_norm(1));
  CHECK(RConstant(2).exceeds_norm(2));
  CHECK_FALSE(RConstant(5).exceeds_norm(0));
  CHECK(RConstant(0).value() == 1.0);
}

TEST_CASE("strassmann_bound examples") {
  const std::vector<mpq_class> a{5, 1, 5};
  CHECK(strassmann_bound(PadicSeries::from_rationals(a, 5, 30)).bound == 1u);
  const std::vector<mpq_class> b{1, 5};
  CHECK(strassmann_bound(PadicSeries::from_rationals(b, 5, 30)).bound == 0u);
  const std::vector<mpq_class> c{25, 125, 625};
  CHECK(strassmann_bound(PadicSeries::from_rationals(c, 5, 2)).degenerate());
}

TEST_CASE("strassmann_bound never grows with precision") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> num(-500, 500);
  for (std::uint64_t p : {2u, 3u, 5u}) {
    for (int trial = 0; trial < 60; ++trial) {
      std::vector<mpq_class> c;
      for (int i = 0; i < 8; ++i) c.emplace_back(num(rng));
      std::optional<std::size_t> last;
      for (long tau = 1; tau <= 24; ++tau) {
        const auto b = strassmann_bound(PadicSeries::from_rationals(c, p, tau));
        if (b.degenerate()) continue;
        if (last) CHECK(*b.bound <= *last);
        last = b.bound;
      }
    }
  }
}

TEST_CASE("find_integer_zeros examples") {
  // 9^T / 9 - 1 at p = 2: Mahler coefficients a_0 = 1/9 - 1, a_i = 8^i / 9.
  const long W = 60;
  const mpz_class mod = prime_power(2, W);
  std::vector<mpz_class> diffs;
  for (long i = 0; i <= 20; ++i) {
    mpq_class a = mpq_class(mpz_class(1) << static_cast<unsigned>(3 * i), 9);
    if (i == 0) a -= 1;
    diffs.push_back(reduce_rational(a, 2, W));
  }
  const auto s = from_mahler(diffs, 2, W, 3);
  auto oracle = [](long T) {
    mpz_class v;
    mpz_ui_pow_ui(v.get_mpz_t(), 3, static_cast<unsigned long>(2 * T));
    return v == 9;
  };
  const auto z = find_integer_zeros(s, 10, oracle);
  CHECK(z.zeros == std::vector<long>{1});
  CHECK(z.resolved);

  const std::vector<mpq_class> lin{1, 5};
  const auto z0 = find_integer_zeros(PadicSeries::from_rationals(lin, 5, 30), 100, [](long) { return false; });
  CHECK(z0.zeros.empty());
  CHECK(z0.resolved);
  CHECK(z0.bound == 0);
}

TEST_CASE("find_integer_zeros reports an unseparated zero") {
  // T (T - 1/2): the zero at 1/2 is a 5-adic integer but never an integer hit.
  const std::vector<mpq_class> c{0, mpq_class(-1, 2), 1};
  const auto s = PadicSeries::from_rationals(c, 5, 30);
  CHECK(strassmann_bound(s).bound == 2u);
  const auto z = find_integer_zeros(s, 100, [](long T) { return T == 0; });
  CHECK(z.zeros == std::vector<long>{0});
  CHECK_FALSE(z.resolved);
}

TEST_CASE("find_integer_zeros counts known backward zeros") {
  // T (T + 1): T = -1 lies outside the scanned range.
  const std::vector<mpq_class> c{0, 1, 1};
  const auto s = PadicSeries::from_rationals(c, 5, 30);
  const auto oracle = [](long T) { return T == 0; };
  CHECK_FALSE(find_integer_zeros(s, 100, oracle).resolved);
  ZeroSearchOptions opts;
  opts.known_zeros = {-1};
  const auto z = find_integer_zeros(s, 100, oracle, opts);
  CHECK(z.resolved);
  CHECK(z.zeros == std::vector<long>{0});
}

TEST_CASE("degenerate series throw PrecisionExhausted") {
  const std::vector<mpq_class> c{125, 625};
  CHECK_THROWS_AS(find_integer_zeros(PadicSeries::from_rationals(c, 5, 3), 10, [](long) { return true; }),
                  PrecisionExhausted);
}

TEST_CASE("rational reconstruction") {
  const mpz_class m = prime_power(5, 30);
  for (const mpq_class q : {mpq_class(1, 3), mpq_class(-7, 4), mpq_class(123, 1), mpq_class(-5, 1)}) {
    const auto r = rational_reconstruction(reduce_rational(q, 5, 30), m);
    REQUIRE(r.has_value());
    CHECK(*r == q);
  }
}

TEST_CASE("series evaluation and recentering") {
  const std::vector<mpq_class> c{3, mpq_class(1, 2), 7, -4};
  const auto s = PadicSeries::from_rationals(c, 7, 25);
  for (long n : {0L, 1L, 5L, 49L, -3L}) {
    const auto v = s.eval(n);
    CHECK(v.congruent(PadicNumber::from_rational(eval_rational(c, n), 7, 30), 25));
  }
  const auto r = s.recentered(2, 1);
  for (long U : {0L, 1L, 4L}) CHECK(r.eval(U).congruent(s.eval(2 + 7 * U), 24));
}
