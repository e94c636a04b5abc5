#include <random>

#include "doctest.h"

#include "dml/errors.hpp"
#include "dml/interpolate.hpp"
#include "dml/parse.hpp"
#include "random_maps.hpp"

using namespace dml;
using dml::testing::random_affinoid;

namespace {

const Field Q = Field::rational();

AffinoidSelfMap affinoid(const char* text, std::uint64_t p, long k) {
  return AffinoidSelfMap::from_polymap(parse_map(text, Q), p, k);
}

bool same_at(const ResiduePoly& a, const ResiduePoly& b, long prec) {
  return a.with_precision(prec) == b.with_precision(prec);
}

bool is_identity(const AffinoidSelfMap& H) {
  for (std::size_t j = 0; j < H.dim(); ++j)
    if (!same_at(H[j], ResiduePoly::variable(H.dim(), H.prime(), H.precision(), j), H.precision())) return false;
  return true;
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

}  // namespace

TEST_CASE("delta_norm examples") {
  CHECK(delta_norm(affinoid("(x1+5)", 5, 20)).d == 1);
  CHECK(delta_norm(affinoid("(x1+x1^2)", 3, 20)).d == 0);
  CHECK(delta_norm(affinoid("(x1+5*x2, x2+25*x1^2)", 5, 20)).d == 1);
  CHECK(delta_norm(affinoid("(x1+5)", 5, 20)).exact);
}

TEST_CASE("boost_iterate examples") {
  CHECK(boost_iterate(affinoid("(x1+3)", 3, 20)).N == 1);
  const auto b = boost_iterate(affinoid("(x1+2)", 2, 20));
  CHECK(b.N == 2);
  CHECK(b.norm.d == 2);
  CHECK(same_at(b.map[0], reduce_mod_p(parse_map("(x1+4)", Q), 2, 20)[0], 20));
  CHECK(boost_iterate(affinoid("(x1+25)", 5, 20)).N == 1);
  CHECK_THROWS_AS(boost_iterate(affinoid("(x1+x1^2)", 3, 20)), ContractionNotCertified);
}

TEST_CASE("interpolate_action examples") {
  const std::vector<mpz_class> zero{0}, one{1};
  const auto r = interpolate_action(affinoid("(x1+5)", 5, 30), zero);
  for (long n = -5; n <= 40; ++n) CHECK(r.eval(n)[0].congruent(PadicNumber::from_rational(5 * n, 5, 40), r.certificate.tail));
  const auto s = interpolate_action(affinoid("(6*x1)", 5, 30), one);
  mpz_class six = 1;
  for (long n = 0; n <= 30; ++n) {
    CHECK(s.eval(n)[0].congruent(PadicNumber::from_rational(mpq_class(six), 5, 40), s.certificate.tail));
    six *= 6;
  }
  CHECK(s.eval(0)[0].residue(s.certificate.tail) == 1);
  CHECK_THROWS_AS(interpolate_action(affinoid("(x1+2)", 2, 20), zero), ContractionNotCertified);
}

TEST_CASE("interpolation matches iterates on random contracting maps") {
  std::mt19937_64 rng(2024);
  for (std::uint64_t p : {3u, 5u, 7u}) {
    for (std::size_t dim = 1; dim <= 2; ++dim) {
      for (int trial = 0; trial < 4; ++trial) {
        const auto inst = random_affinoid(rng, p, dim, 24);
        CAPTURE(inst.description);
        const auto sym = interpolate_action(inst.map, inst.base);
        const auto orb = interpolate_orbit(inst.map, inst.base);
        const long tau = std::min(sym.certificate.tail, orb.certificate.tail);
        REQUIRE(tau > 0);
        for (long n = 0; n <= 20; ++n) {
          const auto want = inst.map.iterate(inst.base, static_cast<std::uint64_t>(n));
          CHECK(residues(sym.eval(n), tau) == reduced(want, p, tau));
          CHECK(residues(orb.eval(n), tau) == reduced(want, p, tau));
        }
        // Both routes build the same function.
        for (long T : {-7L, 31L, 1000L}) CHECK(residues(sym.eval(T), tau) == residues(orb.eval(T), tau));
      }
    }
  }
}

TEST_CASE("invert_map examples") {
  const auto K = invert_map(affinoid("(x1+5)", 5, 20));
  CHECK(same_at(K[0], reduce_mod_p(parse_map("(x1-5)", Q), 5, 20)[0], K.precision()));
  const auto L = invert_map(affinoid("(6*x1)", 5, 20));
  const mpz_class m = prime_power(5, L.precision());
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), mpz_class(6).get_mpz_t(), m.get_mpz_t());
  Monomial u(1, 1);
  CHECK(L[0].coefficient(u) == inv);
  CHECK_THROWS_AS(invert_map(affinoid("(x1+x1^2)", 3, 20)), ContractionNotCertified);
}

TEST_CASE("invert_map is a two-sided inverse with the same norm") {
  std::mt19937_64 rng(77);
  for (std::uint64_t p : {3u, 5u, 7u}) {
    for (std::size_t dim = 1; dim <= 2; ++dim) {
      for (int trial = 0; trial < 3; ++trial) {
        const auto inst = random_affinoid(rng, p, dim, 12);
        CAPTURE(inst.description);
        const auto K = invert_map(inst.map);
        CHECK(is_identity(inst.map.compose(K)));
        CHECK(is_identity(K.compose(inst.map)));
        CHECK(delta_norm(K).d == delta_norm(inst.map.with_precision(K.precision())).d);
      }
    }
  }
}

TEST_CASE("vector_field examples") {
  const auto th = vector_field(affinoid("(x1+5)", 5, 20));
  CHECK(th[0].terms().size() == 1);
  CHECK(th[0].coefficient(Monomial(1, 0)) == 5);
  const auto lg = vector_field(affinoid("(6*x1)", 5, 30));
  // log(6) = sum (-1)^(i-1) 5^i / i.
  const long prec = lg[0].precision();
  REQUIRE(prec > 5);
  mpq_class log6 = 0;
  mpz_class fp = 1;
  for (long i = 1; i <= 4 * prec; ++i) {
    fp *= 5;
    log6 += mpq_class(i % 2 ? fp : mpz_class(-fp), i);
  }
  CHECK(lg[0].coefficient(Monomial(1, 1)) == reduce_rational(log6, 5, prec));
}

TEST_CASE("vector field satisfies the Leibniz rule") {
  std::mt19937_64 rng(9);
  for (std::uint64_t p : {3u, 5u, 7u}) {
    for (std::size_t dim = 1; dim <= 2; ++dim) {
      for (int trial = 0; trial < 3; ++trial) {
        const auto inst = random_affinoid(rng, p, dim, 16);
        CAPTURE(inst.description);
        const long k = inst.map.precision();
        const auto u1 = ResiduePoly::variable(dim, p, k, 0);
        const auto u2 = ResiduePoly::variable(dim, p, k, dim - 1);
        const auto t1 = apply_vector_field(inst.map, u1, 8);
        const auto t2 = apply_vector_field(inst.map, u2, 8);
        const auto t12 = apply_vector_field(inst.map, u1 * u2, 8);
        const long prec = std::min({t1.precision(), t2.precision(), t12.precision()});
        REQUIRE(prec > 0);
        long dropped = kInfiniteValuation;
        const auto a = u1.with_precision(prec), b = u2.with_precision(prec);
        const auto rhs = (a * t2.with_precision(prec) + b * t1.with_precision(prec)).truncated(8, dropped);
        CHECK(same_at(t12, rhs, prec));
      }
    }
  }
}

TEST_CASE("contracting maps of finite order are the identity") {
  std::mt19937_64 rng(31);
  for (std::uint64_t p : {3u, 5u}) {
    for (int trial = 0; trial < 8; ++trial) {
      const auto inst = random_affinoid(rng, p, 1 + trial % 2, 10);
      if (is_identity(inst.map)) continue;
      for (std::uint64_t l = 1; l <= 6; ++l) CHECK_FALSE(is_identity(inst.map.power(l)));
    }
  }
}

TEST_CASE("boosting inequality holds by measurement") {
  std::mt19937_64 rng(404);
  for (std::uint64_t p : {2u, 3u, 5u}) {
    for (int trial = 0; trial < 6; ++trial) {
      const auto inst = random_affinoid(rng, p, 1 + trial % 2, 16);
      const long d = delta_norm(inst.map).d;
      const auto Hp = inst.map.power(p);
      const long dp = delta_norm(Hp).d;
      // ||Delta_{H^p}|| <= max(p^-1 ||Delta_H||, ||Delta_H||^p).
      CHECK(dp >= std::min({d + 1, static_cast<long>(p) * d, Hp.precision()}));
    }
  }
}
