#pragma once

#include <random>
#include <string>
#include <vector>

#include "dml/affinoid.hpp"

namespace dml::testing {

struct RandomAffinoid {
  AffinoidSelfMap map;
  std::vector<mpz_class> base;
  std::string description;
};

// H(u) = u + p * P(u) with P a sparse integral polynomial of degree <= 2, so
// ||Delta_H|| <= 1/p by construction.
inline RandomAffinoid random_affinoid(std::mt19937_64& rng, std::uint64_t p, std::size_t dim, long k) {
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> pick(0, 9);
  const mpz_class pz(static_cast<unsigned long>(p));
  const mpz_class mod = prime_power(p, k);
  std::vector<ResiduePoly> coords;
  std::string desc;
  for (std::size_t i = 0; i < dim; ++i) {
    ResiduePoly h = ResiduePoly::variable(dim, p, k, i);
    ResiduePoly P(dim, p, k);
    P.add_term(Monomial(dim, 0), mpz_class(coef(rng)));
    for (std::size_t j = 0; j < dim; ++j) {
      Monomial m(dim, 0);
      m[j] = 1;
      if (pick(rng) < 6) P.add_term(m, mpz_class(coef(rng)));
      for (std::size_t l = j; l < dim; ++l) {
        Monomial q(dim, 0);
        q[j] += 1;
        q[l] += 1;
        if (pick(rng) < 3) P.add_term(q, mpz_class(coef(rng)));
      }
    }
    h = h + P.scaled(pz);
    desc += (i ? ", " : "") + h.to_string();
    coords.push_back(std::move(h));
  }
  std::vector<mpz_class> base;
  std::uniform_int_distribution<long> pt(0, 1000);
  for (std::size_t i = 0; i < dim; ++i) base.push_back(mpz_class(pt(rng)) % mod);
  return {AffinoidSelfMap(ResidueMap(std::move(coords))), std::move(base), "(" + desc + ")"};
}

}  // namespace dml::testing
