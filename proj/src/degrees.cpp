#include "dml/degrees.hpp"

#include <cmath>

#include "dml/errors.hpp"

namespace dml {

std::optional<mpz_class> IntegerRoot::exact() const {
  mpz_class r;
  if (index == 0 || radicand < 1) return std::nullopt;
  if (mpz_root(r.get_mpz_t(), radicand.get_mpz_t(), index) == 0) return std::nullopt;
  return r;
}

double IntegerRoot::estimate() const {
  if (auto e = exact()) return e->get_d();
  long exp = 0;
  const double m = mpz_get_d_2exp(&exp, radicand.get_mpz_t());
  return std::exp((std::log(m) + static_cast<double>(exp) * std::log(2.0)) / static_cast<double>(index));
}

std::string IntegerRoot::to_string() const {
  if (auto e = exact()) return e->get_str();
  return radicand.get_str() + "^(1/" + std::to_string(index) + ")";
}

IntegerRoot DegreeSequence::lambda() const {
  if (degrees.empty()) return {};
  return {mpz_class(static_cast<unsigned long>(degrees.back())), degrees.size()};
}

std::vector<double> DegreeSequence::successive_ratios() const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < degrees.size(); ++i)
    out.push_back(degrees[i] == 0 ? 0.0 : static_cast<double>(degrees[i + 1]) / static_cast<double>(degrees[i]));
  return out;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> DegreeSequence::submultiplicativity_violation() const {
  const std::uint64_t n = degrees.size();
  for (std::uint64_t a = 1; a <= n; ++a)
    for (std::uint64_t b = 1; a + b <= n; ++b) {
      const mpz_class lhs(static_cast<unsigned long>(degrees[a + b - 1]));
      const mpz_class rhs = mpz_class(static_cast<unsigned long>(degrees[a - 1])) * degrees[b - 1];
      if (lhs > rhs) return std::make_pair(a, b);
    }
  return std::nullopt;
}

namespace {

// Upper bound for the term products formed while substituting g into f.
mpz_class substitution_work(const PolyMap& f, const PolyMap& g) {
  mpz_class work = 0;
  for (std::size_t i = 0; i < f.dim(); ++i)
    for (const auto& [m, c] : f[i].terms()) {
      mpz_class w = 1;
      for (std::size_t j = 0; j < m.size(); ++j)
        for (std::uint32_t e = 0; e < m[j]; ++e) w *= static_cast<unsigned long>(g[j].term_count());
      work += w;
    }
  return work;
}

}  // namespace

DegreeSequence degree_sequence(const PolyMap& f, std::uint64_t n_max, std::uint64_t term_budget) {
  if (n_max < 1) throw Error("degree_sequence needs n_max >= 1");
  DegreeSequence out;
  out.requested = n_max;
  PolyMap it = f;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    if (n > 1) {
      if (term_budget && substitution_work(f, it) > mpz_class(static_cast<unsigned long>(term_budget)) * 64) {
        out.budget_exceeded = true;
        break;
      }
      it = compose_maps(f, it);
    }
    if (term_budget && it.term_count() > term_budget) {
      out.budget_exceeded = true;
      break;
    }
    const Degree d = it.total_degree();
    out.degrees.push_back(d.is_neg_infinity() ? 0 : d.value());
  }
  return out;
}

}  // namespace dml
