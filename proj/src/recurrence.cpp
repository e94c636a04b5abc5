#include "dml/errors.hpp"
#include "dml/residue.hpp"
#include "dml/return_set.hpp"

namespace dml {

OrbitProblem companion_problem(const Recurrence& rec) {
  const std::size_t l = rec.order();
  const Field Q = Field::rational();
  std::vector<MultiPoly> coords;
  for (std::size_t i = 0; i + 1 < l; ++i) coords.push_back(MultiPoly::variable(l, Q, i + 1));
  MultiPoly last(l, Q);
  for (std::size_t i = 0; i < l; ++i) {
    if (rec.coeffs[i] == 0) continue;
    Monomial m(l, 0);
    m[i] = 1;
    last.add_term(m, Scalar(rec.coeffs[i]));
  }
  coords.push_back(std::move(last));
  std::vector<Scalar> x;
  for (const auto& a : rec.initial) x.emplace_back(a);
  return OrbitProblem(PolyMap(std::move(coords)), Point(std::move(x)), MultiPoly::variable(l, Q, 0));
}

ReturnSet sml_solve(const Recurrence& rec, const ClassifyConfig& config) {
  const std::size_t l = rec.order();
  const auto head = rec.initial;
  std::size_t j = 0;
  while (j < l && rec.coeffs[j] == 0) ++j;

  if (j == l) {
    // A_n = 0 for every n >= l.
    ReturnSet rs;
    rs.certificate.method = "trivial";
    for (std::size_t n = 0; n < l; ++n)
      if (head[n] == 0) rs.sporadic.push_back(n);
    rs.progressions.push_back({1, l});
    minimize(rs);
    return rs;
  }

  if (j > 0) {
    // A_{n+l} only sees A_{n+j}, ..., so B_n = A_{n+j} has order l - j.
    Recurrence tail(std::vector<mpq_class>(rec.coeffs.begin() + static_cast<long>(j), rec.coeffs.end()),
                    std::vector<mpq_class>(head.begin() + static_cast<long>(j), head.end()));
    ReturnSet rs = sml_solve(tail, config);
    for (auto& pr : rs.progressions) pr.b += j;
    for (auto& n : rs.sporadic) n += j;
    for (auto& u : rs.unresolved) u.offset += j;
    for (auto& c : rs.certificate.classes) {
      c.offset += j;
      for (auto& h : c.hits) h += j;
    }
    rs.certificate.preperiod += j;
    for (std::size_t n = 0; n < j; ++n)
      if (head[n] == 0) rs.sporadic.push_back(n);
    rs.certificate.notes.push_back("leading coefficients vanish; solved the order-" + std::to_string(l - j) +
                                   " recurrence for A_{n+" + std::to_string(j) + "}");
    minimize(rs);
    return rs;
  }

  const OrbitProblem prob = companion_problem(rec);
  ClassifyConfig cfg = config;
  cfg.primes.clear();
  for (auto p : config.primes)
    if (padic_valuation(rec.coeffs[0], p) == 0) cfg.primes.push_back(p);
  if (cfg.primes.empty()) throw NoGoodPrime("a_0 is not a unit at any candidate prime");
  return classify_returns(prob, cfg);
}

}  // namespace dml
