#include "dml/affinoid.hpp"

#include <algorithm>
#include <limits>

#include "dml/errors.hpp"
#include "dml/padic.hpp"

namespace dml {

AffinoidSelfMap::AffinoidSelfMap(ResidueMap coords, std::optional<Provenance> provenance)
    : h_(std::move(coords)), prov_(std::move(provenance)) {
  if (h_.dim() == 0) throw DimensionMismatch("affinoid map needs at least one coordinate");
  for (const auto& c : h_.coords()) {
    if (c.nvars() != h_.dim()) throw DimensionMismatch("affinoid coordinate variable count differs from dimension");
    if (c.prime() != h_.prime() || c.precision() != h_.precision())
      throw FieldMismatch("affinoid coordinates over different residue rings");
  }
}

AffinoidSelfMap AffinoidSelfMap::from_polymap(const PolyMap& h, std::uint64_t p, long k) {
  return AffinoidSelfMap(reduce_mod_p(h, p, k));
}

AffinoidSelfMap AffinoidSelfMap::recenter(const PolyMap& f, std::span<const mpz_class> y, std::uint64_t p, long e,
                                          std::uint64_t m, long k) {
  if (y.size() != f.dim()) throw DimensionMismatch("center dimension does not match the map");
  if (e < 1 || k < 1) throw Error("recentering level and precision must be positive");
  const std::size_t n = f.dim();
  const long K = k + e;
  const mpz_class pe = prime_power(p, e);
  std::vector<ResiduePoly> z;
  for (std::size_t j = 0; j < n; ++j) {
    ResiduePoly c = ResiduePoly::constant(n, p, K, y[j]);
    c.add_term([&] {
      Monomial mono(n, 0);
      mono[j] = 1;
      return mono;
    }(), pe);
    z.push_back(std::move(c));
  }
  // A degree-delta coefficient of f^i(y + p^e u) is divisible by p^(e*delta),
  // so nothing above this cap survives modulo p^K.
  const std::uint64_t cap = static_cast<std::uint64_t>((K - 1) / e);
  const ResidueMap fk = reduce_mod_p(f, p, K);
  for (std::uint64_t i = 0; i < m; ++i) {
    SubstitutionCache cache(z, cap);
    long dropped = kInfiniteValuation;
    std::vector<ResiduePoly> next;
    for (const auto& c : fk.coords()) next.push_back(cache.apply(c, dropped));
    if (dropped < K) throw Error("recentering truncation lost precision");
    z = std::move(next);
  }
  std::vector<ResiduePoly> h;
  for (std::size_t j = 0; j < n; ++j) {
    ResiduePoly disp = z[j] - ResiduePoly::constant(n, p, K, y[j]);
    try {
      h.push_back(disp.divided_by_prime_power(e));
    } catch (const NonIntegralAtP&) {
      throw Error("center is not periodic modulo p^e under the given iterate");
    }
  }
  Provenance prov{f, std::vector<mpz_class>(y.begin(), y.end()), e, m};
  return AffinoidSelfMap(ResidueMap(std::move(h)), std::move(prov));
}

Degree AffinoidSelfMap::total_degree() const {
  Degree d = Degree::neg_infinity();
  for (const auto& c : h_.coords()) d = std::max(d, c.total_degree());
  return d;
}

std::vector<mpz_class> AffinoidSelfMap::eval(std::span<const mpz_class> u) const { return h_.eval(u); }

std::vector<mpz_class> AffinoidSelfMap::iterate(std::span<const mpz_class> u, std::uint64_t n) const {
  std::vector<mpz_class> x(u.begin(), u.end());
  const mpz_class& mod = h_[0].modulus();
  for (auto& c : x) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
  for (std::uint64_t i = 0; i < n; ++i) x = h_.eval(x);
  return x;
}

AffinoidSelfMap AffinoidSelfMap::compose(const AffinoidSelfMap& other, std::uint64_t degree_cap) const {
  if (other.dim() != dim()) throw DimensionMismatch("composing affinoid maps of different dimensions");
  if (other.prime() != prime()) throw FieldMismatch("composing affinoid maps for different primes");
  const long k = std::min(precision(), other.precision());
  std::vector<ResiduePoly> args;
  for (const auto& c : other.h_.coords()) args.push_back(c.with_precision(k));
  const std::uint64_t cap = degree_cap == 0 ? std::numeric_limits<std::uint64_t>::max() : degree_cap;
  SubstitutionCache cache(std::move(args), cap);
  long dropped = kInfiniteValuation;
  std::vector<ResiduePoly> out;
  for (const auto& c : h_.coords()) out.push_back(cache.apply(c.with_precision(k), dropped));
  const long eff = std::min(k, dropped);
  for (auto& c : out) c = c.with_precision(eff);
  return AffinoidSelfMap(ResidueMap(std::move(out)));
}

AffinoidSelfMap AffinoidSelfMap::power(std::uint64_t n, std::uint64_t degree_cap) const {
  if (n == 0) {
    std::vector<ResiduePoly> id;
    for (std::size_t i = 0; i < dim(); ++i) id.push_back(ResiduePoly::variable(dim(), prime(), precision(), i));
    return AffinoidSelfMap(ResidueMap(std::move(id)));
  }
  AffinoidSelfMap acc = *this;
  for (std::uint64_t i = 1; i < n; ++i) acc = compose(acc, degree_cap);
  if (!prov_) return acc;
  Provenance prov = *prov_;
  prov.iterate *= n;
  return AffinoidSelfMap(acc.coords(), std::move(prov));
}

AffinoidSelfMap AffinoidSelfMap::with_precision(long k) const {
  std::vector<ResiduePoly> out;
  for (const auto& c : h_.coords()) out.push_back(c.with_precision(std::min(k, c.precision())));
  return AffinoidSelfMap(ResidueMap(std::move(out)), prov_);
}

std::string AffinoidSelfMap::to_string() const { return h_.to_string(); }

DeltaNorm delta_norm(const AffinoidSelfMap& h) {
  const long k = h.precision();
  long d = k;
  for (std::size_t i = 0; i < h.dim(); ++i) {
    const auto disp = h[i] - ResiduePoly::variable(h.dim(), h.prime(), k, i);
    d = std::min(d, disp.gauss_valuation());
  }
  return {d, d < k};
}

BoostResult boost_iterate(const AffinoidSelfMap& h, std::uint64_t degree_cap, int max_rounds) {
  const RConstant R(h.prime());
  DeltaNorm norm = delta_norm(h);
  if (norm.d < 1)
    throw ContractionNotCertified("displacement has unit norm; boosting needs ||Delta|| < 1");
  std::uint64_t N = 1;
  AffinoidSelfMap cur = h;
  for (int round = 0; !R.exceeds_norm(norm.d); ++round) {
    if (round >= max_rounds) throw BudgetExceeded("boost_iterate did not certify within the round budget");
    cur = cur.power(h.prime(), degree_cap);
    N *= h.prime();
    norm = delta_norm(cur);
    if (cur.precision() <= 1) throw BudgetExceeded("precision exhausted while boosting");
  }
  return {N, cur, norm};
}

}  // namespace dml
