#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dml/multipoly.hpp"
#include "dml/residue.hpp"

namespace dml {

/// Where a recentered map came from: H(u) = (f^m(y + p^e u) - y) / p^e.
struct Provenance {
  PolyMap f;
  std::vector<mpz_class> center;
  long scale = 0;
  std::uint64_t iterate = 1;
};

/// Integral polynomial self-map of the closed unit polydisc over Z_p, with
/// coordinates known modulo p^k.
class AffinoidSelfMap {
 public:
  explicit AffinoidSelfMap(ResidueMap coords, std::optional<Provenance> provenance = std::nullopt);

  /// A map over Q with p-integral coefficients, reduced modulo p^k.
  static AffinoidSelfMap from_polymap(const PolyMap& h, std::uint64_t p, long k);
  /// (f^m(y + p^e u) - y) / p^e to precision k. Requires f^m(y) = y mod p^e.
  static AffinoidSelfMap recenter(const PolyMap& f, std::span<const mpz_class> y, std::uint64_t p, long e,
                                  std::uint64_t m, long k);

  std::uint64_t prime() const { return h_.prime(); }
  std::size_t dim() const { return h_.dim(); }
  long precision() const { return h_.precision(); }
  const ResidueMap& coords() const { return h_; }
  const ResiduePoly& operator[](std::size_t i) const { return h_[i]; }
  const std::optional<Provenance>& provenance() const { return prov_; }
  Degree total_degree() const;

  std::vector<mpz_class> eval(std::span<const mpz_class> u) const;
  /// n-fold iterate at a point, modulo p^k.
  std::vector<mpz_class> iterate(std::span<const mpz_class> u, std::uint64_t n) const;

  /// this o other. Products above the degree cap (0 = none) are dropped and
  /// the result's precision is lowered to the smallest dropped valuation.
  AffinoidSelfMap compose(const AffinoidSelfMap& other, std::uint64_t degree_cap = 0) const;
  AffinoidSelfMap power(std::uint64_t n, std::uint64_t degree_cap = 0) const;

  /// Same map at a lower precision.
  AffinoidSelfMap with_precision(long k) const;

  std::string to_string() const;

 private:
  ResidueMap h_;
  std::optional<Provenance> prov_;
};

/// Certified ||Delta_H|| <= p^-d.
struct DeltaNorm {
  long d = 0;
  /// True when some displacement coefficient of valuation d is known to be
  /// nonzero, so the bound is attained.
  bool exact = false;
};

DeltaNorm delta_norm(const AffinoidSelfMap& h);

struct BoostResult {
  std::uint64_t N = 1;
  AffinoidSelfMap map;
  DeltaNorm norm;
};

/// Smallest N = p^t whose recomputed Delta-norm beats R strictly.
BoostResult boost_iterate(const AffinoidSelfMap& h, std::uint64_t degree_cap = 0, int max_rounds = 12);

}  // namespace dml
