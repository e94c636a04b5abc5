#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dml/affinoid.hpp"
#include "dml/padic_series.hpp"

namespace dml {

struct InterpolationCertificate {
  std::uint64_t p = 0;
  long d = 0;
  bool d_exact = false;
  /// The exact comparison against R, e.g. "1*(3-1) = 2 > 1".
  std::string r_comparison;
  std::uint64_t degree = 0;
  long tail = 0;
  long working_precision = 0;
  std::uint64_t degree_cap = 0;
  /// Smallest valuation discarded by degree truncation (kInfiniteValuation if none).
  long truncation_valuation = kInfiniteValuation;
};

/// G_j(T) with G_j(n) = j-th coordinate of H^n(base) for every integer n >= 0.
struct InterpolationResult {
  std::vector<PadicSeries> series;
  /// Delta^i(u_j)(base), i = 0..D, per coordinate.
  std::vector<std::vector<mpz_class>> differences;
  InterpolationCertificate certificate;

  std::vector<PadicNumber> eval(const mpz_class& n) const;
};

struct InterpolateOptions {
  /// Degree cap for the symbolic Delta powers; 0 selects 4k/d.
  std::uint64_t degree_cap = 0;
};

/// Delta^i(h) = (h o H - h) iterated, for i = 0..count-1. Terms above the
/// degree cap are dropped and their smallest valuation folded into `dropped`.
std::vector<ResiduePoly> delta_powers(const AffinoidSelfMap& H, const ResiduePoly& h, std::size_t count,
                                      std::uint64_t degree_cap, long& dropped);

/// Forward differences a_i = sum_l (-1)^(i-l) C(i,l) x_l of a sample sequence, modulo m.
std::vector<mpz_class> forward_differences(std::span<const mpz_class> samples, const mpz_class& m);

/// G(T, .) for one map: the symbolic Delta powers of the coordinate
/// functions are computed once and specialized at any base point.
class ActionInterpolator {
 public:
  explicit ActionInterpolator(const AffinoidSelfMap& H, const InterpolateOptions& opts = {});
  InterpolationResult at(std::span<const mpz_class> base) const;

 private:
  AffinoidSelfMap H_;
  DeltaNorm norm_;
  std::uint64_t cap_ = 0;
  std::uint64_t degree_ = 0;
  long working_ = 0;
  long dropped_ = kInfiniteValuation;
  std::vector<std::vector<ResiduePoly>> powers_;
};

/// Mahler interpolation of the orbit of `base` built from symbolic Delta powers.
InterpolationResult interpolate_action(const AffinoidSelfMap& H, std::span<const mpz_class> base,
                                       const InterpolateOptions& opts = {});

/// Same series built from the finite differences of the sampled orbit
/// H^l(base), l = 0..D. No symbolic powers are needed.
InterpolationResult interpolate_orbit(const AffinoidSelfMap& H, std::span<const mpz_class> base);

/// Inverse K = sum (-1)^i Delta^i(u) of a map with ||Delta|| < 1.
AffinoidSelfMap invert_map(const AffinoidSelfMap& H, std::uint64_t degree_cap = 0);

/// theta(h) = sum_{i>=1} (-1)^(i-1)/i Delta^i(h). The result's precision is the
/// degraded tail: digits lost dividing by i and the truncation bound.
ResiduePoly apply_vector_field(const AffinoidSelfMap& H, const ResiduePoly& h, std::uint64_t degree_cap = 0);
std::vector<ResiduePoly> vector_field(const AffinoidSelfMap& H, std::uint64_t degree_cap = 0);

}  // namespace dml
