#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <vector>

namespace dml {

struct WindowDensity {
  std::uint64_t length = 0;
  /// Largest #(S n [a, a+L-1]) over windows inside [0, horizon].
  std::uint64_t count = 0;
  /// Leftmost window start attaining the count.
  std::uint64_t start = 0;
  mpq_class density() const {
    mpq_class q(static_cast<unsigned long>(count), static_cast<unsigned long>(length));
    q.canonicalize();
    return q;
  }
};

struct DensityProfile {
  std::uint64_t horizon = 0;
  std::uint64_t size = 0;
  std::vector<WindowDensity> profile;
};

/// Window lengths longer than horizon + 1 are skipped.
DensityProfile density_profile(std::span<const std::uint64_t> set, std::uint64_t horizon,
                               std::span<const std::uint64_t> windows);

/// 1, 2, 4, ... up to horizon + 1.
std::vector<std::uint64_t> dyadic_windows(std::uint64_t horizon);

}  // namespace dml
