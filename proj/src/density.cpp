#include "dml/density.hpp"

#include "dml/errors.hpp"

namespace dml {

DensityProfile density_profile(std::span<const std::uint64_t> set, std::uint64_t horizon,
                               std::span<const std::uint64_t> windows) {
  if (horizon >= (std::uint64_t{1} << 32)) throw BudgetExceeded("density horizon too large for a prefix scan");
  DensityProfile out;
  out.horizon = horizon;
  std::vector<std::uint64_t> prefix(horizon + 2, 0);
  for (auto n : set)
    if (n <= horizon) prefix[n + 1] = 1;
  for (std::uint64_t i = 1; i < prefix.size(); ++i) prefix[i] += prefix[i - 1];
  out.size = prefix.back();
  for (auto L : windows) {
    if (L == 0 || L > horizon + 1) continue;
    WindowDensity w{L, 0, 0};
    for (std::uint64_t a = 0; a + L <= horizon + 1; ++a) {
      const std::uint64_t c = prefix[a + L] - prefix[a];
      if (c > w.count) {
        w.count = c;
        w.start = a;
      }
    }
    out.profile.push_back(w);
  }
  return out;
}

std::vector<std::uint64_t> dyadic_windows(std::uint64_t horizon) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t L = 1; L <= horizon + 1; L *= 2) out.push_back(L);
  return out;
}

}  // namespace dml
