#pragma once

#include <vector>

namespace dml::testing {

struct OrbitInstance {
  const char* name;
  const char* map;
  const char* point;
  const char* target;
};

// Integral maps on A^1 and A^2 whose orbits grow slowly enough for an exact
// scan to 10^4.
inline const std::vector<OrbitInstance>& classifier_corpus() {
  static const std::vector<OrbitInstance> c{
      {"scale3", "(3*x1)", "(1)", "x1 - 9"},
      {"translate", "(x1 + 1)", "(0)", "x1 - 5"},
      {"translate2_pair", "(x1 + 2)", "(1)", "(x1 - 5)*(x1 - 7)"},
      {"affine_2x1", "(2*x1 + 1)", "(0)", "x1 - 15"},
      {"negate", "(-x1)", "(1)", "x1 - 1"},
      {"descend", "(x1 - 3)", "(10)", "x1*(x1 - 1)"},
      {"affine_4x1", "(4*x1 + 1)", "(0)", "x1 - 21"},
      {"never", "(3*x1 + 2)", "(0)", "x1 + 1"},
      {"cubic_target", "(x1 + 1)", "(0)", "x1^3 - 6*x1^2 + 11*x1 - 6"},
      {"fixed_point", "(2*x1 - 1)", "(1)", "x1 - 1"},
      {"scale7", "(7*x1)", "(1)", "x1 - 1"},
      {"flip", "(1 - x1)", "(0)", "x1"},
      {"skew_scale", "(x1 + 1, 2*x2)", "(0, 1)", "x2 - 32"},
      {"swap", "(x2, x1)", "(1, 2)", "x1 - 2"},
      {"triangular_sum", "(x1 + 1, x2 + x1)", "(0, 0)", "x2 - 10"},
      {"squares", "(x1 + 1, x2 + 2*x1 + 1)", "(0, 0)", "x2 - 49"},
      {"powers_2_3", "(2*x1, 3*x2)", "(1, 1)", "x1 - x2"},
      {"shear", "(x1 + x2, x2)", "(0, 1)", "x1 - 7"},
      {"sign_flip", "(x1 + 1, -x2)", "(0, 1)", "x2 - 1"},
      {"sign_flip_union", "(x1 + 1, -x2)", "(0, 1)", "(x2 - 1)*(x1 - 3)"},
      {"catch_up", "(x1 + 2, x2)", "(0, 6)", "x1 - x2"},
      {"jacobsthal", "(x2, 2*x1 + x2)", "(0, 1)", "x1"},
      {"rotation4", "(x2, -x1)", "(1, 0)", "x1 - 1"},
      {"even_zeros", "(x2, 4*x1)", "(0, 1)", "x1"},
      {"sum_of_squares", "(x1 + 1, x2 + x1^2)", "(0, 0)", "x2 - 14"},
      {"line", "(x1 + 1, x2 + 2)", "(0, 0)", "2*x1 - x2"},
      {"meet", "(x1 + 1, x2)", "(0, 3)", "x1 - x2"},
      {"fibonacci_pair", "(x2, x1 + x2)", "(0, 1)", "x1"},
      {"tribonacci_like", "(x2, x1 + 2*x2)", "(1, 1)", "x1 - 7"},
      {"quadratic_drift", "(x1 + 1, x2 + x1^2 - 4*x1)", "(0, 0)", "x2"},
  };
  return c;
}

}  // namespace dml::testing
