#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dml/multipoly.hpp"

namespace dml {

/// Orbit of x under f against V = {g = 0} (intersected with the extra targets).
struct OrbitProblem {
  PolyMap f;
  Point x;
  MultiPoly g;
  std::vector<MultiPoly> extra_targets;

  OrbitProblem(PolyMap f_, Point x_, MultiPoly g_, std::vector<MultiPoly> extra = {});
  /// All targets, g first.
  std::vector<MultiPoly> targets() const;
};

/// A_{n+l} = sum_i a_i A_{n+i}.
struct Recurrence {
  std::vector<mpq_class> coeffs;
  std::vector<mpq_class> initial;

  Recurrence(std::vector<mpq_class> a, std::vector<mpq_class> init);
  std::size_t order() const { return coeffs.size(); }
  /// A_0..A_{count-1}.
  std::vector<mpq_class> terms(std::size_t count) const;
};

struct ResidueCycle {
  std::uint64_t p = 0;
  long e = 1;
  std::uint64_t preperiod = 0;
  std::uint64_t period = 1;
  /// Residues of f^(s+r)(x) mod p^e, r = 0..m-1.
  std::vector<std::vector<mpz_class>> cycle;
};

/// {a*n + b : n >= 0}, a >= 1.
struct Progression {
  std::uint64_t a = 1;
  std::uint64_t b = 0;
  bool contains(std::uint64_t n) const { return n >= b && (n - b) % a == 0; }
  friend bool operator==(const Progression&, const Progression&) = default;
  friend auto operator<=>(const Progression&, const Progression&) = default;
};

enum class Status { Certified, CertifiedNumeric, Partial };
std::string to_string(Status s);
Status status_from_string(const std::string& s);
/// Certified > CertifiedNumeric > Partial.
int status_rank(Status s);

struct UnresolvedClass {
  std::uint64_t modulus = 1;
  std::uint64_t offset = 0;
  std::string diagnostic;
  friend bool operator==(const UnresolvedClass&, const UnresolvedClass&) = default;
};

/// How one residue class n = offset mod modulus was settled.
struct ClassRecord {
  std::uint64_t modulus = 1;
  std::uint64_t offset = 0;
  /// "strassmann", "affine-closure", "numeric-evidence" or "unresolved".
  std::string method;
  long delta_exponent = 0;
  std::optional<std::size_t> strassmann_bound;
  std::vector<std::uint64_t> hits;
  long precision = 0;
  long tail = 0;
  std::uint64_t series_degree = 0;
  long separation_depth = 0;
  /// Indices n < 0 (or before the class start) where the interpolated class
  /// function vanishes at an exactly verified backward orbit point.
  std::vector<long long> backward_zeros;
  friend bool operator==(const ClassRecord&, const ClassRecord&) = default;
};

struct Certificate {
  /// "p-adic", "exact-cycle", "trivial" or "intersection".
  std::string method;
  std::uint64_t prime = 0;
  long level = 0;
  std::uint64_t preperiod = 0;
  std::uint64_t period = 0;
  /// Factor by which the residue period was extended so every class contracts.
  std::uint64_t extension = 1;
  /// Boost exponent N (a power of p; 1 unless p = 2 needed more).
  std::uint64_t boost = 1;
  std::uint64_t class_modulus = 0;
  std::vector<ClassRecord> classes;
  std::vector<long> precision_ladder;
  std::uint64_t oracle_horizon = 0;
  std::uint64_t k_evidence = 0;
  std::vector<std::string> notes;
  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct ReturnSet {
  std::vector<Progression> progressions;
  std::vector<std::uint64_t> sporadic;
  std::vector<UnresolvedClass> unresolved;
  Status status = Status::Certified;
  Certificate certificate;

  bool contains(std::uint64_t n) const;
  /// Members <= n_max (unresolved classes excluded).
  std::vector<std::uint64_t> members_up_to(std::uint64_t n_max) const;
  bool is_finite() const { return progressions.empty() && unresolved.empty(); }
  friend bool operator==(const ReturnSet&, const ReturnSet&) = default;
};

struct ClassifyConfig {
  std::vector<std::uint64_t> primes{3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 2};
  long k = 64;
  long k_max = 512;
  /// Largest t tried when boosting the class map to its p^t-th iterate.
  long e_cap = 6;
  std::uint64_t k_evidence = 200;
  std::uint64_t n_max = 10000;
  /// Abort exact iteration once a coordinate needs more bits than this.
  std::uint64_t bit_budget = std::uint64_t{1} << 20;
  /// Largest residue state space p^(eN) explored by cycle detection.
  std::uint64_t state_cap = std::uint64_t{1} << 24;
  /// Largest residue-class modulus after period extension and boosting.
  std::uint64_t class_cap = 4096;
  /// Primes tried before settling for the best partial answer (0 = all).
  std::size_t prime_attempts = 0;
  long zero_search_depth = 4;
  /// Negative class times T = -1, -2, ... checked for exact backward zeros.
  long negative_probe = 16;
};

/// Exact orbit scan.
struct BruteForceResult {
  std::vector<std::uint64_t> hits;
  /// Last index actually examined (n_max unless the budget stopped the scan).
  std::uint64_t horizon = 0;
  bool budget_exceeded = false;
  /// Exact preperiod/period when the orbit itself repeats.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> exact_cycle;
};

BruteForceResult brute_force_scan(const OrbitProblem& prob, std::uint64_t n_max, std::uint64_t bit_budget = 0);
/// {n <= n_max : g(f^n(x)) = 0}; throws BudgetExceeded when the coefficient budget is passed.
std::vector<std::uint64_t> brute_force_returns(const OrbitProblem& prob, std::uint64_t n_max,
                                               std::uint64_t bit_budget = 0);

/// True when every coefficient and coordinate of the problem is p-integral.
bool is_integral_at(const OrbitProblem& prob, std::uint64_t p);
/// Smallest admissible p >= 3, else 2; throws NoGoodPrime.
std::uint64_t select_prime(const OrbitProblem& prob, std::span<const std::uint64_t> candidates);
/// Candidate primes in the order they are tried: p >= 3 ascending, then 2.
std::vector<std::uint64_t> prime_order(std::span<const std::uint64_t> candidates);

ResidueCycle residue_cycle(const PolyMap& f, const Point& x, std::uint64_t p, long e,
                           std::uint64_t state_cap = std::uint64_t{1} << 24);

ReturnSet classify_returns(const OrbitProblem& prob, const ClassifyConfig& config = {});
ReturnSet sml_solve(const Recurrence& rec, const ClassifyConfig& config = {});

/// Companion map and initial point of a recurrence, with target x1.
OrbitProblem companion_problem(const Recurrence& rec);

/// Merges classes into coarser progressions, extends progressions backwards
/// through sporadic points, and drops sporadic points already covered.
void minimize(ReturnSet& rs);
/// Intersection (progressions via CRT, sporadic points by membership).
ReturnSet intersect(const ReturnSet& a, const ReturnSet& b);

}  // namespace dml
