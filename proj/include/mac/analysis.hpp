#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mac/instance.hpp"
#include "mac/solver.hpp"

namespace mac {

/// Degree threshold above which a topology is labelled dense. Density is an
/// asymptotic notion, so this only labels reports; it never gates a check.
inline constexpr int kDenseMinDegree = 10;

/// Short description of a topology, e.g. "bipartite:20x20:m=400".
std::string describe_topology(const Instance& topology);

// ---------------------------------------------------------------------------
// Influence submodularity

/// Marginal gains of adding u to S and to S' (S ⊆ S') for the one-step
/// influence of v. Submodularity asks small_set_gain >= large_set_gain.
struct MarginalPair {
  int small_set_gain = 0;
  int large_set_gain = 0;
  bool violated() const noexcept { return small_set_gain < large_set_gain; }
};

MarginalPair influence_marginals(const Instance& inst, AgentId v, AgentId u, std::span<const AgentId> small_set,
                                 std::span<const AgentId> large_set);

/// Probability bound for a single S1 agent w landing in the violating range
/// of learning constants: (1/(s'-1) - 1/s') * d_w/(d_w - 1), where s' is
/// w's ceil-sum under the larger zero-set. Zero when s' < 2 or d_w < 2.
double violation_range_bound(int ceil_sum_large, int degree);

struct ViolationReport {
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  double rate = 0.0;
  /// Largest single-agent range bound seen over all tested configurations.
  double analytic_bound = 0.0;
  /// Mean over trials of the per-trial union bound (sum of range bounds over
  /// the common neighbors of u and v, capped at 1). The rate is compared
  /// against this.
  double expected_bound = 0.0;
  int min_degree = 0;
  std::uint64_t seed = 0;
  std::string topology;
  bool pass = false;
};

/// Per trial: well-behaved constants, distinct u, v in S0, S' a fair-coin
/// subset of S0 \ {u, v}, S a fair-coin subset of S'. Counts trials where
/// f_v(S ∪ {u}) - f_v(S) < f_v(S' ∪ {u}) - f_v(S').
ViolationReport check_influence_submodularity(const Instance& topology, std::uint64_t trials, std::uint64_t seed,
                                              unsigned jobs = 1);

// ---------------------------------------------------------------------------
// Expectation checks

struct BoundReport {
  std::string check;
  double lhs_mean = 0.0;
  double rhs_mean = 0.0;
  double lhs_se = 0.0;
  double rhs_se = 0.0;
  std::uint64_t draws = 0;
  /// lhs_mean + 2 * (lhs_se + rhs_se) >= rhs_mean
  bool pass = false;
  /// Topology meets the density label (see kDenseMinDegree).
  bool dense = false;
  std::uint64_t seed = 0;
  std::string topology;
  // Greedy-bound extras; zero elsewhere.
  double optimum_mean = 0.0;
  double empty_mean = 0.0;
};

/// E[f(A) + f(B)] versus E[f(A ∪ B) + f(A ∩ B)] over well-behaved draws.
/// Requires A, B ⊆ S0 and draws >= 30.
BoundReport check_expected_submodularity(const Instance& topology, std::span<const AgentId> a,
                                         std::span<const AgentId> b, std::uint64_t draws, std::uint64_t seed,
                                         unsigned jobs = 1);

/// E f(G_r) versus (1 - 1/e) E f(X*) + (1/e)(1 - 1/r) E f(∅) over well-behaved
/// draws, with greedy and brute force restricted to S0.
BoundReport check_greedy_bound(const Instance& topology, int budget, std::uint64_t draws, std::uint64_t seed,
                               const SolverOptions& options = {});

// ---------------------------------------------------------------------------
// Selection-rule distribution

struct DistributionReport {
  std::uint64_t draws = 0;
  /// Histogram key: "zero-set" when |S0| <= 10, "f-value" otherwise.
  std::string support;
  std::size_t outcomes = 0;
  double tv_distance = 0.0;
  double mean_f_dynamics = 0.0;
  double mean_f_rule = 0.0;
  double se_f_dynamics = 0.0;
  double se_f_rule = 0.0;
  /// (mean_f_dynamics - mean_f_rule) / sqrt(se^2 + se^2); 0 when both SEs vanish.
  double z_score = 0.0;
  double tv_tolerance = 0.05;
  /// tv_distance <= tv_tolerance
  bool pass = false;
  std::uint64_t seed = 0;
  std::string topology;
};

/// Over well-behaved draws, compares the converged zero-set of
/// run(∪partition ∪ tail) with that of run_selection_rule(partition, tail).
DistributionReport check_selection_rule_distribution(const Instance& topology,
                                                     std::span<const std::vector<AgentId>> partition,
                                                     std::span<const AgentId> tail, std::uint64_t draws,
                                                     std::uint64_t seed, unsigned jobs = 1,
                                                     double tv_tolerance = 0.05);

std::string to_json(const ViolationReport& report);
std::string to_json(const BoundReport& report);
std::string to_json(const DistributionReport& report);

}  // namespace mac
