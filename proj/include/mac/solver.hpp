#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mac/instance.hpp"

namespace mac {

/// Which agents may be controlled: S0 only, or any agent.
enum class SideRestriction { S0Only, AnySide };

std::string_view to_string(SideRestriction side);
SideRestriction parse_side(std::string_view text);

/// Number of edges with at least one endpoint at Zero once the dynamics under
/// `control` have converged. Undecided endpoints count as nonzero.
std::size_t objective(const Instance& inst, std::span<const AgentId> control);

/// objective / |E|. Throws std::domain_error on an instance without edges.
double inactivation_ratio(const Instance& inst, std::span<const AgentId> control);

/// Candidate agents in ascending id order.
std::vector<AgentId> candidate_pool(const Instance& inst, SideRestriction side);

struct GreedyResult {
  std::vector<AgentId> picks;
  std::vector<std::int64_t> gains;  // f(G_j) - f(G_{j-1}), negative when f is not monotone
  std::vector<std::size_t> values;  // f(G_j), j = 1..r
  std::size_t empty_value = 0;      // f(empty set)
  std::size_t final_value = 0;
};

struct OptResult {
  std::vector<AgentId> best_set;
  std::size_t best_value = 0;
  std::uint64_t subsets_evaluated = 0;
};

/// The budget is larger than the candidate pool.
class BudgetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exhaustive search would exceed the enumeration cap.
class EnumerationCapExceeded : public std::runtime_error {
 public:
  EnumerationCapExceeded(std::uint64_t subsets, std::uint64_t cap);
  std::uint64_t subsets() const noexcept { return subsets_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t subsets_;
  std::uint64_t cap_;
};

struct SolverOptions {
  unsigned jobs = 1;
  std::uint64_t enumeration_cap = 5'000'000;
};

/// Builds G_1..G_r one agent at a time, each time taking the remaining
/// candidate that maximizes f(G ∪ {w}); ties go to the lowest id.
GreedyResult greedy(const Instance& inst, int budget, SideRestriction side,
                    const SolverOptions& options = {});

/// Evaluates every size-`budget` subset of the pool. Ties go to the
/// lexicographically smallest sorted set.
OptResult brute_force(const Instance& inst, int budget, SideRestriction side,
                      const SolverOptions& options = {});

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

}  // namespace mac
