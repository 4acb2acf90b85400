#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mac/instance.hpp"

namespace mac {

/// Undecided stands for an arbitrary interior action in (0, 1). The dynamics
/// only ever look at its ceiling (1) and floor (0), so it carries no value.
enum class Action : std::uint8_t { Zero, One, Undecided };

constexpr int ceil_value(Action a) noexcept { return a == Action::Zero ? 0 : 1; }
constexpr int floor_value(Action a) noexcept { return a == Action::One ? 1 : 0; }

char to_char(Action a) noexcept;

class DynamicsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One snapshot of the game: an action per agent and the set of controlled
// agents. Controlled agents always play Zero.
class Profile {
 public:
  Profile() = default;
  /// All agents Undecided, nobody controlled.
  explicit Profile(int agents);

  int size() const noexcept { return static_cast<int>(actions_.size()); }

  Action action(AgentId a) const { return actions_[Instance::index(a)]; }
  bool controlled(AgentId a) const { return controlled_[Instance::index(a)] != 0; }

  void set(AgentId a, Action action);
  /// Pins `a` to Zero for the rest of the run.
  void control(AgentId a);

  std::vector<AgentId> zeros() const { return collect(Action::Zero); }
  std::vector<AgentId> ones() const { return collect(Action::One); }
  std::vector<AgentId> undecided() const { return collect(Action::Undecided); }
  std::vector<AgentId> controlled_agents() const;

  bool operator==(const Profile&) const = default;

 private:
  std::vector<AgentId> collect(Action which) const;

  std::vector<Action> actions_;
  std::vector<std::uint8_t> controlled_;
};

// Time-indexed record of a run. steps[0] is the all-Undecided start with the
// first control set already pinned. `injections` holds the step index at
// which each control set was pinned, starting with 0.
struct Trace {
  std::vector<Profile> steps;
  std::vector<std::vector<AgentId>> zero_sets;
  std::vector<std::vector<AgentId>> one_sets;
  std::vector<std::size_t> injections;
  /// First step after the last injection that repeats its predecessor.
  std::size_t converged_at = 0;

  const Profile& final_profile() const { return steps.back(); }
  const std::vector<AgentId>& final_zeros() const { return zero_sets.back(); }
  const std::vector<AgentId>& final_ones() const { return one_sets.back(); }
};

/// One synchronous update. Uncontrolled agent i looks at its neighbors in
/// `profile`: One if c_i * sum(ceil) < 1, Zero if c_i * sum(floor) > 1,
/// Undecided otherwise.
Profile step(const Instance& inst, const Profile& profile);

/// Runs the dynamics from all-Undecided with `control` pinned to Zero until two
/// consecutive profiles agree.
Trace run(const Instance& inst, std::span<const AgentId> control);

/// Runs to convergence with partition[0] controlled, then adds partition[1]
/// and continues, and so on. Cells must be pairwise disjoint.
///
/// The converged profile equals run(inst, union) whenever no injected agent is
/// already playing One when its cell is added. One-sided control on a
/// well-behaved instance always satisfies this.
Trace run_staged(const Instance& inst, std::span<const std::vector<AgentId>> partition);

/// Left-hand side of the late-addition rule:
///   1/d + u(f_ref) - u(f_now),  u(f) = 1/f for f >= 1 and 1 for f = 0.
/// Learning constants are below 1, so a zero influence caps the conditional
/// interval of c at 1 instead of sending it to infinity.
double selection_quotient(int degree, int f_ref, int f_now);

/// Staged run over `partition`, then `tail` joins the zero-set and every
/// S0 agent whose selection quotient exceeds its learning constant is added,
/// in batch rounds, until nothing changes. Requires a well-behaved instance
/// with partition and tail inside S0 and tail disjoint from the partition.
Trace run_selection_rule(const Instance& inst, std::span<const std::vector<AgentId>> partition,
                         std::span<const AgentId> tail);

/// Debug export, one line per step: `t=<k> zeros=[..] ones=[..]`.
std::string format_trace(const Trace& trace);

}  // namespace mac
