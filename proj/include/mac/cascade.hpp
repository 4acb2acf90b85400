#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mac/dynamics.hpp"
#include "mac/instance.hpp"

namespace mac {

// Converged state of the dynamics kept in incremental form: per-agent
// Zero/One neighbor counts and the running number of inactive edges. Updates
// are synchronous rounds over a frontier of agents whose counts changed, which
// reaches the same fixpoint as stepping every agent.
//
// inject() adds one more controlled agent and resumes from the current state
// instead of restarting. That is exact as long as the agent is not already
// playing One: the update map is monotone in (zero-set, one-set), so resuming
// from a state below the new least fixpoint climbs to it.
class Cascade {
 public:
  /// Converged state with `control` pinned from the start.
  Cascade(const Instance& inst, std::span<const AgentId> control);

  /// Pins `a` to Zero and re-settles. Returns false, leaving the state
  /// untouched, when `a` already plays One.
  bool inject(AgentId a);

  Action action(AgentId a) const { return action_[Instance::index(a)]; }
  std::size_t inactive_edges() const noexcept { return inactive_; }
  /// Synchronous rounds performed since construction, including the round
  /// that detected the fixpoint.
  std::size_t rounds() const noexcept { return rounds_; }
  std::vector<AgentId> control() const;

 private:
  void commit(std::size_t i, Action a);
  void settle();

  const Instance* inst_;
  std::vector<Action> action_;
  std::vector<std::uint8_t> pinned_;
  std::vector<int> zero_nbrs_;
  std::vector<int> one_nbrs_;
  std::vector<std::size_t> frontier_;
  std::vector<std::uint8_t> queued_;
  std::size_t inactive_ = 0;
  std::size_t rounds_ = 0;
};

}  // namespace mac
