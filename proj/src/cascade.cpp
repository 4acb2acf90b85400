#include "mac/cascade.hpp"

#include <string>
#include <utility>

namespace mac {

Cascade::Cascade(const Instance& inst, std::span<const AgentId> control)
    : inst_(&inst),
      action_(static_cast<std::size_t>(inst.size()), Action::Undecided),
      pinned_(static_cast<std::size_t>(inst.size()), 0),
      zero_nbrs_(static_cast<std::size_t>(inst.size()), 0),
      one_nbrs_(static_cast<std::size_t>(inst.size()), 0),
      queued_(static_cast<std::size_t>(inst.size()), 0) {
  for (AgentId a : control) {
    if (!inst.contains(a)) throw DynamicsError("cascade: unknown agent id " + std::to_string(a));
    const auto i = Instance::index(a);
    if (pinned_[i]) continue;
    pinned_[i] = 1;
    commit(i, Action::Zero);
  }
  // The first round looks at everyone, like the first step from all-Undecided.
  frontier_.clear();
  for (std::size_t i = 0; i < action_.size(); ++i) {
    frontier_.push_back(i);
    queued_[i] = 1;
  }
  settle();
}

bool Cascade::inject(AgentId a) {
  if (!inst_->contains(a)) throw DynamicsError("cascade: unknown agent id " + std::to_string(a));
  const auto i = Instance::index(a);
  if (action_[i] == Action::One) return false;
  if (pinned_[i]) return true;
  pinned_[i] = 1;
  if (action_[i] != Action::Zero) commit(i, Action::Zero);
  settle();
  return true;
}

std::vector<AgentId> Cascade::control() const {
  std::vector<AgentId> out;
  for (std::size_t i = 0; i < pinned_.size(); ++i)
    if (pinned_[i]) out.push_back(static_cast<AgentId>(i + 1));
  return out;
}

void Cascade::commit(std::size_t i, Action a) {
  action_[i] = a;
  for (AgentId nb : inst_->neighbors(static_cast<AgentId>(i + 1))) {
    const auto j = Instance::index(nb);
    if (a == Action::Zero) {
      ++zero_nbrs_[j];
      if (action_[j] != Action::Zero) ++inactive_;
    } else {
      ++one_nbrs_[j];
    }
    if (!queued_[j]) {
      queued_[j] = 1;
      frontier_.push_back(j);
    }
  }
}

void Cascade::settle() {
  std::vector<std::pair<std::size_t, Action>> decisions;
  std::vector<std::size_t> current;
  while (true) {
    ++rounds_;
    current.swap(frontier_);
    frontier_.clear();
    for (std::size_t i : current) queued_[i] = 0;

    decisions.clear();
    for (std::size_t i : current) {
      if (pinned_[i] || action_[i] != Action::Undecided) continue;
      const double c = inst_->constants()[i];
      const int degree = inst_->degree(static_cast<AgentId>(i + 1));
      const int ceil_sum = degree - zero_nbrs_[i];
      const int floor_sum = one_nbrs_[i];
      if (c * ceil_sum < 1.0) {
        decisions.push_back({i, Action::One});
      } else if (c * floor_sum > 1.0) {
        decisions.push_back({i, Action::Zero});
      }
    }
    if (decisions.empty()) break;
    for (const auto& [i, a] : decisions) commit(i, a);
  }
  for (std::size_t i : frontier_) queued_[i] = 0;
  frontier_.clear();
}

}  // namespace mac
