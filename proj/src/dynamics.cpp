#include "mac/dynamics.hpp"

#include <algorithm>
#include <sstream>

#include "mac/influence.hpp"

namespace mac {

namespace {

void check_agent(const Instance& inst, AgentId a, const char* what) {
  if (!inst.contains(a)) {
    throw DynamicsError(std::string(what) + ": unknown agent id " + std::to_string(a));
  }
}

void record_sets(Trace& trace) {
  trace.zero_sets.clear();
  trace.one_sets.clear();
  for (const auto& p : trace.steps) {
    trace.zero_sets.push_back(p.zeros());
    trace.one_sets.push_back(p.ones());
  }
}

// Steps from trace.steps.back() until a step repeats its predecessor.
std::size_t settle(const Instance& inst, Trace& trace) {
  const std::size_t cap = static_cast<std::size_t>(inst.size()) + 1;
  for (std::size_t i = 0; i < cap; ++i) {
    Profile next = step(inst, trace.steps.back());
    const bool fixed = next == trace.steps.back();
    trace.steps.push_back(std::move(next));
    if (fixed) return trace.steps.size() - 1;
  }
  throw std::logic_error("dynamics did not converge within |V|+1 steps");
}

void append_list(std::ostringstream& out, const std::vector<AgentId>& ids) {
  out << '[';
  for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? "," : "") << ids[i];
  out << ']';
}

}  // namespace

char to_char(Action a) noexcept {
  switch (a) {
    case Action::Zero: return '0';
    case Action::One: return '1';
    case Action::Undecided: return 'e';
  }
  return '?';
}

Profile::Profile(int agents)
    : actions_(static_cast<std::size_t>(agents), Action::Undecided),
      controlled_(static_cast<std::size_t>(agents), 0) {}

void Profile::set(AgentId a, Action action) {
  if (controlled(a) && action != Action::Zero) {
    throw DynamicsError("controlled agent " + std::to_string(a) + " must play Zero");
  }
  actions_[Instance::index(a)] = action;
}

void Profile::control(AgentId a) {
  controlled_[Instance::index(a)] = 1;
  actions_[Instance::index(a)] = Action::Zero;
}

std::vector<AgentId> Profile::collect(Action which) const {
  std::vector<AgentId> out;
  for (std::size_t i = 0; i < actions_.size(); ++i)
    if (actions_[i] == which) out.push_back(static_cast<AgentId>(i + 1));
  return out;
}

std::vector<AgentId> Profile::controlled_agents() const {
  std::vector<AgentId> out;
  for (std::size_t i = 0; i < controlled_.size(); ++i)
    if (controlled_[i]) out.push_back(static_cast<AgentId>(i + 1));
  return out;
}

Profile step(const Instance& inst, const Profile& profile) {
  if (profile.size() != inst.size()) {
    throw DynamicsError("profile has " + std::to_string(profile.size()) + " agents, instance has " +
                        std::to_string(inst.size()));
  }
  Profile next = profile;
  for (AgentId i = 1; i <= inst.size(); ++i) {
    if (profile.controlled(i)) continue;
    int ceil_sum = 0;
    int floor_sum = 0;
    for (AgentId j : inst.neighbors(i)) {
      ceil_sum += ceil_value(profile.action(j));
      floor_sum += floor_value(profile.action(j));
    }
    const double c = inst.constant(i);
    if (c * ceil_sum < 1.0) {
      next.set(i, Action::One);
    } else if (c * floor_sum > 1.0) {
      next.set(i, Action::Zero);
    } else {
      next.set(i, Action::Undecided);
    }
  }
  return next;
}

Trace run(const Instance& inst, std::span<const AgentId> control) {
  Profile start(inst.size());
  for (AgentId a : control) {
    check_agent(inst, a, "run");
    start.control(a);
  }
  Trace trace;
  trace.steps.push_back(std::move(start));
  trace.injections.push_back(0);
  trace.converged_at = settle(inst, trace);
  record_sets(trace);
  return trace;
}

Trace run_staged(const Instance& inst, std::span<const std::vector<AgentId>> partition) {
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(inst.size()), 0);
  for (const auto& cell : partition) {
    for (AgentId a : cell) {
      check_agent(inst, a, "run_staged");
      if (seen[Instance::index(a)]++) {
        throw DynamicsError("run_staged: agent " + std::to_string(a) + " appears in more than one cell");
      }
    }
  }

  Trace trace;
  trace.steps.emplace_back(inst.size());
  for (std::size_t k = 0; k < partition.size() || k == 0; ++k) {
    if (k > 0) trace.steps.push_back(trace.steps.back());
    if (k < partition.size()) {
      for (AgentId a : partition[k]) trace.steps.back().control(a);
    }
    trace.injections.push_back(trace.steps.size() - 1);
    trace.converged_at = settle(inst, trace);
  }
  record_sets(trace);
  return trace;
}

double selection_quotient(int degree, int f_ref, int f_now) {
  auto inverse = [](int f) { return f >= 1 ? 1.0 / f : 1.0; };
  return 1.0 / degree + inverse(f_ref) - inverse(f_now);
}

Trace run_selection_rule(const Instance& inst, std::span<const std::vector<AgentId>> partition,
                         std::span<const AgentId> tail) {
  if (!is_well_behaved(inst)) throw DynamicsError("run_selection_rule: instance is not well-behaved");
  std::vector<std::uint8_t> in_partition(static_cast<std::size_t>(inst.size()), 0);
  for (const auto& cell : partition) {
    for (AgentId a : cell) {
      check_agent(inst, a, "run_selection_rule");
      if (!inst.in_s0(a)) throw DynamicsError("run_selection_rule: partition agent " + std::to_string(a) + " is not in S0");
      in_partition[Instance::index(a)] = 1;
    }
  }
  for (AgentId a : tail) {
    check_agent(inst, a, "run_selection_rule");
    if (!inst.in_s0(a)) throw DynamicsError("run_selection_rule: tail agent " + std::to_string(a) + " is not in S0");
    if (in_partition[Instance::index(a)]) {
      throw DynamicsError("run_selection_rule: tail agent " + std::to_string(a) + " is also in the partition");
    }
  }

  Trace trace = run_staged(inst, partition);

  const auto n = static_cast<std::size_t>(inst.size());
  std::vector<std::uint8_t> reference(n, 0);
  for (AgentId a : trace.final_zeros()) reference[Instance::index(a)] = 1;

  trace.steps.push_back(trace.steps.back());
  for (AgentId a : tail) trace.steps.back().control(a);
  trace.injections.push_back(trace.steps.size() - 1);

  std::vector<std::uint8_t> current(n, 0);
  const std::size_t cap = n + 2;
  bool converged = false;
  for (std::size_t round = 0; round < cap && !converged; ++round) {
    Profile next = trace.steps.back();
    for (AgentId a : next.zeros()) current[Instance::index(a)] = 1;

    std::vector<AgentId> added;
    for (AgentId v = 1; v <= inst.n0(); ++v) {
      if (current[Instance::index(v)] || inst.degree(v) == 0) continue;
      const int f_ref = influence_closed_form(inst, v, reference);
      const int f_now = influence_closed_form(inst, v, current);
      if (selection_quotient(inst.degree(v), f_ref, f_now) > inst.constant(v)) added.push_back(v);
    }
    for (AgentId v : added) {
      next.set(v, Action::Zero);
      current[Instance::index(v)] = 1;
    }
    // S1 responds to the zero-set exactly as in one step of the dynamics.
    for (AgentId j = inst.n0() + 1; j <= inst.size(); ++j) {
      if (next.controlled(j)) continue;
      int ceil_sum = 0;
      for (AgentId i : inst.neighbors(j)) ceil_sum += current[Instance::index(i)] ? 0 : 1;
      next.set(j, inst.constant(j) * ceil_sum < 1.0 ? Action::One : Action::Undecided);
    }
    converged = next == trace.steps.back();
    trace.steps.push_back(std::move(next));
  }
  if (!converged) throw std::logic_error("selection rule did not reach a fixpoint");
  trace.converged_at = trace.steps.size() - 1;
  record_sets(trace);
  return trace;
}

std::string format_trace(const Trace& trace) {
  std::ostringstream out;
  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    out << "t=" << t << " zeros=";
    append_list(out, trace.zero_sets[t]);
    out << " ones=";
    append_list(out, trace.one_sets[t]);
    out << '\n';
  }
  return out.str();
}

}  // namespace mac
