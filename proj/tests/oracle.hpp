#pragma once

// Straight-line reference implementations used to cross-check the library.
// Deliberately naive: plain edge scans, no incremental state, no shared code
// with src/ beyond reading an Instance's edges and constants.

#include <algorithm>
#include <cstddef>
#include <set>
#include <vector>

#include "mac/instance.hpp"

namespace oracle {

enum : int { kZero = 0, kOne = 1, kUndecided = 2 };

using State = std::vector<int>;  // indexed by agent id, slot 0 unused

struct Run {
  std::vector<State> states;
  std::size_t converged_at = 0;
};

inline std::vector<std::vector<int>> adjacency(const mac::Instance& inst) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(inst.size()) + 1);
  for (const auto& e : inst.edges()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  return adj;
}

inline State one_step(const mac::Instance& inst, const State& prev, const std::vector<bool>& pinned) {
  const auto adj = adjacency(inst);
  State next = prev;
  for (int i = 1; i <= inst.size(); ++i) {
    if (pinned[i]) {
      next[i] = kZero;
      continue;
    }
    int up = 0;
    int down = 0;
    for (int j : adj[i]) {
      up += prev[j] == kZero ? 0 : 1;
      down += prev[j] == kOne ? 1 : 0;
    }
    const double c = inst.constants()[i - 1];
    if (c * up < 1.0) next[i] = kOne;
    else if (c * down > 1.0) next[i] = kZero;
    else next[i] = kUndecided;
  }
  return next;
}

// Appends steps to `run` until two consecutive states agree.
inline void settle(const mac::Instance& inst, Run& run, const std::vector<bool>& pinned) {
  for (int guard = 0; guard <= inst.size() + 1; ++guard) {
    State next = one_step(inst, run.states.back(), pinned);
    const bool same = next == run.states.back();
    run.states.push_back(std::move(next));
    if (same) {
      run.converged_at = run.states.size() - 1;
      return;
    }
  }
  throw std::logic_error("oracle: no convergence");
}

inline Run simulate(const mac::Instance& inst, const std::vector<int>& control) {
  std::vector<bool> pinned(static_cast<std::size_t>(inst.size()) + 1, false);
  State start(static_cast<std::size_t>(inst.size()) + 1, kUndecided);
  for (int a : control) {
    pinned[a] = true;
    start[a] = kZero;
  }
  Run run;
  run.states.push_back(start);
  settle(inst, run, pinned);
  return run;
}

inline Run simulate_staged(const mac::Instance& inst, const std::vector<std::vector<int>>& cells) {
  if (cells.empty()) return simulate(inst, {});
  Run run = simulate(inst, cells.front());
  std::vector<bool> pinned(static_cast<std::size_t>(inst.size()) + 1, false);
  for (int a : cells.front()) pinned[a] = true;
  for (std::size_t k = 1; k < cells.size(); ++k) {
    State s = run.states.back();
    for (int a : cells[k]) {
      pinned[a] = true;
      s[a] = kZero;
    }
    run.states.push_back(s);
    settle(inst, run, pinned);
  }
  return run;
}

inline std::vector<int> members(const State& s, int which) {
  std::vector<int> out;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] == which) out.push_back(static_cast<int>(i));
  }
  return out;
}

inline std::size_t covered(const mac::Instance& inst, const State& s) {
  std::size_t n = 0;
  for (const auto& e : inst.edges()) n += (s[e.u] == kZero || s[e.v] == kZero) ? 1 : 0;
  return n;
}

inline std::size_t objective(const mac::Instance& inst, const std::vector<int>& control) {
  return covered(inst, simulate(inst, control).states.back());
}

// Neighbors of v that play One after one step from "S at Zero, rest Undecided".
inline int influence(const mac::Instance& inst, int v, const std::vector<int>& zero_set) {
  State s(static_cast<std::size_t>(inst.size()) + 1, kUndecided);
  std::vector<bool> pinned(s.size(), false);
  for (int a : zero_set) {
    s[a] = kZero;
    pinned[a] = true;
  }
  const State next = one_step(inst, s, pinned);
  const auto adj = adjacency(inst);
  int count = 0;
  for (int j : adj[v]) count += next[j] == kOne ? 1 : 0;
  return count;
}

// Late-addition process: staged run, then tail joins the zero-set, then S0
// agents join while 1/d + u(f_ref) - u(f_now) > c with u(f) = 1/f, u(0) = 1.
inline std::set<int> selection_rule(const mac::Instance& inst, const std::vector<std::vector<int>>& cells,
                                    const std::vector<int>& tail) {
  const Run staged = simulate_staged(inst, cells);
  const std::vector<int> reference = members(staged.states.back(), kZero);
  std::set<int> zeros(reference.begin(), reference.end());
  zeros.insert(tail.begin(), tail.end());
  const auto adj = adjacency(inst);
  const auto u = [](int f) { return f == 0 ? 1.0 : 1.0 / f; };
  while (true) {
    const std::vector<int> current(zeros.begin(), zeros.end());
    std::vector<int> add;
    for (int v = 1; v <= inst.n0(); ++v) {
      if (zeros.count(v) || adj[v].empty()) continue;
      const double d = static_cast<double>(adj[v].size());
      const double q = 1.0 / d + u(influence(inst, v, reference)) - u(influence(inst, v, current));
      if (q > inst.constants()[v - 1]) add.push_back(v);
    }
    if (add.empty()) return zeros;
    zeros.insert(add.begin(), add.end());
  }
}

}  // namespace oracle
