#include "mac/solver.hpp"

#include <limits>
#include <numeric>
#include <optional>

#include "mac/cascade.hpp"
#include "mac/parallel.hpp"

namespace mac {

namespace {

// State after adding `agent` to the control set behind `base`.
Cascade extend(const Cascade& base, const Instance& inst, std::span<const AgentId> control, AgentId agent) {
  Cascade next = base;
  if (next.inject(agent)) return next;
  std::vector<AgentId> all(control.begin(), control.end());
  all.push_back(agent);
  return Cascade(inst, all);
}

void check_budget(int budget, std::size_t pool) {
  if (budget < 0) throw BudgetError("budget must be nonnegative");
  if (static_cast<std::size_t>(budget) > pool) {
    throw BudgetError("budget " + std::to_string(budget) + " exceeds candidate pool of " + std::to_string(pool));
  }
}

struct BestSet {
  std::size_t value = 0;
  std::vector<AgentId> set;
  std::uint64_t evaluated = 0;
  bool found = false;

  void offer(std::size_t v, const std::vector<AgentId>& s) {
    ++evaluated;
    if (!found || v > value) {
      found = true;
      value = v;
      set = s;
    }
  }
};

class SubsetSearch {
 public:
  SubsetSearch(const Instance& inst, std::span<const AgentId> pool, int budget, const Cascade& root)
      : inst_(inst), pool_(pool), budget_(budget), levels_(static_cast<std::size_t>(budget) + 1, root) {}

  // Every subset whose smallest pool index is `first`, in lexicographic order.
  BestSet run_from(std::size_t first) {
    BestSet best;
    chosen_.clear();
    descend(0, first, best);
    return best;
  }

 private:
  void descend(std::size_t depth, std::size_t k, BestSet& best) {
    const AgentId agent = pool_[k];
    levels_[depth + 1] = levels_[depth];
    if (!levels_[depth + 1].inject(agent)) {
      std::vector<AgentId> all = chosen_;
      all.push_back(agent);
      levels_[depth + 1] = Cascade(inst_, all);
    }
    chosen_.push_back(agent);
    const auto size = depth + 1;
    if (size == static_cast<std::size_t>(budget_)) {
      best.offer(levels_[size].inactive_edges(), chosen_);
    } else {
      const std::size_t remaining = static_cast<std::size_t>(budget_) - size;
      for (std::size_t next = k + 1; next + remaining <= pool_.size(); ++next) descend(size, next, best);
    }
    chosen_.pop_back();
  }

  const Instance& inst_;
  std::span<const AgentId> pool_;
  int budget_;
  std::vector<Cascade> levels_;
  std::vector<AgentId> chosen_;
};

}  // namespace

std::string_view to_string(SideRestriction side) {
  return side == SideRestriction::S0Only ? "s0" : "any";
}

SideRestriction parse_side(std::string_view text) {
  if (text == "s0" || text == "S0") return SideRestriction::S0Only;
  if (text == "any" || text == "all") return SideRestriction::AnySide;
  throw std::invalid_argument("unknown side '" + std::string(text) + "' (expected s0 or any)");
}

EnumerationCapExceeded::EnumerationCapExceeded(std::uint64_t subsets, std::uint64_t cap)
    : std::runtime_error("enumeration cap exceeded: " + std::to_string(subsets) + " subsets > cap " +
                         std::to_string(cap)),
      subsets_(subsets),
      cap_(cap) {}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) is divisible by i; cancel first to delay overflow.
    const std::uint64_t g = std::gcd(result, i);
    const std::uint64_t factor = (n - k + i) / (i / g);
    if (__builtin_mul_overflow(result / g, factor, &result)) return std::numeric_limits<std::uint64_t>::max();
  }
  return result;
}

std::size_t objective(const Instance& inst, std::span<const AgentId> control) {
  return Cascade(inst, control).inactive_edges();
}

double inactivation_ratio(const Instance& inst, std::span<const AgentId> control) {
  if (inst.edge_count() == 0) throw std::domain_error("inactivation ratio undefined: instance has no edges");
  return static_cast<double>(objective(inst, control)) / static_cast<double>(inst.edge_count());
}

std::vector<AgentId> candidate_pool(const Instance& inst, SideRestriction side) {
  const int last = side == SideRestriction::S0Only ? inst.n0() : inst.size();
  std::vector<AgentId> pool;
  for (AgentId a = 1; a <= last; ++a) pool.push_back(a);
  return pool;
}

GreedyResult greedy(const Instance& inst, int budget, SideRestriction side, const SolverOptions& options) {
  const auto pool = candidate_pool(inst, side);
  check_budget(budget, pool.size());

  GreedyResult result;
  Cascade state(inst, {});
  result.empty_value = state.inactive_edges();
  std::vector<std::uint8_t> taken(pool.size(), 0);
  std::vector<std::size_t> values(pool.size());

  for (int j = 0; j < budget; ++j) {
    parallel_for(pool.size(), options.jobs, [&](std::size_t k) {
      if (!taken[k]) values[k] = extend(state, inst, result.picks, pool[k]).inactive_edges();
    });
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (!taken[k] && (!best || values[k] > values[*best])) best = k;
    }
    const AgentId pick = pool[*best];
    state = extend(state, inst, result.picks, pick);
    taken[*best] = 1;
    const std::size_t previous = result.values.empty() ? result.empty_value : result.values.back();
    result.picks.push_back(pick);
    result.values.push_back(values[*best]);
    result.gains.push_back(static_cast<std::int64_t>(values[*best]) - static_cast<std::int64_t>(previous));
  }
  result.final_value = result.values.empty() ? result.empty_value : result.values.back();
  return result;
}

OptResult brute_force(const Instance& inst, int budget, SideRestriction side, const SolverOptions& options) {
  const auto pool = candidate_pool(inst, side);
  check_budget(budget, pool.size());
  const std::uint64_t subsets = binomial(pool.size(), static_cast<std::uint64_t>(budget));
  if (subsets > options.enumeration_cap) throw EnumerationCapExceeded(subsets, options.enumeration_cap);

  const Cascade root(inst, {});
  OptResult result;
  if (budget == 0) {
    result.best_value = root.inactive_edges();
    result.subsets_evaluated = 1;
    return result;
  }

  const std::size_t tasks = pool.size() - static_cast<std::size_t>(budget) + 1;
  std::vector<BestSet> partial(tasks);
  parallel_for(tasks, options.jobs, [&](std::size_t first) {
    SubsetSearch search(inst, pool, budget, root);
    partial[first] = search.run_from(first);
  });

  BestSet best;
  for (const auto& p : partial) {
    if (p.found && (!best.found || p.value > best.value)) {
      best.found = true;
      best.value = p.value;
      best.set = p.set;
    }
    best.evaluated += p.evaluated;
  }
  result.best_set = std::move(best.set);
  result.best_value = best.value;
  result.subsets_evaluated = best.evaluated;
  return result;
}

}  // namespace mac
