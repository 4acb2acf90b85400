#include "mac/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "mac/dynamics.hpp"
#include "mac/influence.hpp"
#include "mac/parallel.hpp"
#include "mac/rng.hpp"

namespace mac {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return m;
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  return m;
}

int min_degree(const Instance& inst) {
  int d = inst.size() > 0 ? inst.degree(1) : 0;
  for (AgentId a = 2; a <= inst.size(); ++a) d = std::min(d, inst.degree(a));
  return d;
}

void require_s0(const Instance& inst, std::span<const AgentId> set, const char* what) {
  for (AgentId a : set) {
    if (!inst.in_s0(a)) throw std::invalid_argument(std::string(what) + ": agent " + std::to_string(a) + " is not in S0");
  }
}

Instance well_behaved_draw(const Instance& topology, std::uint64_t seed, std::uint64_t draw) {
  Rng rng(derive_seed(seed, draw));
  return topology.with_constants(draw_constants(topology, CMode::WellBehaved, rng));
}

std::vector<AgentId> set_union(std::span<const AgentId> a, std::span<const AgentId> b) {
  std::vector<AgentId> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<AgentId> set_intersection(std::span<const AgentId> a, std::span<const AgentId> b) {
  std::vector<AgentId> sa(a.begin(), a.end());
  std::vector<AgentId> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::vector<AgentId> out;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t inactive_edges(const Instance& inst, const Profile& profile) {
  std::size_t count = 0;
  for (const auto& e : inst.edges()) {
    if (profile.action(e.u) == Action::Zero || profile.action(e.v) == Action::Zero) ++count;
  }
  return count;
}

ordered_json header(const std::string& check, std::uint64_t seed, const std::string& topology) {
  ordered_json j;
  j["check"] = check;
  j["seed"] = seed;
  j["topology"] = topology;
  return j;
}

}  // namespace

std::string describe_topology(const Instance& topology) {
  return "bipartite:" + std::to_string(topology.n0()) + "x" + std::to_string(topology.n1()) +
         ":m=" + std::to_string(topology.edge_count());
}

MarginalPair influence_marginals(const Instance& inst, AgentId v, AgentId u, std::span<const AgentId> small_set,
                                 std::span<const AgentId> large_set) {
  const auto n = static_cast<std::size_t>(inst.size());
  std::vector<std::uint8_t> small(n, 0);
  std::vector<std::uint8_t> large(n, 0);
  for (AgentId a : small_set) small[Instance::index(a)] = 1;
  for (AgentId a : large_set) large[Instance::index(a)] = 1;
  MarginalPair m;
  const int f_small = influence_closed_form(inst, v, small);
  const int f_large = influence_closed_form(inst, v, large);
  small[Instance::index(u)] = 1;
  large[Instance::index(u)] = 1;
  m.small_set_gain = influence_closed_form(inst, v, small) - f_small;
  m.large_set_gain = influence_closed_form(inst, v, large) - f_large;
  return m;
}

double violation_range_bound(int ceil_sum_large, int degree) {
  if (ceil_sum_large < 2 || degree < 2) return 0.0;
  const double s = ceil_sum_large;
  const double d = degree;
  return (1.0 / (s - 1.0) - 1.0 / s) * d / (d - 1.0);
}

ViolationReport check_influence_submodularity(const Instance& topology, std::uint64_t trials, std::uint64_t seed,
                                              unsigned jobs) {
  if (trials < 1) throw std::invalid_argument("check_influence_submodularity: trials must be >= 1");
  if (topology.n0() < 2) throw std::invalid_argument("check_influence_submodularity: S0 needs two agents");

  struct Trial {
    bool violated = false;
    double union_bound = 0.0;
    double max_bound = 0.0;
    int min_degree = 0;
    bool tested = false;
  };
  std::vector<Trial> results(trials);
  const auto n0 = static_cast<std::uint64_t>(topology.n0());

  parallel_for(trials, jobs, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    const Instance inst = topology.with_constants(draw_constants(topology, CMode::WellBehaved, rng));
    const auto v = static_cast<AgentId>(rng.below(n0) + 1);
    auto u = static_cast<AgentId>(rng.below(n0 - 1) + 1);
    if (u >= v) ++u;

    std::vector<AgentId> large;
    std::vector<AgentId> small;
    std::vector<std::uint8_t> in_large(static_cast<std::size_t>(inst.size()), 0);
    for (AgentId a = 1; a <= inst.n0(); ++a) {
      if (a == u || a == v || !rng.bernoulli(0.5)) continue;
      large.push_back(a);
      in_large[Instance::index(a)] = 1;
      if (rng.bernoulli(0.5)) small.push_back(a);
    }

    Trial& r = results[t];
    r.violated = influence_marginals(inst, v, u, small, large).violated();
    const auto nu = inst.neighbors(u);
    for (AgentId w : inst.neighbors(v)) {
      if (!std::binary_search(nu.begin(), nu.end(), w)) continue;
      int ceil_large = 0;
      for (AgentId i : inst.neighbors(w)) ceil_large += in_large[Instance::index(i)] ? 0 : 1;
      const double b = violation_range_bound(ceil_large, inst.degree(w));
      r.union_bound += b;
      r.max_bound = std::max(r.max_bound, b);
      r.min_degree = r.tested ? std::min(r.min_degree, inst.degree(w)) : inst.degree(w);
      r.tested = true;
    }
    r.union_bound = std::min(1.0, r.union_bound);
  });

  ViolationReport report;
  report.trials = trials;
  report.seed = seed;
  report.topology = describe_topology(topology);
  bool any_tested = false;
  double bound_sum = 0.0;
  for (const auto& r : results) {
    report.violations += r.violated ? 1 : 0;
    bound_sum += r.union_bound;
    report.analytic_bound = std::max(report.analytic_bound, r.max_bound);
    if (r.tested) {
      report.min_degree = any_tested ? std::min(report.min_degree, r.min_degree) : r.min_degree;
      any_tested = true;
    }
  }
  report.rate = static_cast<double>(report.violations) / static_cast<double>(trials);
  report.expected_bound = bound_sum / static_cast<double>(trials);
  report.pass = report.rate <= report.expected_bound;
  return report;
}

BoundReport check_expected_submodularity(const Instance& topology, std::span<const AgentId> a,
                                         std::span<const AgentId> b, std::uint64_t draws, std::uint64_t seed,
                                         unsigned jobs) {
  require_s0(topology, a, "check_expected_submodularity");
  require_s0(topology, b, "check_expected_submodularity");
  if (draws < 30) throw std::invalid_argument("check_expected_submodularity: need at least 30 draws");

  const auto both = set_union(a, b);
  const auto common = set_intersection(a, b);
  std::vector<double> lhs(draws);
  std::vector<double> rhs(draws);
  parallel_for(draws, jobs, [&](std::size_t i) {
    const Instance inst = well_behaved_draw(topology, seed, i);
    lhs[i] = static_cast<double>(objective(inst, a) + objective(inst, b));
    rhs[i] = static_cast<double>(objective(inst, both) + objective(inst, common));
  });

  BoundReport report;
  report.check = "expected-submodularity";
  const auto l = moments(lhs);
  const auto r = moments(rhs);
  report.lhs_mean = l.mean;
  report.lhs_se = l.se;
  report.rhs_mean = r.mean;
  report.rhs_se = r.se;
  report.draws = draws;
  report.pass = report.lhs_mean + 2.0 * (report.lhs_se + report.rhs_se) >= report.rhs_mean;
  report.dense = min_degree(topology) >= kDenseMinDegree;
  report.seed = seed;
  report.topology = describe_topology(topology);
  return report;
}

BoundReport check_greedy_bound(const Instance& topology, int budget, std::uint64_t draws, std::uint64_t seed,
                               const SolverOptions& options) {
  if (budget < 1) throw BudgetError("check_greedy_bound: budget must be >= 1");
  if (budget > topology.n0()) {
    throw BudgetError("budget " + std::to_string(budget) + " exceeds candidate pool of " +
                      std::to_string(topology.n0()));
  }
  const auto subsets = binomial(static_cast<std::uint64_t>(topology.n0()), static_cast<std::uint64_t>(budget));
  if (subsets > options.enumeration_cap) throw EnumerationCapExceeded(subsets, options.enumeration_cap);
  if (draws < 1) throw std::invalid_argument("check_greedy_bound: draws must be >= 1");

  const double inv_e = std::exp(-1.0);
  const double opt_weight = 1.0 - inv_e;
  const double empty_weight = inv_e * (1.0 - 1.0 / budget);

  std::vector<double> lhs(draws);
  std::vector<double> rhs(draws);
  std::vector<double> opt(draws);
  std::vector<double> empty(draws);
  SolverOptions inner = options;
  inner.jobs = 1;
  parallel_for(draws, options.jobs, [&](std::size_t i) {
    const Instance inst = well_behaved_draw(topology, seed, i);
    const auto g = greedy(inst, budget, SideRestriction::S0Only, inner);
    const auto best = brute_force(inst, budget, SideRestriction::S0Only, inner);
    lhs[i] = static_cast<double>(g.final_value);
    opt[i] = static_cast<double>(best.best_value);
    empty[i] = static_cast<double>(g.empty_value);
    rhs[i] = opt_weight * opt[i] + empty_weight * empty[i];
  });

  BoundReport report;
  report.check = "greedy-bound";
  const auto l = moments(lhs);
  const auto r = moments(rhs);
  report.lhs_mean = l.mean;
  report.lhs_se = l.se;
  report.rhs_mean = r.mean;
  report.rhs_se = r.se;
  report.optimum_mean = moments(opt).mean;
  report.empty_mean = moments(empty).mean;
  report.draws = draws;
  report.pass = report.lhs_mean + 2.0 * (report.lhs_se + report.rhs_se) >= report.rhs_mean;
  report.dense = min_degree(topology) >= kDenseMinDegree;
  report.seed = seed;
  report.topology = describe_topology(topology);
  return report;
}

DistributionReport check_selection_rule_distribution(const Instance& topology,
                                                     std::span<const std::vector<AgentId>> partition,
                                                     std::span<const AgentId> tail, std::uint64_t draws,
                                                     std::uint64_t seed, unsigned jobs, double tv_tolerance) {
  for (const auto& cell : partition) require_s0(topology, cell, "check_selection_rule_distribution");
  require_s0(topology, tail, "check_selection_rule_distribution");
  if (draws < 1) throw std::invalid_argument("check_selection_rule_distribution: draws must be >= 1");

  std::vector<AgentId> everything(tail.begin(), tail.end());
  for (const auto& cell : partition) everything.insert(everything.end(), cell.begin(), cell.end());

  const bool by_set = topology.n0() <= 10;
  auto key_of = [&](const Instance& inst, const Profile& p) -> std::uint64_t {
    if (!by_set) return inactive_edges(inst, p);
    std::uint64_t mask = 0;
    for (AgentId a : p.zeros()) mask |= std::uint64_t{1} << (a - 1);
    return mask;
  };

  std::vector<std::uint64_t> key_dyn(draws);
  std::vector<std::uint64_t> key_rule(draws);
  std::vector<double> f_dyn(draws);
  std::vector<double> f_rule(draws);
  parallel_for(draws, jobs, [&](std::size_t i) {
    const Instance inst = well_behaved_draw(topology, seed, i);
    const Trace direct = run(inst, everything);
    const Trace rule = run_selection_rule(inst, partition, tail);
    key_dyn[i] = key_of(inst, direct.final_profile());
    key_rule[i] = key_of(inst, rule.final_profile());
    f_dyn[i] = static_cast<double>(inactive_edges(inst, direct.final_profile()));
    f_rule[i] = static_cast<double>(inactive_edges(inst, rule.final_profile()));
  });

  std::map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> histogram;
  for (std::size_t i = 0; i < draws; ++i) {
    ++histogram[key_dyn[i]].first;
    ++histogram[key_rule[i]].second;
  }
  DistributionReport report;
  report.draws = draws;
  report.support = by_set ? "zero-set" : "f-value";
  report.outcomes = histogram.size();
  const auto total = static_cast<double>(draws);
  for (const auto& [key, counts] : histogram) {
    report.tv_distance += std::abs(static_cast<double>(counts.first) - static_cast<double>(counts.second)) / total;
  }
  report.tv_distance *= 0.5;
  const auto d = moments(f_dyn);
  const auto r = moments(f_rule);
  report.mean_f_dynamics = d.mean;
  report.mean_f_rule = r.mean;
  report.se_f_dynamics = d.se;
  report.se_f_rule = r.se;
  const double denom = std::sqrt(d.se * d.se + r.se * r.se);
  report.z_score = denom > 0.0 ? (d.mean - r.mean) / denom : 0.0;
  report.tv_tolerance = tv_tolerance;
  report.pass = report.tv_distance <= tv_tolerance;
  report.seed = seed;
  report.topology = describe_topology(topology);
  return report;
}

std::string to_json(const ViolationReport& r) {
  auto j = header("influence-submodularity", r.seed, r.topology);
  j["trials"] = r.trials;
  j["violations"] = r.violations;
  j["rate"] = r.rate;
  j["analytic_bound"] = r.analytic_bound;
  j["expected_bound"] = r.expected_bound;
  j["min_degree"] = r.min_degree;
  j["pass"] = r.pass;
  return j.dump();
}

std::string to_json(const BoundReport& r) {
  auto j = header(r.check, r.seed, r.topology);
  j["draws"] = r.draws;
  j["lhs_mean"] = r.lhs_mean;
  j["lhs_se"] = r.lhs_se;
  j["rhs_mean"] = r.rhs_mean;
  j["rhs_se"] = r.rhs_se;
  if (r.check == "greedy-bound") {
    j["optimum_mean"] = r.optimum_mean;
    j["empty_mean"] = r.empty_mean;
  }
  j["dense"] = r.dense;
  if (!r.dense) j["note"] = "topology below the density label; result is informative only";
  j["pass"] = r.pass;
  return j.dump();
}

std::string to_json(const DistributionReport& r) {
  auto j = header("selection-rule", r.seed, r.topology);
  j["draws"] = r.draws;
  j["support"] = r.support;
  j["outcomes"] = r.outcomes;
  j["tv_distance"] = r.tv_distance;
  j["mean_f_dynamics"] = r.mean_f_dynamics;
  j["mean_f_rule"] = r.mean_f_rule;
  j["se_f_dynamics"] = r.se_f_dynamics;
  j["se_f_rule"] = r.se_f_rule;
  j["z_score"] = r.z_score;
  j["tv_tolerance"] = r.tv_tolerance;
  j["pass"] = r.pass;
  return j.dump();
}

}  // namespace mac
