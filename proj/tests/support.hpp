#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mac/instance.hpp"
#include "mac/rng.hpp"

namespace support {

// Leaves admit no well-behaved constant and isolated agents always play One,
// so theory-mode fixtures need every degree >= 2.
inline bool min_degree_two(const mac::Instance& inst) {
  for (mac::AgentId a = 1; a <= inst.size(); ++a) {
    if (inst.degree(a) < 2) return false;
  }
  return true;
}

// Random n0 x n1 topology with edge probability p and every degree >= 2.
inline mac::Instance theory_topology(mac::Rng& rng, int n0, int n1, double p) {
  while (true) {
    mac::Instance topo = mac::generate_random(n0, n1, p, mac::CMode::Uniform01, rng.next());
    if (min_degree_two(topo)) return topo;
  }
}

// Small random instance: sides in [1, max_side], p in [0.1, 0.9]. Well-behaved
// draws use sides >= 2 and redraw until every degree is >= 2.
inline mac::Instance random_instance(mac::Rng& rng, mac::CMode mode, int max_side = 8) {
  while (true) {
    const int lo = mode == mac::CMode::Uniform01 ? 1 : 2;
    const auto span = static_cast<std::uint64_t>(max_side - lo + 1);
    const int n0 = static_cast<int>(rng.below(span)) + lo;
    const int n1 = static_cast<int>(rng.below(span)) + lo;
    const double p = rng.uniform(0.1, 0.9);
    const mac::Instance topo = mac::generate_random(n0, n1, p, mac::CMode::Uniform01, rng.next());
    if (mode == mac::CMode::Uniform01) return topo;
    if (min_degree_two(topo)) return topo.with_constants(mac::draw_constants(topo, mode, rng));
  }
}

// Each agent in [lo, hi] kept with probability q.
inline std::vector<int> random_subset(mac::Rng& rng, int lo, int hi, double q) {
  std::vector<int> out;
  for (int a = lo; a <= hi; ++a) {
    if (rng.bernoulli(q)) out.push_back(a);
  }
  return out;
}

inline std::vector<std::vector<int>> random_partition(mac::Rng& rng, const std::vector<int>& set) {
  if (set.empty()) return {};
  const auto cells = rng.below(set.size()) + 1;
  std::vector<std::vector<int>> out(cells);
  std::vector<int> shuffled = set;
  for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
  for (std::size_t i = 0; i < shuffled.size(); ++i) out[i < cells ? i : rng.below(cells)].push_back(shuffled[i]);
  return out;
}

inline std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mac_test_" + name);
}

}  // namespace support
