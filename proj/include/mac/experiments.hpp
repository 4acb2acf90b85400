#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mac/instance.hpp"
#include "mac/solver.hpp"

namespace mac {

enum class Method { Brute, Greedy };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

struct SweepConfig {
  /// Total agent counts; each is split n0 = n1 = n/2.
  std::vector<int> sizes;
  std::vector<double> probs;
  int samples_per_cell = 40;
  CMode c_mode = CMode::Uniform01;
  SideRestriction side = SideRestriction::AnySide;
  std::uint64_t master_seed = 1;
  std::vector<Method> methods{Method::Greedy, Method::Brute};
  std::uint64_t enumeration_cap = 5'000'000;
  /// When false, runtime_ms is written as 0 so CSVs compare byte for byte.
  bool record_timing = true;
};

/// Budget for a network of n agents: ceil(n / 10).
int sweep_budget(int n);

/// Seed of sample `sample` in the cell (n, probs[prob_index]).
std::uint64_t cell_seed(std::uint64_t master, int n, std::size_t prob_index, int sample);

struct ExperimentRecord {
  int n = 0;
  double p = 0.0;
  int sample = 0;
  std::uint64_t seed = 0;
  int budget = 0;
  Method method = Method::Greedy;
  std::size_t f_value = 0;
  std::size_t total_edges = 0;
  /// f_value / total_edges, or 0 when the instance has no edges.
  double inactivation_ratio = 0.0;
  double runtime_ms = 0.0;
  /// Dynamics steps to convergence under the chosen control set.
  std::size_t converge_steps = 0;

  bool degenerate() const noexcept { return total_edges == 0; }
};

/// A (cell, method) pair that was not run because brute force would exceed
/// the enumeration cap.
struct SkippedCell {
  int n = 0;
  double p = 0.0;
  Method method = Method::Brute;
  std::string reason;
};

struct SweepResult {
  /// Sorted by (n, p, sample, method).
  std::vector<ExperimentRecord> records;
  std::vector<SkippedCell> skipped;
};

/// Validates sizes (even, >= 2), probabilities, sample count and methods.
void validate(const SweepConfig& config);

/// One record per (cell, sample, method). Greedy and brute force share the
/// instance of each sample. `log` receives one line per finished cell.
SweepResult sweep(const SweepConfig& config, unsigned jobs = 1,
                  const std::function<void(const std::string&)>& log = {});

inline constexpr std::string_view kCsvHeader = "n,p,sample,seed,budget,method,f,edges,ratio,runtime_ms,steps";

/// CSV text; refuses an empty record list.
std::string format_csv(std::span<const ExperimentRecord> records);
void write_csv(std::span<const ExperimentRecord> records, const std::filesystem::path& path);

/// Structured-object manifest holding the full config and master seed.
std::string format_manifest(const SweepConfig& config, const SweepResult& result);
void write_manifest(const SweepConfig& config, const SweepResult& result, const std::filesystem::path& path);

/// Locale-independent shortest round-trip formatting.
std::string format_double(double x);

}  // namespace mac
