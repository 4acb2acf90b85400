#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mac/experiments.hpp"
#include "mac/instance.hpp"
#include "mac/solver.hpp"

namespace mac::cli {

/// Seed used when neither --seed nor MAC_SEED is given.
inline constexpr std::uint64_t kDefaultSeed = 20211;
inline constexpr const char* kSeedEnv = "MAC_SEED";

/// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kRefused = 1;  // caps, infeasible budgets, failed verification
inline constexpr int kIoError = 2;  // usage, parse and file errors

/// Bad command line; carries the offending flag when there is one.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenerateCmd {
  int n0 = 0;
  int n1 = 0;
  double p = 0.0;
  CMode c_mode = CMode::Uniform01;
  std::uint64_t seed = kDefaultSeed;
  std::string out;  // empty: standard output
};

struct RunCmd {
  std::string instance;  // path or "fig1"
  std::vector<AgentId> control;
  /// Non-empty: staged run over these cells (control is ignored).
  std::vector<std::vector<AgentId>> stages;
  bool trace = false;
  std::string out;
};

struct SolveCmd {
  std::string instance;
  int budget = 0;
  Method method = Method::Greedy;
  SideRestriction side = SideRestriction::S0Only;
  unsigned jobs = 1;
  std::uint64_t cap = 5'000'000;
  std::string out;
};

enum class VerifyTarget { Submodularity, Expectation, SelectionRule, GreedyBound };

struct VerifyCmd {
  VerifyTarget target = VerifyTarget::Submodularity;
  /// "fig1", "complete:AxB", "random:AxB:p" (seeded by --seed) or a path.
  std::string graph;
  std::uint64_t trials = 0;  // trials or draws, depending on target
  std::uint64_t seed = kDefaultSeed;
  std::vector<AgentId> set_a;
  std::vector<AgentId> set_b;
  std::vector<std::vector<AgentId>> partition;
  std::vector<AgentId> tail;
  int budget = 1;
  unsigned jobs = 1;
  std::uint64_t cap = 5'000'000;
  std::string out;
};

struct SweepCmd {
  SweepConfig config;
  std::string out;
  std::string manifest;  // default: <out>.manifest.json
  unsigned jobs = 1;
};

/// --help was given; what() holds the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Command = std::variant<GenerateCmd, RunCmd, SolveCmd, VerifyCmd, SweepCmd>;

/// argv without the program name. Throws UsageError or HelpRequested.
Command parse_args(const std::vector<std::string>& args);

/// Executes a parsed command. Results go to the command's output path or
/// `out`; failures print one `error: ...` line to `err`.
int dispatch(const Command& cmd, std::ostream& out, std::ostream& err);

/// parse_args + dispatch with usage errors mapped to kIoError.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "1,2,3"; empty string gives an empty list.
std::vector<AgentId> parse_id_list(const std::string& text);
/// Parses "lo:hi:step" or a comma list.
std::vector<int> parse_sizes(const std::string& text);

/// Builds the topology named by a --graph/--instance argument.
Instance resolve_graph(const std::string& desc, std::uint64_t seed);

}  // namespace mac::cli
