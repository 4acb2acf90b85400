#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mac {

class Rng;

/// Agents are numbered 1..n0 for S0 and n0+1..n0+n1 for S1.
using AgentId = int;

struct Edge {
  AgentId u;  // endpoint in S0
  AgentId v;  // endpoint in S1
  auto operator<=>(const Edge&) const = default;
};

enum class Side { S0, S1 };

/// How learning constants are sampled.
///  - Uniform01: c uniform on [0, 1).
///  - WellBehaved: c uniform on [1/d, 1); agents with no neighbors fall back
///    to Uniform01. Degree-1 agents have no admissible constant, so drawing
///    for a topology that contains one raises a Range error.
enum class CMode { Uniform01, WellBehaved };

std::string_view to_string(CMode mode);
CMode parse_cmode(std::string_view text);

enum class InstanceErrorKind {
  Syntax,       // not parseable as a structured object
  Schema,       // missing field or wrong type
  Bipartition,  // edge does not cross S0/S1 (includes self-loops)
  UnknownAgent, // edge endpoint outside 1..n0+n1
  Range,        // learning constant outside [0, 1), or bad part size
  Duplicate,    // same unordered edge listed twice
};

std::string_view to_string(InstanceErrorKind kind);

class InstanceError : public std::runtime_error {
 public:
  InstanceError(InstanceErrorKind kind, std::string location, const std::string& what);

  InstanceErrorKind kind() const noexcept { return kind_; }
  const std::string& location() const noexcept { return location_; }

 private:
  InstanceErrorKind kind_;
  std::string location_;
};

// A bipartite anti-coordination game: topology plus one learning constant per
// agent. Immutable once built; the constructor enforces every invariant.
class Instance {
 public:
  /// Edges may be given in any order and with either endpoint first; they are
  /// stored normalized (S0 endpoint first) and sorted.
  Instance(int n0, int n1, std::vector<Edge> edges, std::vector<double> constants);

  int n0() const noexcept { return n0_; }
  int n1() const noexcept { return n1_; }
  int size() const noexcept { return n0_ + n1_; }

  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const double> constants() const noexcept { return c_; }

  bool contains(AgentId a) const noexcept { return a >= 1 && a <= size(); }
  Side side(AgentId a) const noexcept { return a <= n0_ ? Side::S0 : Side::S1; }
  bool in_s0(AgentId a) const noexcept { return a >= 1 && a <= n0_; }

  double constant(AgentId a) const { return c_[index(a)]; }
  int degree(AgentId a) const {
    return static_cast<int>(offsets_[index(a) + 1] - offsets_[index(a)]);
  }
  std::span<const AgentId> neighbors(AgentId a) const {
    return {adjacency_.data() + offsets_[index(a)], adjacency_.data() + offsets_[index(a) + 1]};
  }

  /// Same topology, new learning constants (validated).
  Instance with_constants(std::vector<double> constants) const;

  bool operator==(const Instance& other) const {
    return n0_ == other.n0_ && n1_ == other.n1_ && edges_ == other.edges_ && c_ == other.c_;
  }

  static std::size_t index(AgentId a) noexcept { return static_cast<std::size_t>(a - 1); }

 private:
  int n0_;
  int n1_;
  std::vector<Edge> edges_;
  std::vector<double> c_;
  std::vector<std::size_t> offsets_;
  std::vector<AgentId> adjacency_;
};

/// Bipartite Erdos-Renyi graph: each of the n0*n1 cross pairs is present
/// independently with probability p. Edge draws come first (pairs in
/// row-major order), then one constant per agent in id order.
Instance generate_random(int n0, int n1, double p, CMode mode, std::uint64_t seed);

/// Fresh learning constants for the topology of `topology`.
std::vector<double> draw_constants(const Instance& topology, CMode mode, Rng& rng);

/// c_i >= 1/d_i for every agent with at least one neighbor.
bool is_well_behaved(const Instance& inst);

/// The 4x4 reference game with constants
/// [0.41, 0.55, 0.57, 0.86, 0.92, 0.60, 0.34, 0.39].
Instance fig1();

/// K_{a,b} with every learning constant equal to `c`.
Instance complete_bipartite(int a, int b, double c = 0.0);

Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);

/// File helpers. I/O failures raise std::runtime_error naming the path.
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

}  // namespace mac
