#include "mac/instance.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "mac/rng.hpp"

namespace mac {

namespace {

using json = nlohmann::json;

std::string at(std::string_view field, std::size_t i) {
  return std::string(field) + "[" + std::to_string(i) + "]";
}

}  // namespace

std::string_view to_string(CMode mode) {
  return mode == CMode::Uniform01 ? "uniform" : "well-behaved";
}

CMode parse_cmode(std::string_view text) {
  if (text == "uniform" || text == "uniform01") return CMode::Uniform01;
  if (text == "well-behaved" || text == "wellbehaved" || text == "wb") return CMode::WellBehaved;
  throw std::invalid_argument("unknown c-mode '" + std::string(text) + "'");
}

std::string_view to_string(InstanceErrorKind kind) {
  switch (kind) {
    case InstanceErrorKind::Syntax: return "syntax";
    case InstanceErrorKind::Schema: return "schema";
    case InstanceErrorKind::Bipartition: return "bipartition";
    case InstanceErrorKind::UnknownAgent: return "unknown-agent";
    case InstanceErrorKind::Range: return "range";
    case InstanceErrorKind::Duplicate: return "duplicate";
  }
  return "unknown";
}

InstanceError::InstanceError(InstanceErrorKind kind, std::string location, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + " error at " + location + ": " + what),
      kind_(kind),
      location_(std::move(location)) {}

Instance::Instance(int n0, int n1, std::vector<Edge> edges, std::vector<double> constants)
    : n0_(n0), n1_(n1), c_(std::move(constants)) {
  if (n0 < 0 || n1 < 0) throw InstanceError(InstanceErrorKind::Range, "n0/n1", "part sizes must be nonnegative");
  const int n = n0 + n1;
  if (c_.size() != static_cast<std::size_t>(n)) {
    throw InstanceError(InstanceErrorKind::Schema, "c",
                        "expected " + std::to_string(n) + " learning constants, got " +
                            std::to_string(c_.size()));
  }
  for (std::size_t i = 0; i < c_.size(); ++i) {
    // Written so that NaN fails too.
    if (!(c_[i] >= 0.0 && c_[i] < 1.0)) {
      throw InstanceError(InstanceErrorKind::Range, at("c", i), "learning constant must lie in [0, 1)");
    }
  }

  std::vector<std::pair<Edge, std::size_t>> normalized;
  normalized.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [a, b] = edges[i];
    if (a < 1 || a > n || b < 1 || b > n) {
      throw InstanceError(InstanceErrorKind::UnknownAgent, at("edges", i),
                          "endpoint outside 1.." + std::to_string(n));
    }
    if (a > b) std::swap(a, b);
    if (!(a <= n0 && b > n0)) {
      throw InstanceError(InstanceErrorKind::Bipartition, at("edges", i),
                          "edge (" + std::to_string(a) + "," + std::to_string(b) +
                              ") does not cross the bipartition");
    }
    normalized.push_back({Edge{a, b}, i});
  }
  std::sort(normalized.begin(), normalized.end());
  for (std::size_t i = 1; i < normalized.size(); ++i) {
    if (normalized[i].first == normalized[i - 1].first) {
      const auto later = std::max(normalized[i].second, normalized[i - 1].second);
      throw InstanceError(InstanceErrorKind::Duplicate, at("edges", later),
                          "edge (" + std::to_string(normalized[i].first.u) + "," +
                              std::to_string(normalized[i].first.v) + ") listed twice");
    }
  }
  edges_.reserve(normalized.size());
  for (const auto& [e, i] : normalized) edges_.push_back(e);

  // CSR adjacency, neighbors sorted ascending.
  std::vector<std::size_t> degree(static_cast<std::size_t>(n), 0);
  for (const auto& e : edges_) {
    ++degree[index(e.u)];
    ++degree[index(e.v)];
  }
  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  std::partial_sum(degree.begin(), degree.end(), offsets_.begin() + 1);
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) adjacency_[fill[index(e.u)]++] = e.v;
  for (const auto& e : edges_) adjacency_[fill[index(e.v)]++] = e.u;
}

Instance Instance::with_constants(std::vector<double> constants) const {
  return Instance(n0_, n1_, edges_, std::move(constants));
}

std::vector<double> draw_constants(const Instance& topology, CMode mode, Rng& rng) {
  std::vector<double> c(static_cast<std::size_t>(topology.size()));
  for (AgentId a = 1; a <= topology.size(); ++a) {
    const int d = topology.degree(a);
    if (mode == CMode::WellBehaved && d == 1) {
      // [1/d, 1) is empty: a leaf can never be well-behaved.
      throw InstanceError(InstanceErrorKind::Range, "agent " + std::to_string(a),
                          "degree 1 leaves no well-behaved constant in [1, 1)");
    }
    const double lo = (mode == CMode::WellBehaved && d > 0) ? 1.0 / d : 0.0;
    c[Instance::index(a)] = rng.uniform(lo, 1.0);
  }
  return c;
}

Instance generate_random(int n0, int n1, double p, CMode mode, std::uint64_t seed) {
  if (n0 < 1 || n1 < 1) throw std::invalid_argument("generate_random: part sizes must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("generate_random: p must lie in [0, 1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (AgentId u = 1; u <= n0; ++u) {
    for (AgentId v = n0 + 1; v <= n0 + n1; ++v) {
      if (rng.bernoulli(p)) edges.push_back({u, v});
    }
  }
  Instance topology(n0, n1, std::move(edges), std::vector<double>(static_cast<std::size_t>(n0 + n1), 0.0));
  return topology.with_constants(draw_constants(topology, mode, rng));
}

bool is_well_behaved(const Instance& inst) {
  for (AgentId a = 1; a <= inst.size(); ++a) {
    const int d = inst.degree(a);
    if (d > 0 && inst.constant(a) < 1.0 / d) return false;
  }
  return true;
}

Instance fig1() {
  return Instance(4, 4,
                  {{1, 5}, {1, 6}, {1, 7}, {2, 5}, {2, 8}, {3, 6}, {3, 7}, {3, 8}, {4, 5}, {4, 7}, {4, 8}},
                  {0.41, 0.55, 0.57, 0.86, 0.92, 0.60, 0.34, 0.39});
}

Instance complete_bipartite(int a, int b, double c) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(a) * static_cast<std::size_t>(b));
  for (AgentId u = 1; u <= a; ++u)
    for (AgentId v = a + 1; v <= a + b; ++v) edges.push_back({u, v});
  return Instance(a, b, std::move(edges), std::vector<double>(static_cast<std::size_t>(a + b), c));
}

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InstanceError(InstanceErrorKind::Syntax, "byte " + std::to_string(e.byte), e.what());
  }
  if (!doc.is_object()) throw InstanceError(InstanceErrorKind::Schema, "root", "expected an object");

  auto count_field = [&](const char* name) {
    if (!doc.contains(name)) throw InstanceError(InstanceErrorKind::Schema, name, "missing field");
    const auto& v = doc[name];
    if (!v.is_number_integer()) throw InstanceError(InstanceErrorKind::Schema, name, "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < 0 || x > 1'000'000) throw InstanceError(InstanceErrorKind::Range, name, "part size out of range");
    return static_cast<int>(x);
  };
  const int n0 = count_field("n0");
  const int n1 = count_field("n1");

  if (!doc.contains("edges") || !doc["edges"].is_array())
    throw InstanceError(InstanceErrorKind::Schema, "edges", "expected an array");
  std::vector<Edge> edges;
  const auto& jedges = doc["edges"];
  for (std::size_t i = 0; i < jedges.size(); ++i) {
    const auto& e = jedges[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw InstanceError(InstanceErrorKind::Schema, at("edges", i), "expected a pair of agent ids");
    const auto a = e[0].get<std::int64_t>();
    const auto b = e[1].get<std::int64_t>();
    const std::int64_t n = std::int64_t{n0} + n1;
    if (a < 1 || a > n || b < 1 || b > n)
      throw InstanceError(InstanceErrorKind::UnknownAgent, at("edges", i), "endpoint outside 1.." + std::to_string(n));
    edges.push_back({static_cast<AgentId>(a), static_cast<AgentId>(b)});
  }

  if (!doc.contains("c") || !doc["c"].is_array())
    throw InstanceError(InstanceErrorKind::Schema, "c", "expected an array");
  std::vector<double> c;
  const auto& jc = doc["c"];
  for (std::size_t i = 0; i < jc.size(); ++i) {
    if (!jc[i].is_number()) throw InstanceError(InstanceErrorKind::Schema, at("c", i), "expected a number");
    c.push_back(jc[i].get<double>());
  }
  return Instance(n0, n1, std::move(edges), std::move(c));
}

std::string serialize_instance(const Instance& inst) {
  using ordered = nlohmann::ordered_json;
  ordered edges = ordered::array();
  for (const auto& e : inst.edges()) edges.push_back({e.u, e.v});
  ordered doc;
  doc["n0"] = inst.n0();
  doc["n1"] = inst.n1();
  doc["edges"] = std::move(edges);
  doc["c"] = std::vector<double>(inst.constants().begin(), inst.constants().end());
  return doc.dump() + "\n";
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read instance file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file " + path.string());
  out << serialize_instance(inst);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace mac
