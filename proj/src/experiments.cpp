#include "mac/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "mac/dynamics.hpp"
#include "mac/parallel.hpp"
#include "mac/rng.hpp"

namespace mac {

namespace {

struct Job {
  int n;
  std::size_t prob_index;
  int sample;
};

std::vector<Method> canonical_methods(std::vector<Method> methods) {
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
  return methods;
}

}  // namespace

std::string_view to_string(Method method) { return method == Method::Brute ? "brute" : "greedy"; }

Method parse_method(std::string_view text) {
  if (text == "greedy") return Method::Greedy;
  if (text == "brute" || text == "brute-force" || text == "brute_force") return Method::Brute;
  throw std::invalid_argument("unknown method '" + std::string(text) + "' (expected greedy or brute)");
}

int sweep_budget(int n) { return (n + 9) / 10; }

std::uint64_t cell_seed(std::uint64_t master, int n, std::size_t prob_index, int sample) {
  return derive_seed(master, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(prob_index),
                              static_cast<std::uint64_t>(sample)});
}

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, end);
}

void validate(const SweepConfig& config) {
  if (config.sizes.empty()) throw std::invalid_argument("sweep: no sizes");
  for (int n : config.sizes) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("sweep: size " + std::to_string(n) + " must be even and >= 2");
  }
  if (config.probs.empty()) throw std::invalid_argument("sweep: no edge probabilities");
  for (double p : config.probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sweep: probability " + format_double(p) + " outside [0, 1]");
  }
  if (config.samples_per_cell < 1) throw std::invalid_argument("sweep: samples per cell must be >= 1");
  if (config.methods.empty()) throw std::invalid_argument("sweep: no methods");
}

SweepResult sweep(const SweepConfig& config, unsigned jobs, const std::function<void(const std::string&)>& log) {
  validate(config);
  const auto methods = canonical_methods(config.methods);
  SweepResult result;

  // Decide per cell which methods run; brute cells past the cap are skipped.
  std::map<std::pair<int, std::size_t>, std::vector<Method>> plan;
  for (int n : config.sizes) {
    for (std::size_t pi = 0; pi < config.probs.size(); ++pi) {
      auto& run_methods = plan[{n, pi}];
      for (Method m : methods) {
        if (m == Method::Brute) {
          const auto pool = config.side == SideRestriction::S0Only ? n / 2 : n;
          const auto subsets = binomial(static_cast<std::uint64_t>(pool), static_cast<std::uint64_t>(sweep_budget(n)));
          if (subsets > config.enumeration_cap) {
            result.skipped.push_back({n, config.probs[pi], m,
                                      EnumerationCapExceeded(subsets, config.enumeration_cap).what()});
            continue;
          }
        }
        run_methods.push_back(m);
      }
    }
  }

  std::vector<Job> work;
  for (const auto& [cell, run_methods] : plan) {
    for (int s = 0; s < config.samples_per_cell; ++s) work.push_back({cell.first, cell.second, s});
  }

  std::vector<std::vector<ExperimentRecord>> slots(work.size());
  parallel_for(work.size(), jobs, [&](std::size_t w) {
    const Job& job = work[w];
    const double p = config.probs[job.prob_index];
    const auto seed = cell_seed(config.master_seed, job.n, job.prob_index, job.sample);
    const Instance inst = generate_random(job.n / 2, job.n / 2, p, config.c_mode, seed);
    const int budget = sweep_budget(job.n);
    SolverOptions options;
    options.enumeration_cap = config.enumeration_cap;

    for (Method m : plan.at({job.n, job.prob_index})) {
      const auto start = std::chrono::steady_clock::now();
      std::vector<AgentId> chosen;
      std::size_t value = 0;
      if (m == Method::Greedy) {
        auto g = greedy(inst, budget, config.side, options);
        chosen = std::move(g.picks);
        value = g.final_value;
      } else {
        auto b = brute_force(inst, budget, config.side, options);
        chosen = std::move(b.best_set);
        value = b.best_value;
      }
      const auto stop = std::chrono::steady_clock::now();

      ExperimentRecord rec;
      rec.n = job.n;
      rec.p = p;
      rec.sample = job.sample;
      rec.seed = seed;
      rec.budget = budget;
      rec.method = m;
      rec.f_value = value;
      rec.total_edges = inst.edge_count();
      rec.inactivation_ratio =
          rec.total_edges > 0 ? static_cast<double>(value) / static_cast<double>(rec.total_edges) : 0.0;
      rec.runtime_ms =
          config.record_timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
      rec.converge_steps = run(inst, chosen).converged_at;
      slots[w].push_back(rec);
    }
  });

  for (auto& s : slots) result.records.insert(result.records.end(), s.begin(), s.end());
  std::sort(result.records.begin(), result.records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.n, a.p, a.sample, a.method) < std::tie(b.n, b.p, b.sample, b.method);
  });

  if (log) {
    std::map<std::tuple<int, double, Method>, std::pair<double, int>> means;
    for (const auto& r : result.records) {
      auto& [sum, count] = means[{r.n, r.p, r.method}];
      sum += r.inactivation_ratio;
      ++count;
    }
    for (const auto& [key, acc] : means) {
      const auto& [n, p, m] = key;
      log("cell n=" + std::to_string(n) + " p=" + format_double(p) + " method=" + std::string(to_string(m)) +
          " samples=" + std::to_string(acc.second) + " mean_ratio=" + format_double(acc.first / acc.second));
    }
    for (const auto& s : result.skipped) {
      log("skipped n=" + std::to_string(s.n) + " p=" + format_double(s.p) + " method=" +
          std::string(to_string(s.method)) + ": " + s.reason);
    }
  }
  return result;
}

std::string format_csv(std::span<const ExperimentRecord> records) {
  if (records.empty()) throw std::invalid_argument("write_csv: no records");
  std::ostringstream out;
  out << kCsvHeader << '\n';
  char runtime[32];
  for (const auto& r : records) {
    auto [end, ec] = std::to_chars(runtime, runtime + sizeof runtime, r.runtime_ms, std::chars_format::fixed, 3);
    if (ec != std::errc{}) throw std::runtime_error("format_csv: runtime formatting failed");
    out << r.n << ',' << format_double(r.p) << ',' << r.sample << ',' << r.seed << ',' << r.budget << ','
        << to_string(r.method) << ',' << r.f_value << ',' << r.total_edges << ',' << format_double(r.inactivation_ratio)
        << ',' << std::string_view(runtime, static_cast<std::size_t>(end - runtime)) << ',' << r.converge_steps << '\n';
  }
  return out.str();
}

void write_csv(std::span<const ExperimentRecord> records, const std::filesystem::path& path) {
  const std::string text = format_csv(records);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string format_manifest(const SweepConfig& config, const SweepResult& result) {
  nlohmann::ordered_json j;
  j["master_seed"] = config.master_seed;
  j["sizes"] = config.sizes;
  j["probs"] = config.probs;
  j["samples_per_cell"] = config.samples_per_cell;
  j["budget_rule"] = "ceil(n/10)";
  j["c_mode"] = std::string(to_string(config.c_mode));
  j["side"] = std::string(to_string(config.side));
  std::vector<std::string> methods;
  for (Method m : canonical_methods(config.methods)) methods.emplace_back(to_string(m));
  j["methods"] = methods;
  j["enumeration_cap"] = config.enumeration_cap;
  j["record_timing"] = config.record_timing;
  j["records"] = result.records.size();
  auto skipped = nlohmann::ordered_json::array();
  for (const auto& s : result.skipped) {
    skipped.push_back({{"n", s.n}, {"p", s.p}, {"method", std::string(to_string(s.method))}, {"reason", s.reason}});
  }
  j["skipped"] = skipped;
  return j.dump(2) + "\n";
}

void write_manifest(const SweepConfig& config, const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << format_manifest(config, result);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace mac
