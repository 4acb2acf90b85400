#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mac/experiments.hpp"
#include "support.hpp"

using namespace mac;

namespace {

SweepConfig small_config() {
  SweepConfig cfg;
  cfg.sizes = {4, 8, 12};
  cfg.probs = {0.3, 0.8};
  cfg.samples_per_cell = 3;
  cfg.master_seed = 5;
  cfg.record_timing = false;
  return cfg;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("budget rule") {
  CHECK(sweep_budget(4) == 1);
  CHECK(sweep_budget(10) == 1);
  CHECK(sweep_budget(12) == 2);
  CHECK(sweep_budget(40) == 4);
}

TEST_CASE("single cell regression") {
  SweepConfig cfg;
  cfg.sizes = {4};
  cfg.probs = {1.0};
  cfg.samples_per_cell = 1;
  cfg.master_seed = 42;
  cfg.record_timing = false;
  const auto result = sweep(cfg);
  REQUIRE(result.records.size() == 2);
  const auto& brute = result.records[0];
  const auto& greedy = result.records[1];
  CHECK(brute.method == Method::Brute);
  CHECK(greedy.method == Method::Greedy);
  CHECK(brute.seed == greedy.seed);
  CHECK(brute.total_edges == 4);
  CHECK(brute.budget == 1);
  CHECK(format_csv(result.records) ==
        "n,p,sample,seed,budget,method,f,edges,ratio,runtime_ms,steps\n"
        "4,1,0,2754894694190915573,1,brute,4,4,1,0.000,3\n"
        "4,1,0,2754894694190915573,1,greedy,4,4,1,0.000,3\n");
}

TEST_CASE("records are paired, ordered and consistent") {
  const auto result = sweep(small_config());
  CHECK(result.records.size() == 3 * 2 * 3 * 2);
  CHECK(result.skipped.empty());
  for (std::size_t i = 0; i + 1 < result.records.size(); i += 2) {
    const auto& b = result.records[i];
    const auto& g = result.records[i + 1];
    CHECK(b.method == Method::Brute);
    CHECK(g.method == Method::Greedy);
    CHECK(b.seed == g.seed);
    CHECK(b.total_edges == g.total_edges);
    CHECK(g.f_value <= b.f_value);
    CHECK(b.inactivation_ratio >= 0.0);
    CHECK(b.inactivation_ratio <= 1.0);
    if (b.degenerate()) CHECK(b.inactivation_ratio == 0.0);
  }
  for (std::size_t i = 1; i < result.records.size(); ++i) {
    const auto& a = result.records[i - 1];
    const auto& b = result.records[i];
    CHECK(std::tie(a.n, a.p, a.sample, a.method) < std::tie(b.n, b.p, b.sample, b.method));
  }
}

TEST_CASE("sweep output does not depend on the worker count") {
  const auto cfg = small_config();
  CHECK(format_csv(sweep(cfg, 1).records) == format_csv(sweep(cfg, 3).records));
}

TEST_CASE("enumeration cap skips brute cells and says so") {
  auto cfg = small_config();
  cfg.enumeration_cap = 20;
  const auto result = sweep(cfg);
  // n=8: C(8,1)=8 fits, n=12: C(12,2)=66 does not.
  REQUIRE(result.skipped.size() == 2);
  CHECK(result.skipped[0].n == 12);
  CHECK(result.skipped[0].method == Method::Brute);
  for (const auto& r : result.records) CHECK_FALSE((r.n == 12 && r.method == Method::Brute));
  const auto manifest = nlohmann::json::parse(format_manifest(cfg, result));
  CHECK(manifest.at("skipped").size() == 2);
}

TEST_CASE("csv shape") {
  const auto result = sweep(small_config());
  const auto rows = lines(format_csv(result.records));
  CHECK(rows.front() == kCsvHeader);
  CHECK(rows.size() == result.records.size() + 1);
  const std::span<const ExperimentRecord> one(result.records.data(), 1);
  CHECK(lines(format_csv(one)).size() == 2);
  CHECK_THROWS_AS(format_csv({}), std::invalid_argument);
}

TEST_CASE("csv and manifest files") {
  const auto cfg = small_config();
  const auto result = sweep(cfg);
  const auto csv = support::temp_path("sweep.csv");
  const auto man = support::temp_path("sweep.manifest.json");
  write_csv(result.records, csv);
  write_manifest(cfg, result, man);
  std::ifstream in(csv);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == format_csv(result.records));
  std::ifstream min(man);
  const auto j = nlohmann::json::parse(min);
  CHECK(j.at("master_seed") == 5);
  CHECK(j.at("sizes") == std::vector<int>{4, 8, 12});
  CHECK(j.at("samples_per_cell") == 3);
  CHECK(j.at("side") == "any");
  CHECK(j.at("records") == result.records.size());
  std::filesystem::remove(csv);
  std::filesystem::remove(man);
  CHECK_THROWS_AS(write_csv(result.records, "/nonexistent/dir/x.csv"), std::runtime_error);
}

TEST_CASE("timing is recorded when asked") {
  auto cfg = small_config();
  cfg.record_timing = true;
  cfg.methods = {Method::Greedy};
  const auto result = sweep(cfg);
  double total = 0.0;
  for (const auto& r : result.records) total += r.runtime_ms;
  CHECK(total > 0.0);
}

TEST_CASE("config validation") {
  auto cfg = small_config();
  cfg.sizes = {5};
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg = small_config();
  cfg.probs = {1.5};
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg = small_config();
  cfg.samples_per_cell = 0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg = small_config();
  cfg.methods.clear();
  CHECK_THROWS_AS(sweep(cfg), std::invalid_argument);
}

TEST_CASE("number formatting is shortest round trip") {
  CHECK(format_double(0.3) == "0.3");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(6.0 / 11.0) == "0.5454545454545454");
  CHECK(parse_method("brute") == Method::Brute);
  CHECK_THROWS_AS(parse_method("random"), std::invalid_argument);
}
