#include <doctest.h>

#include <algorithm>

#include "mac/influence.hpp"
#include "mac/rng.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace mac;

namespace {

int direct(const Instance& inst, AgentId v, std::vector<AgentId> s) {
  return influence(inst, {v, std::move(s)}, InfluenceMethod::Direct);
}
int closed(const Instance& inst, AgentId v, std::vector<AgentId> s) {
  return influence(inst, {v, std::move(s)}, InfluenceMethod::ClosedForm);
}

}  // namespace

TEST_CASE("fig1 influence values") {
  const Instance f = fig1();
  CHECK(direct(f, 1, {3, 4}) == 2);
  CHECK(closed(f, 1, {3, 4}) == 2);
  CHECK(direct(f, 1, {}) == 0);
  CHECK(closed(f, 1, {}) == 0);
  CHECK(direct(f, 3, {4}) == 2);
  CHECK(closed(f, 3, {4}) == 2);
  CHECK(oracle::influence(f, 3, {4}) == 2);
}

TEST_CASE("influence preconditions") {
  const Instance f = fig1();
  CHECK_THROWS_AS(direct(f, 5, {}), std::invalid_argument);
  CHECK_THROWS_AS(direct(f, 1, {1}), std::invalid_argument);
  CHECK_THROWS_AS(closed(f, 1, {6}), std::invalid_argument);
}

TEST_CASE("direct and closed form agree with the oracle") {
  Rng rng(61);
  for (int i = 0; i < 100; ++i) {
    const Instance inst = support::random_instance(rng, CMode::WellBehaved, 6);
    for (AgentId v = 1; v <= inst.n0(); ++v) {
      std::vector<AgentId> s;
      for (AgentId a = 1; a <= inst.n0(); ++a) {
        if (a != v && rng.bernoulli(0.5)) s.push_back(a);
      }
      const int o = oracle::influence(inst, v, s);
      CHECK(direct(inst, v, s) == o);
      CHECK(closed(inst, v, s) == o);
    }
  }
}

TEST_CASE("influence is monotone in the zero-set (exhaustive)") {
  Rng rng(67);
  for (int i = 0; i < 40; ++i) {
    const Instance inst = support::random_instance(rng, CMode::WellBehaved, 7);
    const int n0 = inst.n0();
    const AgentId v = static_cast<AgentId>(rng.below(static_cast<std::uint64_t>(n0)) + 1);
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(inst.size()), 0);
    std::vector<int> value(std::size_t{1} << n0, -1);
    for (std::uint32_t bits = 0; bits < value.size(); ++bits) {
      if (bits & (1u << (v - 1))) continue;
      for (AgentId a = 1; a <= n0; ++a) mask[Instance::index(a)] = (bits >> (a - 1)) & 1u;
      value[bits] = influence_closed_form(inst, v, mask);
      CHECK(value[bits] >= 0);
      CHECK(value[bits] <= inst.degree(v));
      // Every subset one element smaller is no larger.
      for (AgentId a = 1; a <= n0; ++a) {
        const std::uint32_t b = 1u << (a - 1);
        if (bits & b) CHECK(value[bits ^ b] <= value[bits]);
      }
    }
  }
}

TEST_CASE("coverage function passes the two-set inequality") {
  // Below 1/d every uncontrolled agent plays One at once, so the objective is
  // the number of edges touching the control set.
  const auto coverage = [](const Instance& inst, const std::vector<AgentId>& x) {
    std::size_t n = 0;
    for (const auto& e : inst.edges()) {
      const bool hit = std::find(x.begin(), x.end(), e.u) != x.end() || std::find(x.begin(), x.end(), e.v) != x.end();
      n += hit ? 1 : 0;
    }
    return static_cast<long>(n);
  };
  const auto join = [](std::vector<AgentId> a, const std::vector<AgentId>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
  };
  Rng rng(71);
  for (int i = 0; i < 300; ++i) {
    const Instance topo = support::random_instance(rng, CMode::Uniform01);
    std::vector<double> c;
    for (AgentId a = 1; a <= topo.size(); ++a) c.push_back(topo.degree(a) > 0 ? 0.5 / topo.degree(a) : 0.0);
    const Instance inst = topo.with_constants(c);
    const auto big_i = support::random_subset(rng, 1, inst.size(), 0.4);
    const auto big_j = support::random_subset(rng, 1, inst.size(), 0.4);
    std::vector<AgentId> small_i;
    std::vector<AgentId> small_j;
    for (AgentId a : big_i) if (rng.bernoulli(0.5)) small_i.push_back(a);
    for (AgentId a : big_j) if (rng.bernoulli(0.5)) small_j.push_back(a);
    const long lhs = coverage(inst, join(small_i, big_j)) - coverage(inst, small_i);
    const long rhs = coverage(inst, join(big_i, small_j)) - coverage(inst, big_i);
    CHECK(lhs >= rhs);
    CHECK(static_cast<long>(oracle::objective(inst, big_i)) == coverage(inst, big_i));
  }
}

TEST_CASE("shadow constant") {
  CHECK(shadow_constant(0.41, 3, 2) == doctest::Approx(1.0 / 3.0 + 0.5 - 0.41));
  CHECK(shadow_constant(0.41, 3, 2) == doctest::Approx(0.4233333333));
  const double mid = (1.0 / 3.0 + 0.5) / 2.0;
  CHECK(shadow_constant(mid, 3, 2) == doctest::Approx(mid));
  Rng rng(73);
  for (int i = 0; i < 1000; ++i) {
    const int d = static_cast<int>(rng.below(20)) + 2;
    const int f = static_cast<int>(rng.below(static_cast<std::uint64_t>(d))) + 1;
    const double c = rng.uniform(1.0 / d, 1.0 / f);
    CHECK(shadow_constant(shadow_constant(c, d, f), d, f) == doctest::Approx(c).epsilon(1e-12));
  }
  CHECK_THROWS_AS(shadow_constant(0.9, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(shadow_constant(0.4, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(shadow_constant(0.4, 3, 0), std::invalid_argument);
}
