#include "mac/influence.hpp"

#include <stdexcept>
#include <string>

#include "mac/dynamics.hpp"

namespace mac {

namespace {

void validate(const Instance& inst, const InfluenceQuery& q) {
  if (!inst.in_s0(q.v)) throw std::invalid_argument("influence: agent " + std::to_string(q.v) + " is not in S0");
  for (AgentId s : q.zero_set) {
    if (!inst.in_s0(s)) throw std::invalid_argument("influence: zero-set agent " + std::to_string(s) + " is not in S0");
    if (s == q.v) throw std::invalid_argument("influence: agent " + std::to_string(q.v) + " is in its own zero-set");
  }
}

}  // namespace

int influence_closed_form(const Instance& inst, AgentId v, std::span<const std::uint8_t> zero_mask) {
  int count = 0;
  for (AgentId j : inst.neighbors(v)) {
    int ceil_sum = 0;
    for (AgentId i : inst.neighbors(j)) ceil_sum += zero_mask[Instance::index(i)] ? 0 : 1;
    if (1.0 - inst.constant(j) * ceil_sum > 0.0) ++count;
  }
  return count;
}

int influence(const Instance& inst, const InfluenceQuery& query, InfluenceMethod method) {
  validate(inst, query);
  if (method == InfluenceMethod::ClosedForm) {
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(inst.size()), 0);
    for (AgentId s : query.zero_set) mask[Instance::index(s)] = 1;
    return influence_closed_form(inst, query.v, mask);
  }
  Profile now(inst.size());
  for (AgentId s : query.zero_set) now.set(s, Action::Zero);
  const Profile next = step(inst, now);
  int count = 0;
  for (AgentId j : inst.neighbors(query.v)) count += floor_value(next.action(j));
  return count;
}

double shadow_constant(double c, int degree, int f_ref) {
  if (degree < 1) throw std::invalid_argument("shadow_constant: degree must be >= 1");
  if (f_ref < 1) throw std::invalid_argument("shadow_constant: reference influence is zero");
  const double lo = 1.0 / degree;
  const double hi = 1.0 / f_ref;
  constexpr double slack = 1e-12;
  if (c < lo - slack || c > hi + slack) {
    throw std::invalid_argument("shadow_constant: c outside [1/d, 1/f_ref]");
  }
  return lo + hi - c;
}

}  // namespace mac
