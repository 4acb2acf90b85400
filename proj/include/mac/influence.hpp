#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mac/instance.hpp"

namespace mac {

/// One-step influence f_v(S): how many of v's neighbors play One one step after
/// the zero-set is S (everyone else Undecided).
struct InfluenceQuery {
  AgentId v = 0;
  std::vector<AgentId> zero_set;
};

enum class InfluenceMethod {
  Direct,      // one literal step of the dynamics from the zero-set profile
  ClosedForm,  // count j in n(v) with 1 - c_j * (ceil-sum of j) > 0
};

/// Throws std::invalid_argument when v is not in S0, v is in S, or S leaves S0.
int influence(const Instance& inst, const InfluenceQuery& query, InfluenceMethod method);

/// Closed-form influence against a 0/1 zero-set mask indexed by agent - 1.
/// No validation; used on hot paths.
int influence_closed_form(const Instance& inst, AgentId v, std::span<const std::uint8_t> zero_mask);

/// Shadow learning constant 1/d + 1/f_ref - c. Reflects c inside
/// [1/d, 1/f_ref]; applying it twice gives c back.
double shadow_constant(double c, int degree, int f_ref);

}  // namespace mac
