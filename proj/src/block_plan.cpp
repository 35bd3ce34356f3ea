#include "bclab/block_plan.hpp"

#include <string>

#include "bclab/error.hpp"

namespace bclab {

std::string_view to_string(PlanConstruction c) {
  switch (c) {
    case PlanConstruction::TheoremA: return "theorem_a";
    case PlanConstruction::TheoremB: return "theorem_b";
    case PlanConstruction::UserGiven: return "user_given";
  }
  return "user_given";
}

PlanConstruction plan_construction_from_string(std::string_view s) {
  if (s == "theorem_a") return PlanConstruction::TheoremA;
  if (s == "theorem_b") return PlanConstruction::TheoremB;
  if (s == "user_given") return PlanConstruction::UserGiven;
  throw Error(ErrorCode::ValueError, "unknown plan construction '" + std::string(s) + "'");
}

IndexRange BlockPlan::block(std::size_t k) const {
  if (k == 0 || k > boundaries.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "block " + std::to_string(k) + " not in plan");
  }
  return {k == 1 ? 0 : boundaries[k - 2], boundaries[k - 1]};
}

void validate(const BlockPlan& plan) {
  Index previous = 0;
  for (std::size_t k = 0; k < plan.boundaries.size(); ++k) {
    if (plan.boundaries[k] <= previous) {
      throw Error(ErrorCode::InvalidArgument,
                  "boundaries must be strictly increasing and >= 1 (position " + std::to_string(k + 1) + ")");
    }
    previous = plan.boundaries[k];
  }
  if (plan.construction != PlanConstruction::UserGiven &&
      plan.certificates.size() != plan.boundaries.size()) {
    throw Error(ErrorCode::InvalidArgument, "constructed plans carry one certificate per block");
  }
}

BlockPlan user_plan(std::vector<Index> boundaries) {
  BlockPlan plan{std::move(boundaries), PlanConstruction::UserGiven, {}};
  validate(plan);
  return plan;
}

BlockPlan identity_plan(std::size_t count) {
  std::vector<Index> b(count);
  for (std::size_t k = 0; k < count; ++k) b[k] = k + 1;
  return user_plan(std::move(b));
}

}  // namespace bclab
