#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "bclab/event_model.hpp"

namespace bclab {

enum class PlanConstruction { TheoremA, TheoremB, UserGiven };

std::string_view to_string(PlanConstruction c);
/// Accepts "theorem_a", "theorem_b", "user_given"; throws ValueError otherwise.
PlanConstruction plan_construction_from_string(std::string_view s);

/// Per-block evidence recorded by a construction.
///  - theorem A: `value` is the tail bound U(n_k) that admitted n_k;
///    `exact_tail` holds P(union_{n >= n_k} A_n) when the model knows it.
///  - theorem B: `value` is P(B_k) and `complement` is P(no A_j in block k).
struct BlockCertificate {
  double value = 0.0;
  double complement = 0.0;
  std::optional<double> exact_tail;
  friend bool operator==(const BlockCertificate&, const BlockCertificate&) = default;
};

/// Boundaries 0 = n_0 < n_1 < n_2 < ...; block k is (n_{k-1}, n_k].
struct BlockPlan {
  std::vector<Index> boundaries;
  PlanConstruction construction = PlanConstruction::UserGiven;
  std::vector<BlockCertificate> certificates;

  std::size_t block_count() const noexcept { return boundaries.size(); }
  /// Block k (1-based) as a half-open index range.
  IndexRange block(std::size_t k) const;
  Index last_boundary() const { return boundaries.empty() ? 0 : boundaries.back(); }

  friend bool operator==(const BlockPlan&, const BlockPlan&) = default;
};

/// Checks strict monotonicity, n_1 >= 1 and, for constructed plans, one
/// certificate per block. Throws InvalidArgument.
void validate(const BlockPlan& plan);

/// Plan taken as given, validated for monotonicity only.
BlockPlan user_plan(std::vector<Index> boundaries);

/// Identity plan n_k = k for k <= count.
BlockPlan identity_plan(std::size_t count);

}  // namespace bclab
