#pragma once

#include <optional>
#include <vector>

#include "bclab/event_model.hpp"

namespace bclab {

/// Moments of S_m = 1_{A_1} + ... + 1_{A_m}.
struct MomentRow {
  Index m = 0;
  double mean = 0.0;
  double variance = 0.0;
  /// Var S_m / (E S_m)^2; empty when E S_m = 0.
  std::optional<double> ratio;
};

struct MomentTable {
  std::vector<MomentRow> rows;

  /// Row for S_m; rows are stored for m = 1..m_max in order.
  const MomentRow& at(Index m) const { return rows.at(m - 1); }
};

/// Exact moments for m = 1..m_max. Each step adds one covariance row, so the
/// cost is O(m_max^2) pair evaluations in total. Throws IndexOutOfRange for
/// m_max = 0 or past the end of a finite sequence.
MomentTable moments(const EventSequenceModel& model, Index m_max);

}  // namespace bclab
