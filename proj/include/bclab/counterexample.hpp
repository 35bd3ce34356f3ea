#pragma once

#include <vector>

#include "bclab/diagnostics.hpp"
#include "bclab/event_model.hpp"

namespace bclab {

/// (2/9) (t^2 + (m-t)^2 - t(m-t)): variance of S_m for the three-point
/// counterexample when t of the m chosen indices are odd. Always >= m^2/18.
/// Throws OutOfRange unless m >= 1 and t <= m.
double counterexample_variance(Index m, Index t);

enum class ParityRule { Alternating, AllOdd, AllEven, OddPrefix };

/// Chooses whether n_k is odd. OddPrefix makes the first `odd_count` picks odd
/// and the rest even.
struct ParitySpec {
  ParityRule rule = ParityRule::Alternating;
  Index odd_count = 0;
  friend bool operator==(const ParitySpec&, const ParitySpec&) = default;
};

std::string_view to_string(ParityRule rule);
ParityRule parity_rule_from_string(std::string_view s);

bool pick_is_odd(const ParitySpec& spec, Index k);
/// n_1 < n_2 < ... < n_count, each the least index above its predecessor
/// with the requested parity.
std::vector<Index> parity_indices(const ParitySpec& spec, Index count);

struct CounterexampleRow {
  Index m = 0;
  Index t = 0;
  double mean = 0.0;             // 2m/3
  double variance = 0.0;         // closed form
  double ratio = 0.0;            // variance / mean^2
  double engine_mean = 0.0;      // exact engine on the subsequence model
  double engine_variance = 0.0;
  double relative_error = 0.0;   // |engine_variance - variance| / variance
};

struct CounterexampleReport {
  std::vector<CounterexampleRow> rows;
  double min_ratio = 0.0;
  double max_relative_error = 0.0;
  DiagnosticsReport report;  // Holds iff every ratio >= 1/8 and the engine agrees
};

/// Rows m = 1..m_max for B_k = A_{n_k} on the paper_s3 preset, cross-checked
/// against moments() of the corresponding subsequence model.
CounterexampleReport counterexample_report(const ParitySpec& spec, Index m_max,
                                           double relative_tolerance = 1e-10);

}  // namespace bclab
