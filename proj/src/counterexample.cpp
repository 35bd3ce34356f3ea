#include "bclab/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bclab/error.hpp"
#include "bclab/format.hpp"
#include "bclab/moments.hpp"
#include "bclab/presets.hpp"

namespace bclab {

double counterexample_variance(Index m, Index t) {
  if (m == 0) throw Error(ErrorCode::OutOfRange, "m must be >= 1");
  if (t > m) throw Error(ErrorCode::OutOfRange, "t = " + std::to_string(t) + " exceeds m = " + std::to_string(m));
  const double td = static_cast<double>(t);
  const double rest = static_cast<double>(m - t);
  return (2.0 / 9.0) * (td * td + rest * rest - td * rest);
}

std::string_view to_string(ParityRule rule) {
  switch (rule) {
    case ParityRule::Alternating: return "alternating";
    case ParityRule::AllOdd: return "all_odd";
    case ParityRule::AllEven: return "all_even";
    case ParityRule::OddPrefix: return "odd_prefix";
  }
  return "alternating";
}

ParityRule parity_rule_from_string(std::string_view s) {
  for (auto r : {ParityRule::Alternating, ParityRule::AllOdd, ParityRule::AllEven, ParityRule::OddPrefix}) {
    if (to_string(r) == s) return r;
  }
  throw Error(ErrorCode::ValueError, "unknown parity rule '" + std::string(s) + "'");
}

bool pick_is_odd(const ParitySpec& spec, Index k) {
  switch (spec.rule) {
    case ParityRule::Alternating: return k % 2 == 1;
    case ParityRule::AllOdd: return true;
    case ParityRule::AllEven: return false;
    case ParityRule::OddPrefix: return k <= spec.odd_count;
  }
  return true;
}

std::vector<Index> parity_indices(const ParitySpec& spec, Index count) {
  std::vector<Index> out;
  out.reserve(count);
  Index previous = 0;
  for (Index k = 1; k <= count; ++k) {
    Index n = previous + 1;
    if ((n % 2 == 1) != pick_is_odd(spec, k)) ++n;
    out.push_back(n);
    previous = n;
  }
  return out;
}

CounterexampleReport counterexample_report(const ParitySpec& spec, Index m_max, double relative_tolerance) {
  if (m_max == 0) throw Error(ErrorCode::OutOfRange, "m_max must be >= 1");
  const auto indices = parity_indices(spec, m_max);
  const auto model = subsequence_model(paper_s3_model(), indices);
  const MomentTable exact = moments(*model, m_max);

  CounterexampleReport out;
  out.min_ratio = INFINITY;
  Index t = 0;
  Index worst_ratio_m = 1;
  for (Index m = 1; m <= m_max; ++m) {
    if (indices[m - 1] % 2 == 1) ++t;
    CounterexampleRow row;
    row.m = m;
    row.t = t;
    row.mean = 2.0 * static_cast<double>(m) / 3.0;
    row.variance = counterexample_variance(m, t);
    // Var / mean^2 = Q / (2 m^2) with Q = t^2 + (m-t)^2 - t(m-t); both integers
    // stay exact in doubles well past any m we tabulate.
    const double q = static_cast<double>(t * t + (m - t) * (m - t)) - static_cast<double>(t * (m - t));
    row.ratio = q / (2.0 * static_cast<double>(m) * static_cast<double>(m));
    row.engine_mean = exact.at(m).mean;
    row.engine_variance = exact.at(m).variance;
    row.relative_error = std::abs(row.engine_variance - row.variance) / row.variance;
    if (row.ratio < out.min_ratio) {
      out.min_ratio = row.ratio;
      worst_ratio_m = m;
    }
    out.max_relative_error = std::max(out.max_relative_error, row.relative_error);
    out.rows.push_back(row);
  }

  DiagnosticsReport& r = out.report;
  r.condition = ConditionId::Counterexample;
  r.scan_range = {1, m_max};
  r.notes.emplace_back("parity", std::string(to_string(spec.rule)));
  r.notes.emplace_back("max_relative_error", format_double(out.max_relative_error));
  const bool ratio_ok = out.min_ratio >= 0.125;
  const bool engine_ok = out.max_relative_error <= relative_tolerance;
  r.verdict = (ratio_ok && engine_ok) ? Verdict::Holds : Verdict::Fails;
  r.witness = Witness{{worst_ratio_m}, {{"min_ratio", out.min_ratio}, {"max_relative_error", out.max_relative_error}}};
  return out;
}

}  // namespace bclab
