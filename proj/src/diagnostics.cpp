#include "bclab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bclab/error.hpp"
#include "bclab/format.hpp"
#include "bclab/kernels.hpp"
#include "bclab/marginal_spec.hpp"
#include "bclab/operator_norm.hpp"

namespace bclab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_nonnegative(double x, const char* what) {
  if (!std::isfinite(x) || x < 0.0) {
    throw Error(ErrorCode::ValueError, std::string(what) + " = " + format_double(x) + " must be finite and >= 0");
  }
}

void require_grid(const std::vector<Index>& grid) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "grid is empty");
  if (grid.front() == 0) throw Error(ErrorCode::IndexOutOfRange, "grid indices start at 1");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) throw Error(ErrorCode::InvalidArgument, "grid must be strictly increasing");
  }
}

std::vector<double> marginals_up_to(const EventSequenceModel& model, Index n) {
  std::vector<double> p(n);
  for (Index i = 1; i <= n; ++i) p[i - 1] = model.marginal(i);
  return p;
}

}  // namespace

std::string_view to_string(ConditionId id) {
  switch (id) {
    case ConditionId::Bc1: return "bc1";
    case ConditionId::KochenStone: return "kochen_stone";
    case ConditionId::PairwiseIndependence: return "pairwise";
    case ConditionId::Mixing: return "mixing";
    case ConditionId::MatrixCondition: return "matrix";
    case ConditionId::Xz: return "xz";
    case ConditionId::BlockCertificates: return "block_certificates";
    case ConditionId::Counterexample: return "counterexample";
  }
  return "unknown";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

ConditionId condition_from_string(std::string_view s) {
  for (auto id : {ConditionId::Bc1, ConditionId::KochenStone, ConditionId::PairwiseIndependence,
                  ConditionId::Mixing, ConditionId::MatrixCondition, ConditionId::Xz,
                  ConditionId::BlockCertificates, ConditionId::Counterexample}) {
    if (to_string(id) == s) return id;
  }
  throw Error(ErrorCode::ValueError, "unknown condition '" + std::string(s) + "'");
}

std::optional<double> Witness::value(std::string_view name) const {
  for (const auto& [k, v] : values) {
    if (k == name) return v;
  }
  return std::nullopt;
}

std::optional<std::string> DiagnosticsReport::note(std::string_view key) const {
  for (const auto& [k, v] : notes) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::vector<DiagnosticsReport> merge_reports(std::vector<DiagnosticsReport> reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
    return static_cast<int>(a.condition) < static_cast<int>(b.condition);
  });
  return reports;
}

// ---------------------------------------------------------------------------

MixingProfile::MixingProfile(Spec spec) : spec_(std::move(spec)) {
  l1_bound_ = std::visit(
      overloaded{
          [](const GeometricProfile& g) {
            require_nonnegative(g.c, "c");
            if (!(g.r >= 0.0 && g.r < 1.0)) throw Error(ErrorCode::ValueError, "geometric ratio must lie in [0, 1)");
            return g.c * g.r / (1.0 - g.r);
          },
          [](const PowerProfile& p) {
            require_nonnegative(p.c, "c");
            if (!(p.beta > 1.0) || !std::isfinite(p.beta)) {
              throw Error(ErrorCode::ValueError, "power profile needs beta > 1 to be summable");
            }
            return power_series_tail_upper(p.c, p.beta, 1.0);
          },
          [](const ExplicitProfile& e) {
            kernels::CompensatedSum s;
            for (double v : e.values) {
              require_nonnegative(v, "rho");
              s.add(v);
            }
            return s.value();
          },
      },
      spec_);
}

double MixingProfile::rho(Index lag) const {
  if (lag == 0) throw Error(ErrorCode::IndexOutOfRange, "lags start at 1");
  return std::visit(overloaded{
                        [lag](const GeometricProfile& g) { return g.c * std::pow(g.r, static_cast<double>(lag)); },
                        [lag](const PowerProfile& p) { return p.c * std::pow(static_cast<double>(lag), -p.beta); },
                        [lag](const ExplicitProfile& e) { return lag <= e.values.size() ? e.values[lag - 1] : 0.0; },
                    },
                    spec_);
}

CorrelationMatrixSpec::CorrelationMatrixSpec(Spec spec) : spec_(std::move(spec)) {
  std::visit(overloaded{
                 [](const ZeroMatrix&) {},
                 [](const ConstantMatrix& m) { require_nonnegative(m.c, "c"); },
                 [](const BandedMatrix& m) {
                   require_nonnegative(m.c, "c");
                   require_nonnegative(m.r, "r");
                 },
                 [](const ExplicitMatrix& m) {
                   for (const auto& row : m.rows) {
                     for (double v : row) require_nonnegative(v, "M entry");
                   }
                 },
             },
             spec_);
}

double CorrelationMatrixSpec::entry(Index i, Index j) const {
  if (i == 0 || j == 0) throw Error(ErrorCode::IndexOutOfRange, "matrix indices start at 1");
  return std::visit(overloaded{
                        [](const ZeroMatrix&) { return 0.0; },
                        [](const ConstantMatrix& m) { return m.c; },
                        [i, j](const BandedMatrix& m) {
                          const Index lag = i > j ? i - j : j - i;
                          return m.c * std::pow(m.r, static_cast<double>(lag));
                        },
                        [i, j](const ExplicitMatrix& m) {
                          if (i > m.rows.size() || j > m.rows[i - 1].size()) return 0.0;
                          return m.rows[i - 1][j - 1];
                        },
                    },
                    spec_);
}

std::optional<double> CorrelationMatrixSpec::schur_bound() const {
  return std::visit(overloaded{
                        [](const ZeroMatrix&) -> std::optional<double> { return 0.0; },
                        [](const ConstantMatrix& m) -> std::optional<double> {
                          if (m.c == 0.0) return 0.0;
                          return std::nullopt;
                        },
                        [](const BandedMatrix& m) -> std::optional<double> {
                          if (m.r >= 1.0) return m.c == 0.0 ? std::optional<double>(0.0) : std::nullopt;
                          return m.c * (1.0 + 2.0 * m.r / (1.0 - m.r));
                        },
                        [](const ExplicitMatrix& m) -> std::optional<double> {
                          double max_row = 0.0;
                          std::vector<double> col_sums;
                          for (const auto& row : m.rows) {
                            double s = 0.0;
                            if (col_sums.size() < row.size()) col_sums.resize(row.size(), 0.0);
                            for (std::size_t j = 0; j < row.size(); ++j) {
                              s += row[j];
                              col_sums[j] += row[j];
                            }
                            max_row = std::max(max_row, s);
                          }
                          double max_col = 0.0;
                          for (double s : col_sums) max_col = std::max(max_col, s);
                          return std::sqrt(max_row * max_col);
                        },
                    },
                    spec_);
}

// ---------------------------------------------------------------------------

DiagnosticsReport check_bc1(const EventSequenceModel& model, Index depth) {
  if (depth == 0) throw Error(ErrorCode::InvalidArgument, "scan depth must be >= 1");
  if (auto len = model.length(); len) depth = std::min(depth, *len);
  DiagnosticsReport r;
  r.condition = ConditionId::Bc1;
  r.scan_range = {1, depth};
  kernels::CompensatedSum partial;
  for (Index n = 1; n <= depth; ++n) partial.add(model.marginal(n));
  const auto tail = model.marginal_tail_sum(depth + 1);
  Witness w;
  w.values.emplace_back("partial_sum", partial.value());
  if (tail) {
    w.values.emplace_back("tail_bound", *tail);
    w.values.emplace_back("total_bound", partial.value() + *tail);
    r.verdict = Verdict::Holds;
  } else {
    r.verdict = Verdict::Inconclusive;
    r.notes.emplace_back("reason", "no finite tail certificate for sum of P(A_n)");
  }
  r.witness = std::move(w);
  return r;
}

KochenStoneResult kochen_stone_ratio(const EventSequenceModel& model, const std::vector<Index>& m_grid,
                                     double epsilon) {
  require_grid(m_grid);
  const MomentTable table = moments(model, m_grid.back());
  KochenStoneResult out;
  std::optional<double> running;
  Index arg_inf = 0;
  std::vector<std::size_t> valid;
  for (Index m : m_grid) {
    const MomentRow& row = table.at(m);
    out.rows.push_back(row);
    if (!row.ratio) {
      out.zero_mean_points.push_back(m);
    } else {
      valid.push_back(out.rows.size() - 1);
      if (!running || *row.ratio < *running) {
        running = row.ratio;
        arg_inf = m;
      }
    }
    out.running_infimum.push_back(running);
  }

  DiagnosticsReport& r = out.report;
  r.condition = ConditionId::KochenStone;
  r.scan_range = {m_grid.front(), m_grid.back()};
  r.notes.emplace_back("epsilon", format_double(epsilon));
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    if (out.rows[i].ratio) r.series.emplace_back(out.rows[i].m, *out.rows[i].ratio);
  }
  if (!out.zero_mean_points.empty()) {
    r.notes.emplace_back("zero_mean_points", std::to_string(out.zero_mean_points.size()));
  }
  if (!running) {
    r.verdict = Verdict::Inconclusive;
    r.notes.emplace_back("reason", "E S_m = 0 on the whole grid");
    return out;
  }
  Witness w;
  w.indices.push_back(arg_inf);
  w.values.emplace_back("running_infimum", *running);
  const double last = *out.rows[valid.back()].ratio;
  const double middle = *out.rows[valid[valid.size() / 2]].ratio;
  w.values.emplace_back("last_ratio", last);
  r.witness = std::move(w);
  const bool decreasing = last <= middle;
  r.verdict = (*running < epsilon && decreasing) ? Verdict::Holds : Verdict::Inconclusive;
  r.notes.emplace_back("trend", decreasing ? "nonincreasing" : "not decreasing");
  return out;
}

DiagnosticsReport check_pairwise_independent(const EventSequenceModel& model, Index n, double tol) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "scan size must be >= 2");
  if (auto len = model.length(); len) n = std::min(n, *len);
  const auto p = marginals_up_to(model, n);
  DiagnosticsReport r;
  r.condition = ConditionId::PairwiseIndependence;
  r.scan_range = {1, n};
  std::optional<Witness> first_violation;
  double max_gap = 0.0;
  Index max_i = 1;
  Index max_j = 2;
  for (Index i = 1; i <= n; ++i) {
    for (Index j = i + 1; j <= n; ++j) {
      const double joint = model.pair(i, j);
      const double product = p[i - 1] * p[j - 1];
      const double gap = std::abs(joint - product);
      if (gap > max_gap) {
        max_gap = gap;
        max_i = i;
        max_j = j;
      }
      if (gap > tol && !first_violation) {
        first_violation = Witness{{i, j}, {{"pair", joint}, {"product", product}, {"gap", gap}}};
      }
    }
  }
  if (first_violation) {
    r.verdict = Verdict::Fails;
    first_violation->values.emplace_back("max_gap", max_gap);
    first_violation->values.emplace_back("max_gap_i", static_cast<double>(max_i));
    first_violation->values.emplace_back("max_gap_j", static_cast<double>(max_j));
    r.witness = std::move(first_violation);
  } else {
    r.verdict = Verdict::Holds;
    r.witness = Witness{{max_i, max_j}, {{"max_gap", max_gap}}};
  }
  r.notes.emplace_back("scope", "pairwise relations only; higher-order independence is not tested");
  return r;
}

DiagnosticsReport check_mixing_condition(const EventSequenceModel& model, const MixingProfile& profile,
                                         Index n, double tol) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "scan size must be >= 2");
  if (auto len = model.length(); len) n = std::min(n, *len);
  const auto p = marginals_up_to(model, n);
  DiagnosticsReport r;
  r.condition = ConditionId::Mixing;
  r.scan_range = {1, n};
  r.notes.emplace_back("rho_l1_bound", format_double(profile.l1_bound()));
  double min_slack = INFINITY;
  Witness binding;
  for (Index i = 1; i <= n; ++i) {
    for (Index j = i + 1; j <= n; ++j) {
      const double cov = model.pair(i, j) - p[i - 1] * p[j - 1];
      const double rho = profile.rho(j - i);
      const double bound = rho * (p[i - 1] + p[j - 1]);
      const double slack = bound - cov;
      if (slack < min_slack) {
        min_slack = slack;
        binding = Witness{{i, j}, {{"covariance", cov}, {"bound", bound}, {"rho", rho}}};
      }
      if (cov > bound + tol) {
        r.verdict = Verdict::Fails;
        r.witness = Witness{{i, j}, {{"covariance", cov}, {"bound", bound}, {"rho", rho}}};
        return r;
      }
    }
  }
  r.verdict = Verdict::Holds;
  r.witness = std::move(binding);
  return r;
}

DiagnosticsReport check_matrix_condition(const EventSequenceModel& model, const CorrelationMatrixSpec& spec,
                                         Index n, double norm_cap, double tol) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "scan size must be >= 2");
  if (auto len = model.length(); len) n = std::min(n, *len);
  const auto p = marginals_up_to(model, n);
  DiagnosticsReport r;
  r.condition = ConditionId::MatrixCondition;
  r.scan_range = {1, n};

  std::optional<Witness> violation;
  for (Index i = 1; i <= n && !violation; ++i) {
    for (Index j = i + 1; j <= n; ++j) {
      const double cov = model.pair(i, j) - p[i - 1] * p[j - 1];
      const double scale = std::sqrt(p[i - 1] * p[j - 1]);
      const double bound = std::min(spec.entry(i, j), spec.entry(j, i)) * scale;
      if (cov > bound + tol) {
        violation = Witness{{i, j}, {{"covariance", cov}, {"bound", bound}}};
        break;
      }
    }
  }

  std::vector<Index> sizes;
  for (Index s = 1; s <= n; s *= 2) sizes.push_back(s);
  if (sizes.back() != n) sizes.push_back(n);
  double max_norm = 0.0;
  for (Index s : sizes) {
    DenseMatrix m(s, s);
    for (Index i = 1; i <= s; ++i) {
      for (Index j = 1; j <= s; ++j) m(i - 1, j - 1) = spec.entry(i, j);
    }
    const double norm = operator_norm_estimate(m).value;
    r.series.emplace_back(s, norm);
    max_norm = std::max(max_norm, norm);
  }
  r.notes.emplace_back("norm_cap", format_double(norm_cap));
  if (auto sb = spec.schur_bound()) r.notes.emplace_back("schur_bound", format_double(*sb));

  if (violation) {
    r.verdict = Verdict::Fails;
    r.witness = std::move(violation);
  } else if (max_norm <= norm_cap) {
    r.verdict = Verdict::Holds;
    r.witness = Witness{{n}, {{"max_truncation_norm", max_norm}}};
  } else {
    r.verdict = Verdict::Inconclusive;
    r.witness = Witness{{n}, {{"max_truncation_norm", max_norm}}};
    r.notes.emplace_back("reason", "truncation norms exceed the cap; boundedness not evidenced");
  }
  return r;
}

DiagnosticsReport check_xz_conditions(const EventSequenceModel& model, double c, double delta,
                                      const std::vector<Index>& m_grid, double tol) {
  if (!(c > 0.0) || !(delta > 0.0)) throw Error(ErrorCode::ValueError, "C and delta must be positive");
  require_grid(m_grid);
  const MomentTable table = moments(model, m_grid.back());
  DiagnosticsReport r;
  r.condition = ConditionId::Xz;
  r.scan_range = {m_grid.front(), m_grid.back()};
  bool strong_everywhere = true;
  bool undecided = false;
  std::size_t skipped = 0;
  for (Index m : m_grid) {
    const MomentRow& row = table.at(m);
    const double strong_rhs = c * std::pow(row.mean, 2.0 - delta);
    const bool strong_ok = row.variance <= strong_rhs + tol;
    r.series.emplace_back(m, row.variance);
    if (strong_ok) continue;
    strong_everywhere = false;
    if (row.mean <= 1.0) {
      // ln E S_m <= 0: the weak form is undefined here.
      ++skipped;
      undecided = true;
      continue;
    }
    const double weak_rhs = c * row.mean * row.mean / std::pow(std::log(row.mean), 1.0 + delta);
    if (row.variance > weak_rhs + tol) {
      r.verdict = Verdict::Fails;
      r.witness = Witness{{m},
                          {{"variance", row.variance},
                           {"mean", row.mean},
                           {"strong_bound", strong_rhs},
                           {"weak_bound", weak_rhs}}};
      break;
    }
  }
  if (skipped > 0) r.notes.emplace_back("weak_form_skipped", std::to_string(skipped));
  const double first_mean = table.at(m_grid.front()).mean;
  const double last_mean = table.at(m_grid.back()).mean;
  r.notes.emplace_back("mean_diverging", (last_mean >= 2.0 * first_mean && last_mean > first_mean) ? "yes" : "no");
  if (r.verdict == Verdict::Fails) return r;
  if (strong_everywhere) {
    r.verdict = Verdict::Holds;
    r.notes.emplace_back("form", "strong");
  } else if (!undecided) {
    r.verdict = Verdict::Holds;
    r.notes.emplace_back("form", "weak");
  } else {
    r.verdict = Verdict::Inconclusive;
  }
  return r;
}

}  // namespace bclab
