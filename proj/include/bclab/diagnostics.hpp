#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "bclab/event_model.hpp"
#include "bclab/moments.hpp"

namespace bclab {

// Report order when several checks are merged.
enum class ConditionId {
  Bc1,
  KochenStone,
  PairwiseIndependence,
  Mixing,
  MatrixCondition,
  Xz,
  BlockCertificates,
  Counterexample,
};

enum class Verdict { Holds, Fails, Inconclusive };

std::string_view to_string(ConditionId id);
std::string_view to_string(Verdict v);
/// Accepts the to_string spellings; throws ValueError otherwise.
ConditionId condition_from_string(std::string_view s);

/// Indices and named values showing a violation or the binding quantity.
struct Witness {
  std::vector<Index> indices;
  std::vector<std::pair<std::string, double>> values;

  std::optional<double> value(std::string_view name) const;
  friend bool operator==(const Witness&, const Witness&) = default;
};

/// Inclusive range of indices examined.
struct ScanRange {
  Index first = 1;
  Index last = 1;
  friend bool operator==(const ScanRange&, const ScanRange&) = default;
};

/// Invariant: a Fails verdict always carries a witness.
struct DiagnosticsReport {
  ConditionId condition = ConditionId::Bc1;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<Witness> witness;
  ScanRange scan_range;
  /// Auxiliary per-index series (e.g. truncation norms, running infima).
  std::vector<std::pair<Index, double>> series;
  std::vector<std::pair<std::string, std::string>> notes;

  std::optional<std::string> note(std::string_view key) const;
};

/// Stable sort by condition id.
std::vector<DiagnosticsReport> merge_reports(std::vector<DiagnosticsReport> reports);

inline constexpr double kDefaultCheckTolerance = 1e-9;

// ---------------------------------------------------------------------------
// Closed specifications for rho_k and M_{i,j}.

struct GeometricProfile {
  double c = 1.0;
  double r = 0.5;
  friend bool operator==(const GeometricProfile&, const GeometricProfile&) = default;
};
struct PowerProfile {
  double c = 1.0;
  double beta = 2.0;
  friend bool operator==(const PowerProfile&, const PowerProfile&) = default;
};
/// rho_k = values[k-1], zero past the end.
struct ExplicitProfile {
  std::vector<double> values;
  friend bool operator==(const ExplicitProfile&, const ExplicitProfile&) = default;
};

/// Summable sequence rho_1, rho_2, ... bounding the covariance at lag k.
class MixingProfile {
 public:
  using Spec = std::variant<GeometricProfile, PowerProfile, ExplicitProfile>;

  /// Throws ValueError unless the sequence is nonnegative and in l^1.
  explicit MixingProfile(Spec spec);

  const Spec& spec() const noexcept { return spec_; }
  double rho(Index lag) const;
  /// Analytic bound on sum_{k >= 1} rho_k.
  double l1_bound() const { return l1_bound_; }

 private:
  Spec spec_;
  double l1_bound_ = 0.0;
};

struct ZeroMatrix {
  friend bool operator==(const ZeroMatrix&, const ZeroMatrix&) = default;
};
struct ConstantMatrix {
  double c = 1.0;
  friend bool operator==(const ConstantMatrix&, const ConstantMatrix&) = default;
};
/// M_{i,j} = c r^{|i-j|}.
struct BandedMatrix {
  double c = 1.0;
  double r = 0.5;
  friend bool operator==(const BandedMatrix&, const BandedMatrix&) = default;
};
/// Finite top-left block; entries outside are zero.
struct ExplicitMatrix {
  std::vector<std::vector<double>> rows;
  friend bool operator==(const ExplicitMatrix&, const ExplicitMatrix&) = default;
};

class CorrelationMatrixSpec {
 public:
  using Spec = std::variant<ZeroMatrix, ConstantMatrix, BandedMatrix, ExplicitMatrix>;

  /// Throws ValueError for negative or non-finite entries.
  explicit CorrelationMatrixSpec(Spec spec);

  const Spec& spec() const noexcept { return spec_; }
  /// M_{i,j}, 1-based.
  double entry(Index i, Index j) const;
  /// Row-sum (Schur) bound on the l^2 operator norm when one exists.
  std::optional<double> schur_bound() const;

 private:
  Spec spec_;
};

// ---------------------------------------------------------------------------
// Checkers. All are pure functions of their arguments.

/// Sum of P(A_n) over n <= depth plus the model's tail certificate. Holds with
/// the total as witness when a certificate exists, inconclusive otherwise;
/// never reports divergence.
DiagnosticsReport check_bc1(const EventSequenceModel& model, Index depth);

struct KochenStoneResult {
  std::vector<MomentRow> rows;                       // grid points only
  std::vector<std::optional<double>> running_infimum;  // aligned with rows
  std::vector<Index> zero_mean_points;                // skipped grid points
  DiagnosticsReport report;
};

/// Var S_m / (E S_m)^2 along an increasing grid. Holds ("liminf plausibly 0")
/// when the running infimum drops below epsilon and the ratio at the last grid
/// point is no larger than at the middle of the valid grid; otherwise
/// inconclusive. Grid points with E S_m = 0 are skipped and listed.
KochenStoneResult kochen_stone_ratio(const EventSequenceModel& model, const std::vector<Index>& m_grid,
                                     double epsilon = 1e-3);

/// |P(A_i A_j) - P(A_i)P(A_j)| <= tol for all 1 <= i < j <= n. The witness on
/// failure is the first violating pair in scan order; the largest gap seen is
/// reported alongside it.
DiagnosticsReport check_pairwise_independent(const EventSequenceModel& model, Index n,
                                             double tol = kDefaultCheckTolerance);

DiagnosticsReport check_mixing_condition(const EventSequenceModel& model, const MixingProfile& profile,
                                         Index n, double tol = kDefaultCheckTolerance);

/// Pointwise inequality against M plus truncation norms of M on the doubling
/// sequence 1, 2, 4, ..., n (and n itself). Holds only when the inequality
/// holds and every norm is <= norm_cap; an exceeded cap is inconclusive.
DiagnosticsReport check_matrix_condition(const EventSequenceModel& model, const CorrelationMatrixSpec& spec,
                                         Index n, double norm_cap, double tol = kDefaultCheckTolerance);

/// Var S_m <= C (E S_m)^{2-delta} (strong) or
/// Var S_m <= C (E S_m)^2 / (ln E S_m)^{1+delta} (weak) along the grid.
DiagnosticsReport check_xz_conditions(const EventSequenceModel& model, double c, double delta,
                                      const std::vector<Index>& m_grid, double tol = kDefaultCheckTolerance);

}  // namespace bclab
