#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bclab/block_plan.hpp"
#include "bclab/event_model.hpp"

namespace bclab {

/// One sampled prefix with its running counts S_1 <= S_2 <= ... <= S_n.
struct PathSample {
  std::vector<std::uint8_t> indicators;
  std::vector<std::uint32_t> partial_sums;
  std::uint64_t seed = 0;
};

PathSample sample_path(const EventSequenceModel& model, Index n, std::uint64_t seed);

/// Worker threads for replications: BC_LAB_THREADS if set (>= 1), otherwise
/// the hardware concurrency. Results never depend on this value.
unsigned replication_threads();

struct EmpiricalMoments {
  Index m = 0;
  double mean_hat = 0.0;
  double var_hat = 0.0;      // unbiased
  double se_mean = 0.0;      // sample std / sqrt(paths)
  double se_var = 0.0;       // standard error of var_hat from the 4th moment
  std::size_t paths = 0;
  std::uint64_t seed = 0;
  std::optional<double> exact_mean;
  std::optional<double> exact_var;
};

/// Replication r uses the stream derive_seed(seed, r). Sums are taken with a
/// fixed pairwise tree over replication order. Throws InvalidArgument for
/// fewer than 2 paths.
EmpiricalMoments empirical_moments(const EventSequenceModel& model, Index m, std::size_t paths,
                                   std::uint64_t seed, bool with_exact = true);

struct PathConsistency {
  bool holds = true;
  std::optional<std::size_t> first_failing_block;
  Index block_sum = 0;  // sum_k 1_{B_k}
  Index event_sum = 0;  // sum_{n <= n_K} 1_{A_n}
};

/// Checks 1_{B_k} = max_{j in block k} 1_{A_j} two ways (indicator scan and
/// partial-sum increments) and sum_k 1_{B_k} <= sum_n 1_{A_n}. When
/// block_indicators is given (e.g. from a blocked model sampled with the same
/// seed) it must agree too. Throws PathTooShort.
PathConsistency block_path_consistency(const PathSample& path, const BlockPlan& plan,
                                       std::optional<std::span<const std::uint8_t>> block_indicators = std::nullopt);

enum class GrowthClass { Saturating, LinearGrowth, Inconclusive };
std::string_view to_string(GrowthClass g);

struct GrowthOptions {
  /// Saturating when at most this fraction of paths still grows on (n/2, n].
  double saturating_fraction = 0.05;
  /// Number of trailing dyadic windows (n/2^w, n/2^(w-1)], ..., (n/2, n]; linear
  /// growth needs every path to hit every window.
  unsigned windows = 4;
};

struct GrowthWindow {
  IndexRange range;
  Index min_hits = 0;
};

/// Heuristic evidence about S = sum 1_{A_n}; never a proof.
struct GrowthEvidence {
  GrowthClass classification = GrowthClass::Inconclusive;
  double fraction_growing_late = 0.0;
  Index max_sum = 0;
  Index min_sum = 0;
  std::vector<GrowthWindow> windows;
  GrowthOptions options;
};

/// Throws InvalidArgument unless horizon >= 10 and paths >= 10.
GrowthEvidence growth_verdict(const EventSequenceModel& model, Index horizon, std::size_t paths,
                              std::uint64_t seed, const GrowthOptions& options = {});

struct RatioQuantiles {
  Index m = 0;
  double exact_mean = 0.0;
  double q05 = 0.0;
  double q50 = 0.0;
  double q95 = 0.0;
};

struct XzPathTable {
  std::vector<RatioQuantiles> rows;
  double window = 0.1;
  /// 5%-95% band at the largest m inside [1 - window, 1 + window].
  bool converged = false;
};

/// Quantiles (linear interpolation between order statistics) of S_m / E S_m.
/// Throws ZeroMean if E S_m = 0 at a grid point.
XzPathTable xz_ratio_paths(const EventSequenceModel& model, const std::vector<Index>& m_grid,
                           std::size_t paths, std::uint64_t seed, double window = 0.1);

/// Pairwise (tree) summation with a fixed shape; independent of scheduling.
double pairwise_sum(std::span<const double> values);

}  // namespace bclab
