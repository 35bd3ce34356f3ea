#include "bclab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>

#include "bclab/error.hpp"
#include "bclab/kernels.hpp"
#include "bclab/moments.hpp"
#include "bclab/rng.hpp"

namespace bclab {

namespace {

// Runs body(r) for r in [0, count). Each r writes only its own output slot.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t threads = std::min<std::size_t>(replication_threads(), count);
  if (threads <= 1) {
    for (std::size_t r = 0; r < count; ++r) body(r);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t r = t; r < count; r += threads) body(r);
    });
  }
}

double quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 64;
  if (values.size() <= kLeaf) return kernels::compensated_sum(values);
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

unsigned replication_threads() {
  if (const char* env = std::getenv("BC_LAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

PathSample sample_path(const EventSequenceModel& model, Index n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "path length must be >= 1");
  PathSample out;
  out.seed = seed;
  out.indicators = model.sample_prefix(seed, n);
  out.partial_sums.resize(n);
  std::uint32_t running = 0;
  for (Index k = 0; k < n; ++k) {
    running += out.indicators[k];
    out.partial_sums[k] = running;
  }
  return out;
}

EmpiricalMoments empirical_moments(const EventSequenceModel& model, Index m, std::size_t paths,
                                   std::uint64_t seed, bool with_exact) {
  if (paths < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 paths");
  if (m == 0) throw Error(ErrorCode::IndexOutOfRange, "m must be >= 1");
  std::vector<double> sums(paths);
  parallel_for(paths, [&](std::size_t r) {
    const auto path = model.sample_prefix(derive_seed(seed, r), m);
    sums[r] = static_cast<double>(kernels::count_set(path));
  });

  const double n = static_cast<double>(paths);
  EmpiricalMoments out;
  out.m = m;
  out.paths = paths;
  out.seed = seed;
  out.mean_hat = pairwise_sum(sums) / n;
  std::vector<double> sq(paths);
  std::vector<double> quad(paths);
  for (std::size_t r = 0; r < paths; ++r) {
    const double d = sums[r] - out.mean_hat;
    sq[r] = d * d;
    quad[r] = sq[r] * sq[r];
  }
  const double ss = pairwise_sum(sq);
  out.var_hat = std::max(0.0, ss / (n - 1.0));
  out.se_mean = std::sqrt(out.var_hat / n);
  const double m4 = pairwise_sum(quad) / n;
  const double var_se_sq = (m4 - out.var_hat * out.var_hat * (n - 3.0) / (n - 1.0)) / n;
  out.se_var = std::sqrt(std::max(0.0, var_se_sq));
  if (with_exact) {
    const MomentTable table = moments(model, m);
    out.exact_mean = table.at(m).mean;
    out.exact_var = table.at(m).variance;
  }
  return out;
}

PathConsistency block_path_consistency(const PathSample& path, const BlockPlan& plan,
                                       std::optional<std::span<const std::uint8_t>> block_indicators) {
  validate(plan);
  if (path.indicators.size() < plan.last_boundary()) {
    throw Error(ErrorCode::PathTooShort, "path has " + std::to_string(path.indicators.size()) +
                                             " steps, plan needs " + std::to_string(plan.last_boundary()));
  }
  if (block_indicators && block_indicators->size() < plan.block_count()) {
    throw Error(ErrorCode::PathTooShort, "fewer block indicators than blocks");
  }
  PathConsistency out;
  const std::span<const std::uint8_t> ind(path.indicators);
  for (std::size_t k = 1; k <= plan.block_count(); ++k) {
    const IndexRange r = plan.block(k);
    const bool by_scan = kernels::any_set(ind.subspan(r.lo, r.size()));
    const std::uint32_t before = r.lo == 0 ? 0 : path.partial_sums[r.lo - 1];
    const bool by_count = path.partial_sums[r.hi - 1] > before;
    bool ok = by_scan == by_count;
    if (block_indicators) ok = ok && ((*block_indicators)[k - 1] != 0) == by_scan;
    if (!ok && out.holds) {
      out.holds = false;
      out.first_failing_block = k;
    }
    out.block_sum += by_scan ? 1 : 0;
  }
  out.event_sum = plan.last_boundary() == 0 ? 0 : path.partial_sums[plan.last_boundary() - 1];
  if (kernels::count_set(ind.first(plan.last_boundary())) != out.event_sum) {
    out.holds = false;
    if (!out.first_failing_block) out.first_failing_block = plan.block_count();
  }
  if (out.block_sum > out.event_sum) {
    out.holds = false;
    if (!out.first_failing_block) out.first_failing_block = plan.block_count();
  }
  return out;
}

std::string_view to_string(GrowthClass g) {
  switch (g) {
    case GrowthClass::Saturating: return "saturating";
    case GrowthClass::LinearGrowth: return "linear-growth";
    case GrowthClass::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

GrowthEvidence growth_verdict(const EventSequenceModel& model, Index horizon, std::size_t paths,
                              std::uint64_t seed, const GrowthOptions& options) {
  if (horizon < 10) throw Error(ErrorCode::InvalidArgument, "horizon must be >= 10");
  if (paths < 10) throw Error(ErrorCode::InvalidArgument, "need at least 10 paths");
  GrowthEvidence out;
  out.options = options;
  for (unsigned w = options.windows; w >= 1; --w) {
    const Index lo = horizon >> w;
    const Index hi = horizon >> (w - 1);
    if (hi > lo) out.windows.push_back({{lo, hi}, 0});
  }

  const std::size_t nw = out.windows.size();
  std::vector<std::uint8_t> grew_late(paths);
  std::vector<Index> totals(paths);
  std::vector<Index> hits(paths * nw);
  parallel_for(paths, [&](std::size_t r) {
    const auto path = model.sample_prefix(derive_seed(seed, r), horizon);
    const std::span<const std::uint8_t> s(path);
    totals[r] = kernels::count_set(s);
    grew_late[r] = kernels::any_set(s.subspan(horizon / 2)) ? 1 : 0;
    for (std::size_t w = 0; w < nw; ++w) {
      const auto& range = out.windows[w].range;
      hits[r * nw + w] = kernels::count_set(s.subspan(range.lo, range.size()));
    }
  });

  out.max_sum = *std::max_element(totals.begin(), totals.end());
  out.min_sum = *std::min_element(totals.begin(), totals.end());
  out.fraction_growing_late =
      static_cast<double>(kernels::count_set(grew_late)) / static_cast<double>(paths);
  bool every_window_hit = nw > 0;
  for (std::size_t w = 0; w < nw; ++w) {
    Index lowest = hits[w];
    for (std::size_t r = 1; r < paths; ++r) lowest = std::min(lowest, hits[r * nw + w]);
    out.windows[w].min_hits = lowest;
    if (lowest == 0) every_window_hit = false;
  }
  if (every_window_hit) {
    out.classification = GrowthClass::LinearGrowth;
  } else if (out.fraction_growing_late <= options.saturating_fraction) {
    out.classification = GrowthClass::Saturating;
  }
  return out;
}

XzPathTable xz_ratio_paths(const EventSequenceModel& model, const std::vector<Index>& m_grid,
                           std::size_t paths, std::uint64_t seed, double window) {
  if (m_grid.empty()) throw Error(ErrorCode::InvalidArgument, "grid is empty");
  for (std::size_t i = 0; i < m_grid.size(); ++i) {
    if (m_grid[i] == 0 || (i > 0 && m_grid[i] <= m_grid[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "grid must be strictly increasing and start at >= 1");
    }
  }
  if (paths < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 paths");
  std::vector<double> means(m_grid.size());
  {
    kernels::CompensatedSum acc;
    std::size_t g = 0;
    for (Index n = 1; n <= m_grid.back(); ++n) {
      acc.add(model.marginal(n));
      if (n == m_grid[g]) means[g++] = acc.value();
    }
  }
  for (std::size_t g = 0; g < m_grid.size(); ++g) {
    if (!(means[g] > 0.0)) {
      throw Error(ErrorCode::ZeroMean, "E S_m = 0 at m = " + std::to_string(m_grid[g]));
    }
  }

  const std::size_t ng = m_grid.size();
  std::vector<double> ratios(paths * ng);
  parallel_for(paths, [&](std::size_t r) {
    const auto path = model.sample_prefix(derive_seed(seed, r), m_grid.back());
    Index running = 0;
    Index previous = 0;
    for (std::size_t g = 0; g < ng; ++g) {
      running += kernels::count_set(std::span(path).subspan(previous, m_grid[g] - previous));
      previous = m_grid[g];
      ratios[r * ng + g] = static_cast<double>(running) / means[g];
    }
  });

  XzPathTable out;
  out.window = window;
  std::vector<double> column(paths);
  for (std::size_t g = 0; g < ng; ++g) {
    for (std::size_t r = 0; r < paths; ++r) column[r] = ratios[r * ng + g];
    out.rows.push_back({m_grid[g], means[g], quantile(column, 0.05), quantile(column, 0.50),
                        quantile(column, 0.95)});
  }
  const auto& last = out.rows.back();
  out.converged = last.q05 >= 1.0 - window && last.q95 <= 1.0 + window;
  return out;
}

}  // namespace bclab
