#include "bclab/block_builder.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "bclab/kernels.hpp"

namespace bclab {

namespace {

// Least x in (known_fail, limit] with pass(x), for predicates monotone in x.
// Returns 0 if pass(limit) is false.
Index gallop_least(Index known_fail, Index limit, const std::function<bool(Index)>& pass) {
  Index lo = known_fail;
  Index step = 1;
  Index hi = 0;
  while (true) {
    Index probe = (limit - lo > step) ? lo + step : limit;
    if (pass(probe)) {
      hi = probe;
      break;
    }
    if (probe == limit) return 0;
    lo = probe;
    step *= 2;
  }
  while (hi - lo > 1) {
    const Index mid = lo + (hi - lo) / 2;
    if (pass(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

Index effective_limit(const EventSequenceModel& model, Index limit) {
  if (auto len = model.length(); len && *len < limit) return *len;
  return limit;
}

}  // namespace

BlockPlan build_blocks_theorem_a(const EventSequenceModel& model, std::size_t block_count,
                                 Index scan_limit, TailSource source) {
  if (block_count == 0) throw Error(ErrorCode::InvalidArgument, "block count must be >= 1");
  if (scan_limit == 0) throw Error(ErrorCode::InvalidArgument, "scan limit must be >= 1");
  if (source == TailSource::Exact && !model.tail_union_exact(1)) {
    throw Error(ErrorCode::InvalidArgument, "model has no exact tail probabilities");
  }
  const Index limit = effective_limit(model, scan_limit);
  auto tail = [&](Index n) {
    return source == TailSource::Exact ? *model.tail_union_exact(n) : model.tail_union_upper(n);
  };

  BlockPlan plan;
  plan.construction = PlanConstruction::TheoremA;
  Index previous = 0;
  for (std::size_t k = 1; k <= block_count; ++k) {
    const double threshold = std::ldexp(1.0, -static_cast<int>(k));
    auto pass = [&](Index n) { return tail(n) <= threshold; };
    const Index n_k = previous < limit ? gallop_least(previous, limit, pass) : 0;
    if (n_k == 0) {
      // Doubling-grid evidence on whether the tail decays at all.
      const double first = tail(1);
      double last = first;
      for (Index n = 1; n <= limit; n *= 2) last = tail(n);
      last = std::min(last, tail(limit));
      const bool flat = last >= first;
      throw PlanConstructionError(
          flat ? ErrorCode::TailDoesNotVanish : ErrorCode::ScanLimitExceeded,
          "block " + std::to_string(k) + ": tail bound stays above 2^-" + std::to_string(k) +
              " up to N = " + std::to_string(limit),
          plan);
    }
    BlockCertificate cert;
    cert.value = tail(n_k);
    cert.exact_tail = model.tail_union_exact(n_k);
    plan.boundaries.push_back(n_k);
    plan.certificates.push_back(cert);
    previous = n_k;
  }
  return plan;
}

BlockPlan build_blocks_theorem_b(const EventSequenceModel& model, std::size_t block_count,
                                 Index scan_limit) {
  if (block_count == 0) throw Error(ErrorCode::InvalidArgument, "block count must be >= 1");
  if (scan_limit == 0) throw Error(ErrorCode::InvalidArgument, "scan limit must be >= 1");
  BlockPlan plan;
  plan.construction = PlanConstruction::TheoremB;
  Index previous = 0;
  for (std::size_t k = 1; k <= block_count; ++k) {
    const double threshold = std::ldexp(1.0, -static_cast<int>(k));
    const Index window_end = effective_limit(model, previous + scan_limit);
    auto avoid = [&](Index m) { return model.range_avoid(previous, m); };
    auto pass = [&](Index m) { return avoid(m) < threshold; };
    const Index n_k = previous < window_end ? gallop_least(previous, window_end, pass) : 0;
    if (n_k == 0) {
      bool saturated = true;
      if (window_end > previous + 1) {
        const Index half = previous + (window_end - previous) / 2;
        const double at_end = avoid(window_end);
        saturated = at_end >= avoid(half);
        // Certified: P(no A_j, j > previous) >= avoid(end) * (1 - sum_{j > end} p_j).
        if (!saturated && !model.length()) {
          if (auto rest = model.marginal_tail_sum(window_end + 1); rest && *rest < 1.0) {
            saturated = at_end * (1.0 - *rest) >= threshold;
          }
        }
      }
      throw PlanConstructionError(
          saturated ? ErrorCode::CoverageUnreachable : ErrorCode::ScanLimitExceeded,
          "block " + std::to_string(k) + ": union probability stays <= 1 - 2^-" + std::to_string(k) +
              " over (" + std::to_string(previous) + ", " + std::to_string(window_end) + "]",
          plan);
    }
    BlockCertificate cert;
    cert.complement = avoid(n_k);
    cert.value = 1.0 - cert.complement;
    plan.boundaries.push_back(n_k);
    plan.certificates.push_back(cert);
    previous = n_k;
  }
  return plan;
}

BlockProbabilities block_probabilities(const EventSequenceModel& model, const BlockPlan& plan) {
  validate(plan);
  BlockProbabilities out;
  kernels::CompensatedSum running;
  for (std::size_t k = 1; k <= plan.block_count(); ++k) {
    const auto r = plan.block(k);
    const double complement = model.range_avoid(r.lo, r.hi);
    out.complements.push_back(complement);
    out.probabilities.push_back(1.0 - complement);
    running.add(1.0 - complement);
    out.partial_sums.push_back(running.value());
  }
  return out;
}

std::shared_ptr<const DerivedModel> blocked_model(ModelPtr base, const BlockPlan& plan) {
  validate(plan);
  if (plan.boundaries.empty()) throw Error(ErrorCode::InvalidArgument, "plan has no blocks");
  std::vector<IndexRange> ranges;
  for (std::size_t k = 1; k <= plan.block_count(); ++k) ranges.push_back(plan.block(k));
  return std::make_shared<const DerivedModel>(std::move(base), std::move(ranges), "blocked");
}

}  // namespace bclab
