#pragma once

#include <memory>
#include <vector>

#include "bclab/block_plan.hpp"
#include "bclab/error.hpp"
#include "bclab/models.hpp"

namespace bclab {

/// Raised when a construction cannot finish; carries the blocks built so far.
class PlanConstructionError : public Error {
 public:
  PlanConstructionError(ErrorCode code, const std::string& message, BlockPlan partial)
      : Error(code, message), partial_(std::move(partial)) {}
  const BlockPlan& partial_plan() const noexcept { return partial_; }

 private:
  BlockPlan partial_;
};

inline constexpr Index kDefaultTheoremAScanLimit = Index{1} << 26;
inline constexpr Index kDefaultTheoremBScanLimit = Index{1} << 20;

enum class TailSource {
  CertifiedBound,  // tail_union_upper
  Exact,           // tail_union_exact; InvalidArgument if the model has none
};

/// n_k = least N > n_{k-1} with tail(N) <= 2^-k, for k = 1..K.
///
/// The tail is nonincreasing in N, so the least N is found by galloping from
/// n_{k-1} + 1 and bisecting; `scan_limit` caps N. On failure throws
/// PlanConstructionError with TailDoesNotVanish when the tail shows no decay
/// over the doubling grid 1, 2, 4, ..., scan_limit, else ScanLimitExceeded.
BlockPlan build_blocks_theorem_a(const EventSequenceModel& model, std::size_t block_count,
                                 Index scan_limit = kDefaultTheoremAScanLimit,
                                 TailSource source = TailSource::CertifiedBound);

/// n_k = least M > n_{k-1} with P(A_{n_{k-1}+1} or ... or A_M) > 1 - 2^-k.
///
/// The strict threshold is evaluated on the complement, P(no A_j in the block)
/// < 2^-k, which keeps its precision for large k. Each inner search looks at
/// most `scan_limit` indices past n_{k-1}; on failure throws
/// PlanConstructionError with CoverageUnreachable when the coverage stopped
/// improving over the second half of the window or the marginal tail sum
/// certifies that it can never pass the threshold, else ScanLimitExceeded.
BlockPlan build_blocks_theorem_b(const EventSequenceModel& model, std::size_t block_count,
                                 Index scan_limit = kDefaultTheoremBScanLimit);

struct BlockProbabilities {
  std::vector<double> probabilities;  // P(B_k)
  std::vector<double> complements;    // P(no A_j in block k)
  std::vector<double> partial_sums;   // sum_{i <= k} P(B_i)
};

BlockProbabilities block_probabilities(const EventSequenceModel& model, const BlockPlan& plan);

/// Finite model whose k-th event is B_k.
std::shared_ptr<const DerivedModel> blocked_model(ModelPtr base, const BlockPlan& plan);

}  // namespace bclab
