#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace bclab {

/// Event indices are 1-based, matching A_1, A_2, ...
using Index = std::uint64_t;

/// Half-open index range (lo, hi], i.e. the indices lo+1, ..., hi.
struct IndexRange {
  Index lo = 0;
  Index hi = 0;

  Index size() const noexcept { return hi > lo ? hi - lo : 0; }
  bool empty() const noexcept { return hi <= lo; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Sorts ranges and merges overlapping or touching ones; drops empty ranges.
std::vector<IndexRange> normalize_ranges(std::span<const IndexRange> ranges);

/// Contract shared by every event-sequence family.
///
/// The public members validate arguments and forward to the do_* hooks, so
/// every family reports IndexOutOfRange / EmptyRange identically. Models are
/// immutable after construction; all members are safe for concurrent use.
class EventSequenceModel {
 public:
  virtual ~EventSequenceModel() = default;

  virtual std::string_view family() const = 0;
  /// Number of events for finite (derived) sequences; nullopt when infinite.
  virtual std::optional<Index> length() const { return std::nullopt; }

  /// P(A_n), n >= 1.
  double marginal(Index n) const;
  /// P(A_i and A_j); symmetric, equals marginal(i) on the diagonal.
  double pair(Index i, Index j) const;
  /// P(union of A_j over j in (a, b]), 0 <= a < b.
  double range_union(Index a, Index b) const;
  /// P(no A_j occurs for j in (a, b]) = 1 - range_union(a, b), computed
  /// directly so tiny complements keep their relative precision.
  double range_avoid(Index a, Index b) const;
  /// P(no A_j occurs for j in any of the ranges).
  double avoid_probability(std::span<const IndexRange> ranges) const;
  double union_probability(std::span<const IndexRange> ranges) const;
  /// P(U_first and U_second) where U_x is the union of A_j over ranges x.
  double joint_union_probability(std::span<const IndexRange> first,
                                 std::span<const IndexRange> second) const;
  /// Certified upper bound on P(union of A_n over n >= N); nonincreasing, <= 1.
  double tail_union_upper(Index tail_start) const;
  /// Exact P(union over n >= N) when the family can compute it.
  std::optional<double> tail_union_exact(Index tail_start) const;
  /// Certified upper bound on sum_{n >= N} P(A_n); nullopt when no finite
  /// certificate exists.
  std::optional<double> marginal_tail_sum(Index tail_start) const;
  /// Indicator path (1_{A_1}, ..., 1_{A_n}); deterministic in (seed, n).
  std::vector<std::uint8_t> sample_prefix(std::uint64_t seed, Index n) const;

 protected:
  virtual double do_marginal(Index n) const = 0;
  virtual double do_pair(Index i, Index j) const;
  /// Receives normalized, non-empty, in-range ranges.
  virtual double do_avoid(std::span<const IndexRange> ranges) const = 0;
  /// Receives normalized, non-empty, in-range ranges on both sides.
  virtual double do_joint_union(std::span<const IndexRange> first,
                                std::span<const IndexRange> second) const;
  virtual double do_tail_union_upper(Index tail_start) const = 0;
  virtual std::optional<double> do_tail_union_exact(Index) const { return std::nullopt; }
  virtual std::optional<double> do_marginal_tail_sum(Index tail_start) const = 0;
  virtual std::vector<std::uint8_t> do_sample_prefix(std::uint64_t seed, Index n) const = 0;

 private:
  void check_index(Index n) const;
  std::vector<IndexRange> checked_ranges(std::span<const IndexRange> ranges) const;
};

using ModelPtr = std::shared_ptr<const EventSequenceModel>;

}  // namespace bclab
