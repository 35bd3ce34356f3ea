#include <algorithm>

#include "bclab/error.hpp"
#include "bclab/kernels.hpp"
#include "bclab/models.hpp"
#include "bclab/rng.hpp"

namespace bclab {

namespace {
constexpr std::size_t kMaxTabulatedSlots = 64;
}

FiniteStaticModel::FiniteStaticModel(FiniteSpace space, std::vector<Event> prefix,
                                     std::vector<Event> cycle)
    : space_(std::move(space)), prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
  if (cycle_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "schedule needs a non-empty cycle (eventually periodic)");
  }
  for (const auto& a : space_.atoms()) weights_.push_back(a.weight);
  auto add_slot = [this](const Event& e) {
    if (e.space_id() != space_.id()) throw Error(ErrorCode::SpaceMismatch, "scheduled event from another space");
    slot_sets_.push_back(AtomSet::from_event(space_.size(), e));
    slot_probability_.push_back(event_probability(space_, e));
  };
  for (const auto& e : prefix_) add_slot(e);
  for (const auto& e : cycle_) add_slot(e);

  const std::size_t slots = slot_sets_.size();
  if (slots <= kMaxTabulatedSlots) {
    slot_pair_.resize(slots * slots);
    for (std::size_t a = 0; a < slots; ++a) {
      for (std::size_t b = a; b < slots; ++b) {
        AtomSet both = slot_sets_[a];
        both &= slot_sets_[b];
        slot_pair_[a * slots + b] = slot_pair_[b * slots + a] = both.weight(weights_);
      }
    }
  }
}

std::size_t FiniteStaticModel::slot_of(Index n) const {
  if (n <= prefix_.size()) return static_cast<std::size_t>(n - 1);
  return prefix_.size() + static_cast<std::size_t>((n - prefix_.size() - 1) % cycle_.size());
}

const Event& FiniteStaticModel::event_at(Index n) const {
  const auto s = slot_of(n);
  return s < prefix_.size() ? prefix_[s] : cycle_[s - prefix_.size()];
}

double FiniteStaticModel::do_marginal(Index n) const { return slot_probability_[slot_of(n)]; }

double FiniteStaticModel::do_pair(Index i, Index j) const {
  const auto a = slot_of(i);
  const auto b = slot_of(j);
  if (!slot_pair_.empty()) return slot_pair_[a * slot_sets_.size() + b];
  AtomSet both = slot_sets_[a];
  both &= slot_sets_[b];
  return both.weight(weights_);
}

AtomSet FiniteStaticModel::union_over(std::span<const IndexRange> ranges) const {
  AtomSet acc(space_.size());
  const Index prefix_len = prefix_.size();
  const Index cycle_len = cycle_.size();
  for (const auto& r : ranges) {
    Index n = r.lo + 1;
    for (; n <= r.hi && n <= prefix_len; ++n) acc |= slot_sets_[n - 1];
    if (n > r.hi) continue;
    // Periodic part: a full period covers every cycle slot.
    const Index count = r.hi - n + 1;
    if (count >= cycle_len) {
      for (std::size_t s = 0; s < cycle_len; ++s) acc |= slot_sets_[prefix_len + s];
    } else {
      for (; n <= r.hi; ++n) acc |= slot_sets_[slot_of(n)];
    }
  }
  return acc;
}

double FiniteStaticModel::do_avoid(std::span<const IndexRange> ranges) const {
  return union_over(ranges).complement().weight(weights_);
}

double FiniteStaticModel::do_joint_union(std::span<const IndexRange> first,
                                         std::span<const IndexRange> second) const {
  AtomSet both = union_over(first);
  both &= union_over(second);
  return both.weight(weights_);
}

std::optional<double> FiniteStaticModel::do_tail_union_exact(Index tail_start) const {
  // Every slot reachable at or after tail_start: the remaining prefix plus the
  // whole cycle.
  AtomSet acc(space_.size());
  for (Index n = tail_start; n <= prefix_.size(); ++n) acc |= slot_sets_[n - 1];
  for (std::size_t s = 0; s < cycle_.size(); ++s) acc |= slot_sets_[prefix_.size() + s];
  return acc.weight(weights_);
}

double FiniteStaticModel::do_tail_union_upper(Index tail_start) const {
  return *do_tail_union_exact(tail_start);
}

std::optional<double> FiniteStaticModel::do_marginal_tail_sum(Index tail_start) const {
  for (std::size_t s = 0; s < cycle_.size(); ++s) {
    if (slot_probability_[prefix_.size() + s] > 0.0) return std::nullopt;
  }
  kernels::CompensatedSum sum;
  for (Index n = tail_start; n <= prefix_.size(); ++n) sum.add(slot_probability_[n - 1]);
  return sum.value();
}

std::size_t FiniteStaticModel::sample_atom(std::uint64_t seed) const {
  CounterRng rng(seed);
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t a = 0; a < weights_.size(); ++a) {
    if (weights_[a] <= 0.0) continue;
    last_positive = a;
    cumulative += weights_[a];
    if (u < cumulative) return a;
  }
  return last_positive;
}

std::vector<std::uint8_t> FiniteStaticModel::do_sample_prefix(std::uint64_t seed, Index n) const {
  const std::size_t atom = sample_atom(seed);
  std::vector<std::uint8_t> slot_hit(slot_sets_.size());
  for (std::size_t s = 0; s < slot_sets_.size(); ++s) slot_hit[s] = slot_sets_[s].test(atom) ? 1 : 0;
  std::vector<std::uint8_t> path(n);
  for (Index k = 1; k <= n; ++k) path[k - 1] = slot_hit[slot_of(k)];
  return path;
}

}  // namespace bclab
