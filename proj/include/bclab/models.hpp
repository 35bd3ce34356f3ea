#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bclab/event_model.hpp"
#include "bclab/finite_space.hpp"
#include "bclab/marginal_spec.hpp"

namespace bclab {

/// Mutually independent events with P(A_n) given by a closed marginal spec.
class IndependentModel final : public EventSequenceModel {
 public:
  explicit IndependentModel(MarginalSpec spec);

  std::string_view family() const override { return "independent"; }
  const MarginalSpec& spec() const noexcept { return spec_; }

 protected:
  double do_marginal(Index n) const override;
  double do_pair(Index i, Index j) const override;
  double do_avoid(std::span<const IndexRange> ranges) const override;
  double do_joint_union(std::span<const IndexRange> first,
                        std::span<const IndexRange> second) const override;
  double do_tail_union_upper(Index tail_start) const override;
  std::optional<double> do_tail_union_exact(Index tail_start) const override;
  std::optional<double> do_marginal_tail_sum(Index tail_start) const override;
  std::vector<std::uint8_t> do_sample_prefix(std::uint64_t seed, Index n) const override;

 private:
  double range_avoid_exact(IndexRange r) const;

  MarginalSpec spec_;
};

/// Events drawn from a fixed schedule over one finite space: A_n is
/// prefix[n-1] for n <= prefix.size(), afterwards the cycle repeats.
/// Everything is computed by atom-set algebra.
class FiniteStaticModel final : public EventSequenceModel {
 public:
  FiniteStaticModel(FiniteSpace space, std::vector<Event> prefix, std::vector<Event> cycle);

  std::string_view family() const override { return "finite_static"; }
  const FiniteSpace& space() const noexcept { return space_; }
  const std::vector<Event>& prefix() const noexcept { return prefix_; }
  const std::vector<Event>& cycle() const noexcept { return cycle_; }
  /// Schedule slot (0-based into prefix followed by cycle) of event n.
  std::size_t slot_of(Index n) const;
  const Event& event_at(Index n) const;
  /// Atom drawn for a path with this seed; indicators follow from the schedule.
  std::size_t sample_atom(std::uint64_t seed) const;

 protected:
  double do_marginal(Index n) const override;
  double do_pair(Index i, Index j) const override;
  double do_avoid(std::span<const IndexRange> ranges) const override;
  double do_joint_union(std::span<const IndexRange> first,
                        std::span<const IndexRange> second) const override;
  double do_tail_union_upper(Index tail_start) const override;
  std::optional<double> do_tail_union_exact(Index tail_start) const override;
  std::optional<double> do_marginal_tail_sum(Index tail_start) const override;
  std::vector<std::uint8_t> do_sample_prefix(std::uint64_t seed, Index n) const override;

 private:
  AtomSet union_over(std::span<const IndexRange> ranges) const;

  FiniteSpace space_;
  std::vector<Event> prefix_;
  std::vector<Event> cycle_;
  std::vector<double> weights_;
  std::vector<AtomSet> slot_sets_;
  std::vector<double> slot_probability_;
  // Pairwise intersection weights between slots; empty when there are too
  // many slots to tabulate.
  std::vector<double> slot_pair_;
};

/// Two-state chain X_1, X_2, ... on {0, 1} with A_n = {X_n = 1}.
class TwoStateMarkovModel final : public EventSequenceModel {
 public:
  using Matrix = std::array<double, 4>;  // row-major 2x2
  using Vector = std::array<double, 2>;

  TwoStateMarkovModel(Vector initial, Matrix transition);

  std::string_view family() const override { return "markov"; }
  const Vector& initial() const noexcept { return initial_; }
  const Matrix& transition() const noexcept { return transition_; }
  /// Distribution of X_n.
  Vector state_distribution(Index n) const;
  /// transition^steps, assembled from cached powers of two.
  Matrix transition_power(Index steps) const;

 protected:
  double do_marginal(Index n) const override;
  double do_pair(Index i, Index j) const override;
  double do_avoid(std::span<const IndexRange> ranges) const override;
  double do_tail_union_upper(Index tail_start) const override;
  std::optional<double> do_tail_union_exact(Index tail_start) const override;
  std::optional<double> do_marginal_tail_sum(Index tail_start) const override;
  std::vector<std::uint8_t> do_sample_prefix(std::uint64_t seed, Index n) const override;

 private:
  static constexpr int kPowers = 64;
  Vector apply(Vector v, const std::array<Matrix, kPowers>& powers, Index steps) const;

  Vector initial_;
  Matrix transition_;
  // transition^(2^k) and taboo^(2^k), where taboo = transition with the
  // column of state 1 zeroed (one step that must not land in state 1).
  std::array<Matrix, kPowers> transition_powers_{};
  std::array<Matrix, kPowers> taboo_powers_{};
};

/// Finite derived sequence whose k-th event is the union of a base range:
/// E_k = union of A_j over j in ranges[k-1]. Blocked models use contiguous
/// ranges (n_{k-1}, n_k]; subsequence models use singletons (n_k - 1, n_k].
class DerivedModel final : public EventSequenceModel {
 public:
  DerivedModel(ModelPtr base, std::vector<IndexRange> ranges, std::string family_name);

  std::string_view family() const override { return family_; }
  std::optional<Index> length() const override { return ranges_.size(); }
  const EventSequenceModel& base() const noexcept { return *base_; }
  const std::vector<IndexRange>& ranges() const noexcept { return ranges_; }

 protected:
  double do_marginal(Index n) const override;
  double do_pair(Index i, Index j) const override;
  double do_avoid(std::span<const IndexRange> ranges) const override;
  double do_joint_union(std::span<const IndexRange> first,
                        std::span<const IndexRange> second) const override;
  double do_tail_union_upper(Index tail_start) const override;
  std::optional<double> do_tail_union_exact(Index tail_start) const override;
  std::optional<double> do_marginal_tail_sum(Index tail_start) const override;
  std::vector<std::uint8_t> do_sample_prefix(std::uint64_t seed, Index n) const override;

 private:
  std::vector<IndexRange> map_to_base(std::span<const IndexRange> ranges) const;

  ModelPtr base_;
  std::vector<IndexRange> ranges_;
  std::string family_;
};

/// Model whose k-th event is A_{indices[k-1]}; indices strictly increasing.
std::shared_ptr<const DerivedModel> subsequence_model(ModelPtr base, const std::vector<Index>& indices);

}  // namespace bclab
