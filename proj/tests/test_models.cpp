#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bclab/block_builder.hpp"
#include "bclab/error.hpp"
#include "bclab/models.hpp"
#include "bclab/presets.hpp"
#include "oracles.hpp"

using namespace bclab;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::IoError;
}

std::vector<IndexRange> random_ranges(std::mt19937_64& rng, Index len, int count) {
  std::uniform_int_distribution<Index> d(0, len - 1);
  std::vector<IndexRange> out;
  for (int i = 0; i < count; ++i) {
    Index a = d(rng);
    Index b = d(rng);
    if (a > b) std::swap(a, b);
    out.push_back({a, b + 1});
  }
  return out;
}

}  // namespace

TEST_CASE("finite space validation") {
  CHECK(code_of([] { make_finite_space({}); }) == ErrorCode::EmptySpace);
  CHECK(code_of([] { make_finite_space({{"a", 1.5}, {"b", -0.5}}); }) == ErrorCode::NegativeWeight);
  CHECK(code_of([] { make_finite_space({{"a", 0.5}, {"b", 0.4}}); }) == ErrorCode::WeightSumOutOfTolerance);
  auto s = make_finite_space({{"a", 0.5}, {"b", 0.5}});
  auto t = make_finite_space({{"a", 0.5}, {"b", 0.5}});
  CHECK(code_of([&] { Event::make(s, {0, 0}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { Event::make(s, {2}); }) == ErrorCode::IndexOutOfRange);
  CHECK(code_of([&] { event_probability(t, Event::make(s, {0})); }) == ErrorCode::SpaceMismatch);
  CHECK(event_probability(s, Event::full(s)) == 1.0);
  CHECK(event_probability(s, Event::empty(s)) == 0.0);
}

TEST_CASE("paper_s3 marginals and pairs") {
  auto m = paper_s3_model();
  for (Index n = 1; n <= 10; ++n) CHECK(m->marginal(n) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(m->pair(1, 3) == doctest::Approx(2.0 / 3.0));
  CHECK(m->pair(1, 2) == doctest::Approx(1.0 / 3.0));
  CHECK(m->range_union(0, 2) == doctest::Approx(1.0));
  CHECK(m->range_avoid(0, 2) == 0.0);
  CHECK(m->range_avoid(0, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(m->tail_union_upper(5) == doctest::Approx(1.0));
  CHECK_FALSE(m->marginal_tail_sum(1).has_value());
}

TEST_CASE("index validation is uniform across families") {
  std::vector<ModelPtr> models{make_preset("", "paper_s3"), make_preset("", "fair_coin"),
                               make_preset("", "power_law"), make_preset("", "symmetric")};
  for (const auto& m : models) {
    CHECK(code_of([&] { m->marginal(0); }) == ErrorCode::IndexOutOfRange);
    CHECK(code_of([&] { m->pair(0, 1); }) == ErrorCode::IndexOutOfRange);
    CHECK(code_of([&] { m->range_union(3, 3); }) == ErrorCode::EmptyRange);
    CHECK(code_of([&] { m->range_avoid(4, 2); }) == ErrorCode::EmptyRange);
    CHECK(code_of([&] { m->tail_union_upper(0); }) == ErrorCode::IndexOutOfRange);
  }
  auto sub = subsequence_model(make_preset("", "fair_coin"), {2, 5, 9});
  CHECK(sub->length() == 3);
  CHECK(code_of([&] { sub->marginal(4); }) == ErrorCode::IndexOutOfRange);
  CHECK(sub->tail_union_upper(4) == 0.0);
}

TEST_CASE("finite static model equals the atom enumeration oracle exactly") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t atoms = 1 + rng() % 10;
    // Dyadic weights: every partial sum is exact, so any summation order agrees.
    std::vector<std::uint64_t> units(atoms, 0);
    for (int u = 0; u < 1024; ++u) ++units[rng() % atoms];
    std::vector<Atom> list;
    oracle::AtomEnumeration o;
    for (std::size_t a = 0; a < atoms; ++a) {
      list.push_back({std::to_string(a), static_cast<double>(units[a]) / 1024.0});
      o.weights.push_back(static_cast<double>(units[a]) / 1024.0);
    }
    auto space = make_finite_space(list);
    auto random_event = [&] {
      std::vector<std::size_t> members;
      for (std::size_t a = 0; a < atoms; ++a) {
        if (rng() % 2) members.push_back(a);
      }
      return members;
    };
    const std::size_t prefix_len = rng() % 4;
    const std::size_t cycle_len = 1 + rng() % 4;
    std::vector<Event> prefix;
    std::vector<Event> cycle;
    for (std::size_t i = 0; i < prefix_len; ++i) {
      o.prefix.push_back(random_event());
      prefix.push_back(Event::make(space, o.prefix.back()));
    }
    for (std::size_t i = 0; i < cycle_len; ++i) {
      o.cycle.push_back(random_event());
      cycle.push_back(Event::make(space, o.cycle.back()));
    }
    const FiniteStaticModel model(space, prefix, cycle);
    const Index horizon = 16;
    for (Index n = 1; n <= horizon; ++n) {
      CHECK(model.marginal(n) == o.probability([&](std::size_t a) { return o.occurs(a, n); }));
      for (Index j = 1; j <= horizon; ++j) {
        CHECK(model.pair(n, j) == o.probability([&](std::size_t a) { return o.occurs(a, n) && o.occurs(a, j); }));
      }
      // Tail unions only need one period past n to be exact.
      const std::vector<IndexRange> tail{{n - 1, n + prefix_len + cycle_len + 1}};
      CHECK(*model.tail_union_exact(n) == o.probability([&](std::size_t a) { return o.any_in(a, tail); }));
    }
    for (int q = 0; q < 20; ++q) {
      const auto r1 = random_ranges(rng, horizon, 1 + static_cast<int>(rng() % 3));
      const auto r2 = random_ranges(rng, horizon, 1 + static_cast<int>(rng() % 3));
      CHECK(model.avoid_probability(r1) == o.probability([&](std::size_t a) { return !o.any_in(a, r1); }));
      CHECK(model.union_probability(r1) == o.probability([&](std::size_t a) { return o.any_in(a, r1); }));
      CHECK(model.joint_union_probability(r1, r2) ==
            o.probability([&](std::size_t a) { return o.any_in(a, r1) && o.any_in(a, r2); }));
    }
  }
}

TEST_CASE("markov model equals full path enumeration") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double i1 = u(rng);
    const double p01 = trial % 5 == 0 ? 0.0 : u(rng);
    const double p10 = u(rng);
    const std::array<double, 2> init{1 - i1, i1};
    const std::array<double, 4> p{1 - p01, p01, p10, 1 - p10};
    const TwoStateMarkovModel model(init, p);
    const Index len = 12;
    const oracle::MarkovEnumeration o(init, p, len);
    using E = oracle::MarkovEnumeration;
    for (Index n = 1; n <= len; ++n) {
      CHECK(std::abs(model.marginal(n) - o.probability([&](auto b) { return E::hit(b, n); })) <= 1e-12);
      for (Index j = 1; j <= len; ++j) {
        CHECK(std::abs(model.pair(n, j) - o.probability([&](auto b) { return E::hit(b, n) && E::hit(b, j); })) <=
              1e-12);
      }
      for (Index b = n; b <= len; ++b) {
        const std::vector<IndexRange> r{{n - 1, b}};
        CHECK(std::abs(model.range_union(n - 1, b) - o.probability([&](auto x) { return E::any_in(x, r); })) <=
              1e-12);
      }
    }
    for (int q = 0; q < 20; ++q) {
      const auto r1 = random_ranges(rng, len, 1 + static_cast<int>(rng() % 3));
      const auto r2 = random_ranges(rng, len, 1 + static_cast<int>(rng() % 3));
      CHECK(std::abs(model.avoid_probability(r1) - o.probability([&](auto x) { return !E::any_in(x, r1); })) <=
            1e-12);
      CHECK(std::abs(model.joint_union_probability(r1, r2) -
                     o.probability([&](auto x) { return E::any_in(x, r1) && E::any_in(x, r2); })) <= 1e-12);
    }
    if (p01 == 0.0) {
      // Absorbed in 0 once left: the tail union is just {X_N = 1}.
      for (Index n = 1; n <= len; ++n) {
        const std::vector<IndexRange> tail{{n - 1, len}};
        CHECK(std::abs(*model.tail_union_exact(n) - o.probability([&](auto x) { return E::any_in(x, tail); })) <=
              1e-12);
      }
    } else {
      CHECK(*model.tail_union_exact(3) == 1.0);
    }
  }
}

TEST_CASE("symmetric markov preset closed forms") {
  auto m = make_preset("markov", "symmetric");
  for (Index n = 1; n <= 30; ++n) {
    CHECK(m->marginal(n) == doctest::Approx(0.5).epsilon(1e-14));
    for (Index d = 1; d <= 10; ++d) {
      const double cov = m->pair(n, n + d) - 0.25;
      CHECK(cov == doctest::Approx(0.25 * std::pow(0.6, static_cast<double>(d))).epsilon(1e-12));
    }
  }
  // No visit to 1 over (0, n]: 0.5 * 0.8^(n-1).
  CHECK(m->range_avoid(0, 40) == doctest::Approx(0.5 * std::pow(0.8, 39)).epsilon(1e-12));
  CHECK(m->range_avoid(1000000, 1000050) == doctest::Approx(0.5 * std::pow(0.8, 49)).epsilon(1e-10));
}

TEST_CASE("independent model against direct products") {
  const IndependentModel m(PowerMarginal{1.0, 2.0, 1.0});
  for (Index n = 1; n <= 20; ++n) {
    CHECK(m.marginal(n) == doctest::Approx(1.0 / ((n + 1.0) * (n + 1.0))));
    CHECK(m.pair(n, n + 3) == doctest::Approx(m.marginal(n) * m.marginal(n + 3)));
  }
  long double prod = 1;
  for (Index j = 6; j <= 5000; ++j) prod *= 1.0L - 1.0L / ((j + 1.0L) * (j + 1.0L));
  CHECK(m.range_avoid(5, 5000) == doctest::Approx(static_cast<double>(prod)).epsilon(1e-13));
  // prod_{j=2}^{M} (1 - 1/j^2) = (M+1)/(2M), telescoping.
  const Index big = 3000000;
  CHECK(m.range_avoid(0, big - 1) == doctest::Approx((big + 1.0) / (2.0 * big)).epsilon(1e-12));
  const std::vector<IndexRange> a{{0, 3}};
  const std::vector<IndexRange> b{{5, 9}};
  CHECK(m.joint_union_probability(a, b) == doctest::Approx(m.union_probability(a) * m.union_probability(b)));

  const IndependentModel harmonic(HarmonicMarginal{0.5, 1.0});
  CHECK_FALSE(harmonic.marginal_tail_sum(1).has_value());
  CHECK(harmonic.tail_union_upper(100) == 1.0);
}

TEST_CASE("power tail certificate bounds the partial sums and is tight") {
  const IndependentModel m(PowerMarginal{1.0, 2.0, 1.0});
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double total = *m.marginal_tail_sum(1);
  CHECK(total >= pi2 / 6 - 1);
  CHECK(total - (pi2 / 6 - 1) <= 1e-12);
  for (Index start : {Index{1}, Index{7}, Index{100}, Index{5000}, Index{1} << 30}) {
    const double bound = *m.marginal_tail_sum(start);
    long double partial = 0;
    for (Index n = start; n < start + 200000; ++n) partial += 1.0L / ((n + 1.0L) * (n + 1.0L));
    CHECK(bound >= static_cast<double>(partial));
    // 1/(N+1) - 1/(2(N+1)^2) <= true tail.
    const double x = static_cast<double>(start) + 1.0;
    CHECK(bound <= (1.0 / x + 1.0 / (2 * x * x) + 1.0 / (6 * x * x * x)) * (1 + 1e-12));
    CHECK(m.tail_union_upper(start) <= std::min(1.0, bound) + 1e-300);
  }
  // Monotone in the start.
  double previous = 2.0;
  for (Index n = 1; n < 3000; n += 37) {
    const double t = m.tail_union_upper(n);
    CHECK(t <= previous);
    previous = t;
  }
  // Explicit lists have an exact finite tail.
  const IndependentModel e(ExplicitMarginal{{0.5, 0.25, 0.125}, 0.0});
  CHECK(*e.marginal_tail_sum(2) == doctest::Approx(0.375));
  CHECK(*e.tail_union_exact(2) == doctest::Approx(1 - 0.75 * 0.875));
  CHECK(*e.tail_union_exact(4) == 0.0);
}

TEST_CASE("marginal specs reject values outside [0,1]") {
  CHECK(code_of([] { IndependentModel m(ConstantMarginal{1.5}); }) == ErrorCode::ValueError);
  CHECK(code_of([] { IndependentModel m(PowerMarginal{2.0, 1.0, 0.0}); }) == ErrorCode::ValueError);
  CHECK(code_of([] { IndependentModel m(ExplicitMarginal{{0.2, -0.1}, 0.0}); }) == ErrorCode::ValueError);
  CHECK(code_of([] {
          TwoStateMarkovModel m({0.5, 0.5}, {0.5, 0.6, 0.5, 0.5});
        }) == ErrorCode::ValueError);
}

TEST_CASE("derived models follow the base through the oracle") {
  const std::array<double, 2> init{0.3, 0.7};
  const std::array<double, 4> p{0.6, 0.4, 0.35, 0.65};
  auto base = std::make_shared<const TwoStateMarkovModel>(init, p);
  const oracle::MarkovEnumeration o(init, p, 12);
  using E = oracle::MarkovEnumeration;
  const BlockPlan plan = user_plan({2, 3, 7, 12});
  auto blocked = blocked_model(base, plan);
  CHECK(blocked->length() == 4);
  for (std::size_t k = 1; k <= 4; ++k) {
    const std::vector<IndexRange> bk{plan.block(k)};
    CHECK(std::abs(blocked->marginal(k) - o.probability([&](auto x) { return E::any_in(x, bk); })) <= 1e-12);
    for (std::size_t l = 1; l <= 4; ++l) {
      const std::vector<IndexRange> bl{plan.block(l)};
      CHECK(std::abs(blocked->pair(k, l) -
                     o.probability([&](auto x) { return E::any_in(x, bk) && E::any_in(x, bl); })) <= 1e-12);
    }
    const std::vector<IndexRange> rest{{plan.boundaries[k - 1] - plan.block(k).size(), 12}};
    CHECK(std::abs(*blocked->tail_union_exact(k) - o.probability([&](auto x) { return E::any_in(x, rest); })) <=
          1e-12);
  }
  auto sub = subsequence_model(base, {1, 4, 5, 11});
  const std::vector<Index> idx{1, 4, 5, 11};
  for (std::size_t k = 1; k <= 4; ++k) {
    for (std::size_t l = 1; l <= 4; ++l) {
      CHECK(std::abs(sub->pair(k, l) -
                     o.probability([&](auto x) { return E::hit(x, idx[k - 1]) && E::hit(x, idx[l - 1]); })) <= 1e-12);
    }
  }
  CHECK(code_of([&] { subsequence_model(base, {3, 3}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("sampling is a deterministic function of the seed") {
  for (const char* name : {"paper_s3", "fair_coin", "symmetric", "power_law"}) {
    auto m = make_preset("", name);
    CHECK(m->sample_prefix(5, 200) == m->sample_prefix(5, 200));
    CHECK(m->sample_prefix(5, 200) != m->sample_prefix(6, 200));
    const auto longer = m->sample_prefix(5, 300);
    const auto shorter = m->sample_prefix(5, 200);
    CHECK(std::equal(shorter.begin(), shorter.end(), longer.begin()));
  }
  auto s3 = paper_s3_model();
  const auto path = s3->sample_prefix(42, 10);
  const std::size_t atom = s3->sample_atom(42);
  for (Index n = 1; n <= 10; ++n) CHECK(path[n - 1] == (s3->event_at(n).contains(atom) ? 1 : 0));
}
