#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "bclab/block_builder.hpp"
#include "bclab/error.hpp"
#include "bclab/montecarlo.hpp"
#include "bclab/presets.hpp"
#include "bclab/rng.hpp"

using namespace bclab;

TEST_CASE("counter rng is reproducible and roughly uniform") {
  CounterRng a(derive_seed(1, 0));
  CounterRng b(derive_seed(1, 0));
  CounterRng c(derive_seed(1, 1));
  double mean = 0;
  for (int i = 0; i < 100000; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    mean += x;
  }
  CHECK(mean / 100000 == doctest::Approx(0.5).epsilon(0.01));
  CHECK(CounterRng(derive_seed(1, 0)).next() != c.next());
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
}

TEST_CASE("pairwise sum is exact on small integers") {
  std::vector<double> v(10001, 1.0);
  CHECK(pairwise_sum(v) == 10001.0);
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("empirical moments do not depend on the thread count") {
  auto model = make_preset("", "symmetric");
  ::setenv("BC_LAB_THREADS", "1", 1);
  const auto one = empirical_moments(*model, 50, 3000, 77);
  ::setenv("BC_LAB_THREADS", "4", 1);
  const auto four = empirical_moments(*model, 50, 3000, 77);
  ::unsetenv("BC_LAB_THREADS");
  CHECK(one.mean_hat == four.mean_hat);
  CHECK(one.var_hat == four.var_hat);
  CHECK(one.se_var == four.se_var);
  const auto other = empirical_moments(*model, 50, 3000, 78);
  CHECK(other.mean_hat != one.mean_hat);
  CHECK_THROWS_AS(empirical_moments(*model, 50, 1, 77), Error);
}

TEST_CASE("empirical frequencies track the exact engine") {
  for (const char* name : {"fair_coin", "symmetric", "paper_s3", "power_law"}) {
    auto model = make_preset("", name);
    const auto e = empirical_moments(*model, 20, 20000, 5);
    CHECK(std::abs(e.mean_hat - *e.exact_mean) <= 4 * e.se_mean + 1e-12);
    CHECK(std::abs(e.var_hat - *e.exact_var) <= 5 * e.se_var + 1e-12);
  }
  // Single-index frequencies for the chain.
  auto chain = make_preset("", "symmetric");
  const std::size_t n = 20000;
  double hits = 0;
  double both = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const auto p = chain->sample_prefix(derive_seed(9, r), 5);
    hits += p[2];
    both += p[2] * p[4];
  }
  CHECK(std::abs(hits / n - chain->marginal(3)) <= 4 * std::sqrt(0.25 / n));
  CHECK(std::abs(both / n - chain->pair(3, 5)) <= 4 * std::sqrt(0.25 / n));
}

TEST_CASE("block path consistency") {
  auto model = make_preset("", "fair_coin");
  const BlockPlan plan = build_blocks_theorem_b(*model, 8);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const PathSample path = sample_path(*model, plan.last_boundary(), derive_seed(3, s));
    CHECK(block_path_consistency(path, plan).holds);
  }
  PathSample path = sample_path(*model, plan.last_boundary(), 1);
  // Blocked-model indicators that disagree with the path must be caught.
  std::vector<std::uint8_t> wrong(plan.block_count(), 0);
  bool any = false;
  for (std::size_t k = 1; k <= plan.block_count(); ++k) {
    const auto b = plan.block(k);
    for (Index j = b.lo; j < b.hi; ++j) any = any || path.indicators[j];
  }
  if (any) {
    const auto r = block_path_consistency(path, plan, std::span<const std::uint8_t>(wrong));
    CHECK_FALSE(r.holds);
    CHECK(r.first_failing_block.has_value());
  }
  // Corrupted running sums are caught too.
  path.partial_sums.back() += 5;
  CHECK_FALSE(block_path_consistency(path, plan).holds);
  PathSample shorter = sample_path(*model, 1, 1);
  CHECK_THROWS_AS(block_path_consistency(shorter, plan), Error);
}

TEST_CASE("blocked model sampling agrees with block maxima of the base path") {
  auto base = make_preset("", "symmetric");
  const BlockPlan plan = build_blocks_theorem_b(*base, 12);
  auto blocked = blocked_model(base, plan);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto seed = derive_seed(11, s);
    const PathSample path = sample_path(*base, plan.last_boundary(), seed);
    const auto blocks = blocked->sample_prefix(seed, plan.block_count());
    CHECK(block_path_consistency(path, plan, std::span<const std::uint8_t>(blocks)).holds);
  }
}

TEST_CASE("growth verdicts") {
  const auto sat = growth_verdict(*make_preset("", "power_law"), 4096, 500, 1);
  CHECK(sat.classification == GrowthClass::Saturating);
  const auto lin = growth_verdict(*make_preset("", "fair_coin"), 4096, 500, 1);
  CHECK(lin.classification == GrowthClass::LinearGrowth);
  CHECK(lin.windows.size() == 4);
  CHECK(to_string(GrowthClass::LinearGrowth) == "linear-growth");
  CHECK_THROWS_AS(growth_verdict(*make_preset("", "fair_coin"), 5, 500, 1), Error);
}

TEST_CASE("ratio quantiles") {
  const auto t = xz_ratio_paths(*make_preset("", "fair_coin"), {10, 100, 1000}, 2000, 4);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[2].q05 <= t.rows[2].q50);
  CHECK(t.rows[2].q50 <= t.rows[2].q95);
  CHECK(t.converged);
  // The paper_s3 preset never concentrates: S_m / E S_m keeps a spread near 1/2 .. 3/2.
  const auto s3 = xz_ratio_paths(*make_preset("", "paper_s3"), {10, 100, 1000}, 2000, 4);
  CHECK_FALSE(s3.converged);
  CHECK_THROWS_AS(xz_ratio_paths(IndependentModel(ConstantMarginal{0.0}), {5}, 100, 1), Error);
}
