#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "percimpact/simulation.hpp"

using namespace percimpact;

namespace {

// Small world keeps most tests fast; experiments use the defaults.
const WorldParams kSmallWorld{40, 50, 4.0, 2.0, 1.1};

}  // namespace

TEST_CASE("world construction and the mu ramp") {
  const WorldModel world = build_world(WorldParams{}, 1);
  CHECK(world.total_values() == 80000);
  REQUIRE(world.series().size() == 400);
  CHECK(world.series().front().mu == Catch::Approx(4.0).margin(1e-12));
  CHECK(world.series().back().mu == Catch::Approx(2.0).margin(1e-12));
  // series 200 (1-based) of the default ramp
  CHECK(world.series()[199].mu == Catch::Approx(4.0 - 2.0 * 199.0 / 399.0).margin(1e-12));

  const WorldModel tiny = build_world(WorldParams{2, 1, 4.0, 2.0, 1.1}, 1);
  CHECK(tiny.total_values() == 2);
  CHECK(tiny.series()[0].mu == 4.0);
  CHECK(tiny.series()[1].mu == 2.0);

  CHECK_THROWS_AS(build_world(WorldParams{1, 10, 4, 2, 1.1}, 1), validation_error);
  CHECK_THROWS_AS(build_world(WorldParams{10, 0, 4, 2, 1.1}, 1), validation_error);
  CHECK_THROWS_AS(build_world(WorldParams{10, 10, 2, 4, 1.1}, 1), validation_error);
  CHECK_THROWS_AS(build_world(WorldParams{10, 10, 4, 2, 0}, 1), validation_error);
}

TEST_CASE("world values are duplicate-free and builds are deterministic") {
  const WorldModel a = build_world(kSmallWorld, 99);
  const WorldModel b = build_world(kSmallWorld, 99);
  const WorldModel c = build_world(kSmallWorld, 100);
  REQUIRE(a.values_descending() == b.values_descending());
  CHECK(a.values_descending() != c.values_descending());
  std::set<double> unique(a.values_descending().begin(), a.values_descending().end());
  CHECK(unique.size() == a.total_values());
}

TEST_CASE("threshold rank arithmetic") {
  const WorldModel world = build_world(kSmallWorld, 7);  // 2000 values
  const double t10 = world.threshold(PercentileLevel(10));
  std::size_t above = 0;
  for (double v : world.values_descending()) {
    if (v >= t10) ++above;
  }
  CHECK(above == 200);  // exactly floor(2000 * 10 / 100)
  CHECK(world.values_descending()[199] == t10);

  // x too small for the world size
  CHECK_THROWS_AS(world.threshold(PercentileLevel(0.01)), validation_error);
}

TEST_CASE("unit top counts partition the world top slice") {
  const WorldModel world = build_world(kSmallWorld, 3);
  for (double x : {50.0, 10.0, 1.0}) {
    const auto counts = world.unit_top_counts(PercentileLevel(x));
    std::size_t total = 0;
    for (const UnitTopCount& c : counts) {
      total += c.count;
      CHECK(c.ratio >= 0.0);
      CHECK(c.ratio <= 1.0);
    }
    CHECK(total == static_cast<std::size_t>(2000.0 * x / 100.0));
  }
}

TEST_CASE("ratio-vs-rank is decreasing and quadratic-shaped on a default world") {
  const WorldModel world = build_world(WorldParams{}, 11);
  const auto counts = world.unit_top_counts(PercentileLevel(10));
  std::size_t total = 0;
  std::vector<double> ranks, ratios;
  for (const UnitTopCount& c : counts) {
    total += c.count;
    ranks.push_back(static_cast<double>(c.unit_index + 1));
    ratios.push_back(c.ratio);
  }
  CHECK(total == 8000);
  const QuadraticFit quad = fit_quadratic(ranks, ratios);
  const LinearFit line = fit_linear(ranks, ratios);
  CHECK(quad.rss < line.rss);
}

TEST_CASE("profile target curves") {
  const SelectionProfile linear = make_profile(ProfileKind::linear);
  REQUIRE(linear.target_ratios.size() == 20);
  CHECK(linear.target_ratios.front() == Catch::Approx(0.30).margin(1e-12));
  CHECK(linear.target_ratios.back() == Catch::Approx(0.02).margin(1e-12));

  const SelectionProfile usa = make_profile(ProfileKind::usa);
  CHECK(usa.target_ratios.front() > 0.2);
  CHECK(usa.target_ratios.back() < 0.08);

  const SelectionProfile split = make_profile(ProfileKind::split);
  CHECK(std::count(split.target_ratios.begin(), split.target_ratios.end(), 0.22) == 7);
  CHECK(std::count(split.target_ratios.begin(), split.target_ratios.end(), 0.03) == 7);

  for (ProfileKind kind :
       {ProfileKind::linear, ProfileKind::usa, ProfileKind::uk, ProfileKind::split}) {
    const SelectionProfile profile = make_profile(kind);
    REQUIRE(profile.target_ratios.size() == 20);
    for (std::size_t i = 1; i < profile.target_ratios.size(); ++i) {
      CHECK(profile.target_ratios[i] <= profile.target_ratios[i - 1]);
    }
  }
}

TEST_CASE("greedy selection matches exact pools and hand traces") {
  const SelectionProfile profile = make_profile(ProfileKind::linear);
  std::vector<UnitTopCount> pool;
  for (std::size_t i = 0; i < profile.target_ratios.size(); ++i) {
    pool.push_back(UnitTopCount{i, 0, profile.target_ratios[i]});
  }
  // decoys further from every target than the exact matches
  for (std::size_t i = 0; i < 20; ++i) {
    pool.push_back(UnitTopCount{20 + i, 0, 0.6 + 0.01 * static_cast<double>(i)});
  }
  const auto selected = select_units(profile, pool);
  REQUIRE(selected.size() == 20);
  for (std::size_t i = 0; i < 20; ++i) CHECK(selected[i] == i);

  // two-target hand trace: 0.2 grabs 0.19, then 0.1 grabs 0.12
  SelectionProfile two;
  two.target_ratios = {0.2, 0.1};
  const std::vector<UnitTopCount> small{{0, 0, 0.19}, {1, 0, 0.12}, {2, 0, 0.05}};
  const auto picked = select_units(two, small);
  REQUIRE(picked.size() == 2);
  CHECK(picked[0] == 0);
  CHECK(picked[1] == 1);

  CHECK_THROWS_AS(select_units(profile, small), validation_error);
}

TEST_CASE("selection is without replacement") {
  const WorldModel world = build_world(WorldParams{}, 21);
  const auto pool = world.unit_top_counts(PercentileLevel(10));
  for (ProfileKind kind :
       {ProfileKind::linear, ProfileKind::usa, ProfileKind::uk, ProfileKind::split}) {
    const auto selected = select_units(make_profile(kind), pool);
    const std::set<std::size_t> unique(selected.begin(), selected.end());
    CHECK(unique.size() == 20);
  }
}

TEST_CASE("experiment satisfies the aggregation inequality") {
  for (ProfileKind kind :
       {ProfileKind::linear, ProfileKind::usa, ProfileKind::uk, ProfileKind::split}) {
    const ExperimentResult result = run_experiment(kind, 5);
    CHECK(result.cfal >= result.afcl);
    std::size_t top_sum = 0;
    for (std::size_t c : result.unit_counts) top_sum += c;
    CHECK(result.pooled_ratio ==
          Catch::Approx(static_cast<double>(top_sum) / 4000.0).margin(1e-12));
  }
}

TEST_CASE("AFCL from pooled counts equals AFCL from the combined series") {
  const WorldModel world = build_world(WorldParams{}, 33);
  const auto pool = world.unit_top_counts(PercentileLevel(10));
  const auto selected = select_units(make_profile(ProfileKind::usa), pool);

  // brute force: count the combined 4000 values against the world threshold
  const double threshold = world.threshold(PercentileLevel(10));
  std::size_t combined_count = 0, summed = 0;
  for (std::size_t idx : selected) {
    summed += pool[idx].count;
    for (double v : world.series()[idx].values) {
      if (v >= threshold) ++combined_count;
    }
  }
  CHECK(combined_count == summed);
}

TEST_CASE("replicate_study is deterministic and degenerates to one run") {
  const StudySummary once = replicate_study(ProfileKind::linear, 42, 1);
  REQUIRE(once.replicates.size() == 1);
  CHECK(once.pooled_ratio.median == once.replicates[0].pooled_ratio);
  CHECK(once.cfal.median == once.replicates[0].cfal);

  const StudySummary a = replicate_study(ProfileKind::split, 7, 5);
  const StudySummary b = replicate_study(ProfileKind::split, 7, 5);
  CHECK(a.gap_factor.median == b.gap_factor.median);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(a.replicates[i].cfal == b.replicates[i].cfal);
    CHECK(a.replicates[i].seed == b.replicates[i].seed);
  }
  CHECK_THROWS_AS(replicate_study(ProfileKind::uk, 1, 0), validation_error);
}
