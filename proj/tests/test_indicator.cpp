#include <catch2/catch_amalgamated.hpp>

#include "percimpact/indicator.hpp"
#include "percimpact/random.hpp"

using namespace percimpact;

TEST_CASE("impact_ratio from published counts") {
  CHECK(impact_ratio(4803, 1149).value() == Catch::Approx(0.23922548).epsilon(1e-6));
  CHECK(impact_ratio(1000, 0).value() == 0.0);
  CHECK(impact_ratio(51927, 3584).value() == Catch::Approx(0.0690199).epsilon(1e-5));
}

TEST_CASE("impact_ratio rejects degenerate and inconsistent inputs") {
  CHECK_THROWS_AS(impact_ratio(0, 0), validation_error);
  CHECK_THROWS_AS(impact_ratio(-5, 0), validation_error);
  CHECK_THROWS_AS(impact_ratio(1, 2), validation_error);
}

TEST_CASE("level exponent is 2 - lg x") {
  CHECK(PercentileLevel(10).exponent() == Catch::Approx(1.0).margin(1e-15));
  CHECK(PercentileLevel(1).exponent() == Catch::Approx(2.0).margin(1e-15));
  CHECK(PercentileLevel(0.01).exponent() == Catch::Approx(4.0).margin(1e-12));
  CHECK(PercentileLevel(100).exponent() == Catch::Approx(0.0).margin(1e-15));
  CHECK_THROWS_AS(PercentileLevel(0), validation_error);
  CHECK_THROWS_AS(PercentileLevel(101), validation_error);
  CHECK_THROWS_AS(PercentileLevel(-3), validation_error);
}

TEST_CASE("top_probability worked values") {
  CHECK(top_probability(ImpactRatio(0.2), PercentileLevel(0.01)) ==
        Catch::Approx(0.0016).epsilon(1e-12));
  CHECK(top_probability(ImpactRatio(0.1), PercentileLevel(0.01)) ==
        Catch::Approx(0.0001).epsilon(1e-12));
  CHECK(top_probability(ImpactRatio(0.37), PercentileLevel(100)) == 1.0);
  // top 100% contains every paper even at ratio 0
  CHECK(top_probability(ImpactRatio(0.0), PercentileLevel(100)) == 1.0);
}

TEST_CASE("expected_top_count worked values") {
  CHECK(expected_top_count(500, ImpactRatio(0.2), PercentileLevel(0.01)) ==
        Catch::Approx(0.8).epsilon(1e-12));
  CHECK(expected_top_count(1000, ImpactRatio(0.1), PercentileLevel(0.01)) ==
        Catch::Approx(0.10).epsilon(1e-12));
  const ImpactRatio mit = impact_ratio(4803, 1149);
  CHECK(expected_top_count(4803, mit, PercentileLevel(0.01)) ==
        Catch::Approx(15.73).epsilon(0.005));
}

TEST_CASE("percentile_curve evaluates each level") {
  const ResearchUnit world_avg{"w", "world average", "", 1000, 100};
  const std::vector<PercentileLevel> levels{
      PercentileLevel(100), PercentileLevel(10), PercentileLevel(1),
      PercentileLevel(0.1), PercentileLevel(0.01)};
  const auto curve = percentile_curve(world_avg, levels);
  REQUIRE(curve.size() == 5);
  const double expected[] = {1000, 100, 10, 1, 0.1};
  for (std::size_t i = 0; i < curve.size(); ++i) {
    CHECK(curve[i].second == Catch::Approx(expected[i]).epsilon(1e-12));
  }

  const ResearchUnit strong{"s", "strong", "", 1000, 200};
  const std::vector<PercentileLevel> three{PercentileLevel(10), PercentileLevel(1),
                                           PercentileLevel(0.01)};
  const auto c2 = percentile_curve(strong, three);
  CHECK(c2[0].second == Catch::Approx(200).epsilon(1e-12));
  CHECK(c2[1].second == Catch::Approx(40).epsilon(1e-12));
  CHECK(c2[2].second == Catch::Approx(1.6).epsilon(1e-12));

  const ResearchUnit weak{"k", "weak", "", 1000, 50};
  const std::vector<PercentileLevel> two{PercentileLevel(10), PercentileLevel(1)};
  const auto c3 = percentile_curve(weak, two);
  CHECK(c3[0].second == Catch::Approx(50).epsilon(1e-12));
  CHECK(c3[1].second == Catch::Approx(2.5).epsilon(1e-12));

  CHECK_THROWS_AS(percentile_curve(ResearchUnit{"z", "", "", 0, 0}, two),
                  validation_error);
}

TEST_CASE("probability narrows with the percentile and squares at x=1") {
  RandomStream rng(2024);
  for (int i = 0; i < 200; ++i) {
    const double r = 0.001 + 0.998 * rng.next_unit();
    const ImpactRatio ratio(r);
    CHECK(top_probability(ratio, PercentileLevel(10)) == r);
    CHECK(top_probability(ratio, PercentileLevel(1)) ==
          Catch::Approx(r * r).epsilon(1e-14));
    double prev = top_probability(ratio, PercentileLevel(100));
    for (double x : {10.0, 1.0, 0.1, 0.01}) {
      const double p = top_probability(ratio, PercentileLevel(x));
      CHECK(p <= prev + 1e-15);
      prev = p;
    }
  }
}

TEST_CASE("expected count scales linearly in p_total and ratio round-trips") {
  RandomStream rng(77);
  for (int i = 0; i < 200; ++i) {
    const double r = rng.next_unit();
    const double p = 1.0 + 5000.0 * rng.next_unit();
    CHECK(impact_ratio(p, r * p).value() == Catch::Approx(r).margin(1e-15));
    const double one = expected_top_count(1.0, ImpactRatio(r), PercentileLevel(0.1));
    CHECK(expected_top_count(p, ImpactRatio(r), PercentileLevel(0.1)) ==
          Catch::Approx(p * one).epsilon(1e-13));
  }
}
