#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "percimpact/data_io.hpp"

using namespace percimpact;

TEST_CASE("parse a plain units CSV") {
  std::istringstream csv(
      "unit_id,label,country,p,p_top10\n"
      "mit,MIT,USA,4803,1149\n"
      "frac,\"Some, Quoted U\",UK,120.5,10.25\n");
  const UnitsTable table = parse_units_csv(csv, "test");
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].id == "mit");
  CHECK(table.rows[0].p_total == 4803.0);
  CHECK(table.rows[0].p_top10 == 1149.0);
  CHECK(table.rows[1].label == "Some, Quoted U");
  CHECK(table.rows[1].p_total == 120.5);
  CHECK(table.warnings.empty());
}

TEST_CASE("header-only file parses with a warning") {
  std::istringstream csv("unit_id,label,country,p,p_top10\n");
  const UnitsTable table = parse_units_csv(csv);
  CHECK(table.rows.empty());
  REQUIRE(table.warnings.size() == 1);
}

TEST_CASE("parse errors carry line numbers") {
  std::istringstream bad_header("id,name\nx,y\n");
  CHECK_THROWS_WITH(parse_units_csv(bad_header),
                    Catch::Matchers::ContainsSubstring("unit_id,label,country,p,p_top10"));

  std::istringstream bad_row(
      "unit_id,label,country,p,p_top10\n"
      "ok,OK,USA,10,1\n"
      "broken,Broken,USA,1,2\n");
  CHECK_THROWS_WITH(parse_units_csv(bad_row),
                    Catch::Matchers::ContainsSubstring("line 3"));

  std::istringstream dup(
      "unit_id,label,country,p,p_top10\n"
      "a,A,USA,10,1\n"
      "a,A2,USA,20,2\n");
  CHECK_THROWS_WITH(parse_units_csv(dup),
                    Catch::Matchers::ContainsSubstring("duplicate unit_id"));

  std::istringstream not_number(
      "unit_id,label,country,p,p_top10\n"
      "a,A,USA,ten,1\n");
  CHECK_THROWS_AS(parse_units_csv(not_number), validation_error);

  std::istringstream empty("");
  CHECK_THROWS_AS(parse_units_csv(empty), validation_error);
}

TEST_CASE("parse-serialize-parse round-trip") {
  const UnitsTable original = bundled_fixture("usa_top25");
  const std::string serialized = serialize_units_csv(original);
  std::istringstream stream(serialized);
  const UnitsTable reparsed = parse_units_csv(stream, original.source);
  REQUIRE(reparsed.rows.size() == original.rows.size());
  for (std::size_t i = 0; i < original.rows.size(); ++i) {
    CHECK(reparsed.rows[i].id == original.rows[i].id);
    CHECK(reparsed.rows[i].label == original.rows[i].label);
    CHECK(reparsed.rows[i].country == original.rows[i].country);
    CHECK(reparsed.rows[i].p_total == original.rows[i].p_total);
    CHECK(reparsed.rows[i].p_top10 == original.rows[i].p_top10);
  }
}

TEST_CASE("grouping partitions rows and preserves input order") {
  const UnitsTable table = bundled_fixture("university_sample");
  const auto groups = group_units(table);
  REQUIRE(groups.size() == 2);
  CHECK(groups.at("Japan").size() == 5);
  CHECK(groups.at("USA").size() == 5);
  CHECK(groups.at("Japan").front().id == "nagoya");
  std::size_t total = 0;
  for (const auto& [name, units] : groups) total += units.size();
  CHECK(total == table.rows.size());

  UnitsTable missing = table;
  missing.rows[3].country.clear();
  CHECK_THROWS_WITH(group_units(missing),
                    Catch::Matchers::ContainsSubstring("hokkaido"));
}

TEST_CASE("single-country grouping returns the whole table") {
  const UnitsTable table = bundled_fixture("usa_top25");
  const auto groups = group_units(table);
  REQUIRE(groups.size() == 1);
  CHECK(groups.at("USA").size() == table.rows.size());
}

TEST_CASE("bundled fixtures") {
  const UnitsTable totals = bundled_fixture("country_totals");
  REQUIRE(totals.rows.size() == 7);
  const auto japan = std::find_if(totals.rows.begin(), totals.rows.end(),
                                  [](const ResearchUnit& u) { return u.id == "japan"; });
  REQUIRE(japan != totals.rows.end());
  CHECK(japan->p_total == 51927.0);
  CHECK(japan->p_top10 == 3584.0);

  const UnitsTable sample = bundled_fixture("university_sample");
  const auto tokyo = std::find_if(sample.rows.begin(), sample.rows.end(),
                                  [](const ResearchUnit& u) { return u.id == "tokyo"; });
  REQUIRE(tokyo != sample.rows.end());
  CHECK(tokyo->p_total == 6245.0);
  CHECK(tokyo->p_top10 / tokyo->p_total == Catch::Approx(0.110).margin(1e-9));

  const UnitsTable excerpt = bundled_fixture("usa_top25");
  REQUIRE(excerpt.rows.size() == 25);
  CHECK(excerpt.rows.back().id == "loyola_chicago");
  CHECK(excerpt.rows.back().p_total == 38.0);
  CHECK(excerpt.rows.back().p_top10 == 2.0);

  CHECK_THROWS_WITH(bundled_fixture("nope"),
                    Catch::Matchers::ContainsSubstring("usa_top25"));
}

TEST_CASE("excerpt sums stay below the full-country totals") {
  const UnitsTable excerpt = bundled_fixture("usa_top25");
  double p = 0.0, top = 0.0;
  for (const ResearchUnit& u : excerpt.rows) {
    p += u.p_total;
    top += u.p_top10;
  }
  // 25 of 200 universities; must not be mistaken for the USA totals
  CHECK(p < 171722.0);
  CHECK(top < 25881.0);
}
