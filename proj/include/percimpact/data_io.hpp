#ifndef PERCIMPACT_DATA_IO_HPP_
#define PERCIMPACT_DATA_IO_HPP_

// CSV ingestion of ranking-style unit data and the bundled fixtures.
//
// Schema: unit_id,label,country,p,p_top10 with decimal-point numerals.
// Fields may be double-quoted (RFC 4180 style, "" escapes a quote);
// labels like "UC, Berkeley" need it. Errors carry 1-based line numbers.

#include <charconv>
#include <cstddef>
#include <istream>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "percimpact/errors.hpp"
#include "percimpact/indicator.hpp"

namespace percimpact {

struct UnitsTable {
  std::vector<ResearchUnit> rows;
  std::string source;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line,
                                               std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) {
    throw validation_error("line " + std::to_string(line_no) +
                           ": unterminated quoted field");
  }
  fields.push_back(field);
  return fields;
}

inline double parse_number(const std::string& text, std::size_t line_no,
                           const char* column) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw validation_error("line " + std::to_string(line_no) + ": column '" +
                           column + "' is not a number: '" + text + "'");
  }
  return value;
}

inline std::string quote_if_needed(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace detail

inline constexpr const char* kUnitsCsvHeader = "unit_id,label,country,p,p_top10";

inline UnitsTable parse_units_csv(std::istream& input,
                                  const std::string& source_label = "") {
  UnitsTable table;
  table.source = source_label;
  std::string line;
  if (!std::getline(input, line)) {
    throw validation_error("empty input, expected header '" +
                           std::string(kUnitsCsvHeader) + "'");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kUnitsCsvHeader) {
    throw validation_error("line 1: bad header '" + line + "', expected '" +
                           std::string(kUnitsCsvHeader) + "'");
  }
  std::set<std::string> seen_ids;
  std::size_t line_no = 1;
  while (std::getline(input, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = detail::split_csv_line(line, line_no);
    if (fields.size() != 5) {
      throw validation_error("line " + std::to_string(line_no) + ": expected 5 fields, got " +
                             std::to_string(fields.size()));
    }
    ResearchUnit unit;
    unit.id = fields[0];
    unit.label = fields[1];
    unit.country = fields[2];
    unit.p_total = detail::parse_number(fields[3], line_no, "p");
    unit.p_top10 = detail::parse_number(fields[4], line_no, "p_top10");
    if (unit.id.empty()) {
      throw validation_error("line " + std::to_string(line_no) + ": empty unit_id");
    }
    if (!seen_ids.insert(unit.id).second) {
      throw validation_error("line " + std::to_string(line_no) +
                             ": duplicate unit_id '" + unit.id + "'");
    }
    if (unit.p_total < 0.0 || unit.p_top10 < 0.0 || unit.p_top10 > unit.p_total) {
      throw validation_error("line " + std::to_string(line_no) + ": unit '" +
                             unit.id + "': p_top10=" + fields[4] +
                             " and p=" + fields[3] + " violate 0 <= p_top10 <= p");
    }
    table.rows.push_back(std::move(unit));
  }
  if (table.rows.empty()) {
    table.warnings.push_back("no data rows (header only)");
  }
  return table;
}

inline std::string serialize_units_csv(const UnitsTable& table) {
  std::ostringstream out;
  out << kUnitsCsvHeader << '\n';
  out.precision(17);
  for (const ResearchUnit& unit : table.rows) {
    out << detail::quote_if_needed(unit.id) << ','
        << detail::quote_if_needed(unit.label) << ','
        << detail::quote_if_needed(unit.country) << ',' << unit.p_total << ','
        << unit.p_top10 << '\n';
  }
  return out.str();
}

// Partition by country; input order is preserved within each group.
inline std::map<std::string, std::vector<ResearchUnit>> group_units(
    const UnitsTable& table) {
  std::map<std::string, std::vector<ResearchUnit>> groups;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const ResearchUnit& unit = table.rows[i];
    if (unit.country.empty()) {
      throw validation_error("row " + std::to_string(i + 1) + " (unit '" +
                             unit.id + "'): empty country");
    }
    groups[unit.country].push_back(unit);
  }
  return groups;
}

namespace fixtures {

// 15 first and 10 last US universities of the published truncated table;
// an excerpt, so its sums are far below the full-country totals.
inline constexpr const char* kUsaTop25 =
    "unit_id,label,country,p,p_top10\n"
    "mit,MIT,USA,4803,1149\n"
    "harvard,Harvard University,USA,3089,802\n"
    "stanford,Stanford University,USA,3729,920\n"
    "uc_berkeley,\"UC, Berkeley\",USA,3475,788\n"
    "caltech,CALTECH,USA,2889,613\n"
    "northwestern,Northwestern University,USA,2675,559\n"
    "princeton,Princeton University,USA,2490,521\n"
    "uchicago,University of Chicago,USA,1463,337\n"
    "yale,Yale University,USA,1345,309\n"
    "ucla,\"UC, Los Angeles\",USA,2486,486\n"
    "ucsb,\"UC, Santa Barbara\",USA,1917,389\n"
    "columbia,Columbia University,USA,1583,335\n"
    "cornell,Cornell University,USA,2002,391\n"
    "uc_san_diego,\"UC, San Diego\",USA,2270,414\n"
    "ut_austin,\"UT, Austin\",USA,3315,548\n"
    "portland_state,Portland State University,USA,169,11\n"
    "unc_greensboro,\"UNC, Greensboro\",USA,63,5\n"
    "ut_hsc_san_antonio,\"UT, Health S Cent, San Antonio\",USA,24,2\n"
    "thomas_jefferson,Thomas Jefferson University,USA,25,2\n"
    "rush,Rush University,USA,18,2\n"
    "east_carolina,East Carolina University,USA,56,4\n"
    "florida_atlantic,Florida Atlantic University,USA,174,8\n"
    "alaska_fairbanks,\"Univer of Alaska, Fairbanks\",USA,120,6\n"
    "uniformed_services,Unifor Ser U of Health Sciences,USA,10,1\n"
    "loyola_chicago,Loyola University Chicago,USA,38,2\n";

// Country totals as single pseudo-units (the pooled AFCL inputs).
inline constexpr const char* kCountryTotals =
    "unit_id,label,country,p,p_top10\n"
    "usa,USA,USA,171722,25881\n"
    "uk,UK,UK,53527,7632\n"
    "germany,Germany,Germany,54235,6076\n"
    "japan,Japan,Japan,51927,3584\n"
    "south_korea,South Korea,South Korea,52067,4089\n"
    "china,China,China,432182,46648\n"
    "india,India,India,46786,3456\n";

// Japanese and US universities. The source publishes P and the top-10%
// ratio, not the count, so p_top10 here is ratio * P.
inline constexpr const char* kUniversitySample =
    "unit_id,label,country,p,p_top10\n"
    "nagoya,Nagoya,Japan,2544,223.872\n"
    "kyoto,Kyoto,Japan,5440,522.24\n"
    "tsukuba,Tsukuba,Japan,1338,101.688\n"
    "hokkaido,Hokkaido,Japan,2363,174.862\n"
    "tokyo,Tokyo,Japan,6245,686.95\n"
    "cornell,Cornell,USA,2081,391.228\n"
    "yale,Yale,USA,1332,295.704\n"
    "colorado_boulder,Colorado Boulder,USA,1816,341.408\n"
    "rice,Rice,USA,1224,310.896\n"
    "columbia_ny,Columbia NY,USA,1462,286.552\n";

}  // namespace fixtures

inline UnitsTable bundled_fixture(std::string_view name) {
  const char* text = nullptr;
  std::string note;
  if (name == "usa_top25") {
    text = fixtures::kUsaTop25;
  } else if (name == "country_totals") {
    text = fixtures::kCountryTotals;
  } else if (name == "university_sample") {
    text = fixtures::kUniversitySample;
    note = "p_top10 reconstructed as published ratio * p";
  } else {
    throw validation_error("unknown fixture '" + std::string(name) +
                           "'; available: usa_top25, country_totals, university_sample");
  }
  std::istringstream stream{std::string(text)};
  UnitsTable table = parse_units_csv(stream, "fixture:" + std::string(name));
  if (!note.empty()) table.warnings.push_back(note);
  return table;
}

}  // namespace percimpact

#endif  // PERCIMPACT_DATA_IO_HPP_
