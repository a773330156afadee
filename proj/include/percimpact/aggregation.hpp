#ifndef PERCIMPACT_AGGREGATION_HPP_
#define PERCIMPACT_AGGREGATION_HPP_

// The two aggregation procedures for expected top-percentile counts:
//
//   CFAL ("calculate first, add later"): evaluate the expected count per
//   unit, then sum. This is the correct aggregation.
//
//   AFCL ("aggregate first, calculate later"): pool P and P_top10 across
//   units, then evaluate once. Whenever the exponent exceeds 1 and unit
//   ratios differ, AFCL underestimates: CFAL >= AFCL by convexity.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "percimpact/errors.hpp"
#include "percimpact/indicator.hpp"

namespace percimpact {

struct AggregateAssessment {
  double level_percent = 0.0;
  std::vector<UnitAssessment> units;
  double afcl = 0.0;
  double cfal = 0.0;
  double gap_absolute = 0.0;
  // cfal / afcl; +inf sentinel when afcl = 0 and cfal > 0, 1 when both 0.
  double gap_factor = 1.0;
  double pooled_ratio = 0.0;
  double pooled_p = 0.0;
  std::size_t skipped_units = 0;  // units with p_total = 0 contribute nothing
};

namespace detail {

inline void require_units(std::span<const ResearchUnit> units, const char* op) {
  if (units.empty()) {
    throw validation_error(std::string(op) + ": unit list is empty");
  }
  for (const ResearchUnit& unit : units) validate_unit(unit);
}

}  // namespace detail

// Pools P and P_top10 across all units, then applies the expected-count
// formula once. At exponent 1 this is just the pooled top-10% count.
inline double afcl(std::span<const ResearchUnit> units, PercentileLevel level) {
  detail::require_units(units, "afcl");
  double total_p = 0.0, total_top = 0.0;
  for (const ResearchUnit& unit : units) {
    total_p += unit.p_total;
    total_top += unit.p_top10;
  }
  if (!(total_p > 0.0)) {
    throw validation_error("afcl: pooled paper count is zero");
  }
  if (level.exponent() == 1.0) return total_top;
  return expected_top_count(total_p, impact_ratio(total_p, total_top), level);
}

// Sum of per-unit expected counts. Units with p_total = 0 are skipped.
inline double cfal(std::span<const ResearchUnit> units, PercentileLevel level) {
  detail::require_units(units, "cfal");
  double total = 0.0;
  for (const ResearchUnit& unit : units) {
    if (unit.p_total == 0.0) continue;
    total += assess_unit(unit, level).expected_count;
  }
  return total;
}

inline AggregateAssessment aggregation_gap(std::span<const ResearchUnit> units,
                                     PercentileLevel level) {
  detail::require_units(units, "aggregation_gap");
  AggregateAssessment out;
  out.level_percent = level.percent();
  double total_p = 0.0, total_top = 0.0;
  for (const ResearchUnit& unit : units) {
    if (unit.p_total == 0.0) {
      ++out.skipped_units;
      continue;
    }
    total_p += unit.p_total;
    total_top += unit.p_top10;
    out.units.push_back(assess_unit(unit, level));
    out.cfal += out.units.back().expected_count;
  }
  if (!(total_p > 0.0)) {
    throw validation_error("aggregation_gap: pooled paper count is zero");
  }
  out.pooled_p = total_p;
  out.pooled_ratio = total_top / total_p;
  out.afcl = level.exponent() == 1.0
                 ? total_top
                 : expected_top_count(total_p, ImpactRatio(out.pooled_ratio), level);
  out.gap_absolute = out.cfal - out.afcl;
  if (out.afcl > 0.0) {
    out.gap_factor = out.cfal / out.afcl;
  } else {
    out.gap_factor = out.cfal > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  if (level.exponent() > 1.0 &&
      out.cfal < out.afcl - 1e-9 * std::max(1.0, out.afcl)) {
    throw std::logic_error("aggregation_gap: CFAL < AFCL at exponent > 1");
  }
  return out;
}

struct CumulativeEntry {
  std::size_t rank = 0;  // 1-based
  std::string unit_id;
  double expected_count = 0.0;
  double running_total = 0.0;
};

struct CumulativeCurve {
  std::vector<CumulativeEntry> entries;
  double afcl = 0.0;
  // Smallest prefix whose running total reaches the AFCL value of the
  // full list; absent when even the full CFAL stays below AFCL.
  std::optional<std::size_t> prefix_to_reach_afcl;
};

// Units sorted by expected count descending (ties by id ascending, so
// curves are deterministic), with running CFAL totals attached.
inline CumulativeCurve cumulative_cfal(std::span<const ResearchUnit> units,
                                       PercentileLevel level) {
  const AggregateAssessment assessment = aggregation_gap(units, level);
  std::vector<UnitAssessment> sorted = assessment.units;
  std::sort(sorted.begin(), sorted.end(),
            [](const UnitAssessment& a, const UnitAssessment& b) {
              if (a.expected_count != b.expected_count) {
                return a.expected_count > b.expected_count;
              }
              return a.unit_id < b.unit_id;
            });
  CumulativeCurve curve;
  curve.afcl = assessment.afcl;
  double running = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    running += sorted[i].expected_count;
    curve.entries.push_back(
        CumulativeEntry{i + 1, sorted[i].unit_id, sorted[i].expected_count, running});
    if (!curve.prefix_to_reach_afcl && running >= assessment.afcl) {
      curve.prefix_to_reach_afcl = i + 1;
    }
  }
  return curve;
}

enum class GroupKey { country, all };

// One assessment per group; group order is the lexicographic key order.
inline std::map<std::string, AggregateAssessment> assess_groups(
    std::span<const ResearchUnit> units, GroupKey key, PercentileLevel level) {
  detail::require_units(units, "assess_groups");
  std::map<std::string, std::vector<ResearchUnit>> groups;
  for (const ResearchUnit& unit : units) {
    if (key == GroupKey::all) {
      groups["all"].push_back(unit);
    } else {
      if (unit.country.empty()) {
        throw validation_error("assess_groups: unit '" + unit.id +
                               "' has no country");
      }
      groups[unit.country].push_back(unit);
    }
  }
  std::map<std::string, AggregateAssessment> out;
  for (const auto& [name, members] : groups) {
    out.emplace(name, aggregation_gap(members, level));
  }
  return out;
}

}  // namespace percimpact

#endif  // PERCIMPACT_AGGREGATION_HPP_
