#ifndef PERCIMPACT_INDICATOR_HPP_
#define PERCIMPACT_INDICATOR_HPP_

// Percentile-based impact indicators.
//
// A research unit with P publications, of which P_top10 are among the
// world's top 10% most cited, is characterized by the impact ratio
// r = P_top10 / P. The probability that one of its papers lands in the
// top x% is r^(2 - lg x), and the expected count at that level is
// P * r^(2 - lg x). All logarithms are base 10 and levels are expressed
// in percent (x = 10 means "top 10%").

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "percimpact/errors.hpp"

namespace percimpact {

// A top percentile x in (0, 100].
class PercentileLevel {
 public:
  explicit PercentileLevel(double x) : x_(x) {
    if (!(x > 0.0) || x > 100.0) {
      throw validation_error("percentile level must be in (0, 100], got " +
                             std::to_string(x));
    }
  }

  double percent() const { return x_; }

  // 2 - lg x: 0 at x=100, 1 at x=10, 2 at x=1, 4 at x=0.01.
  double exponent() const { return 2.0 - std::log10(x_); }

 private:
  double x_;
};

// Share of a unit's papers in the world top 10%, in [0, 1].
class ImpactRatio {
 public:
  explicit ImpactRatio(double value) : value_(value) {
    if (!(value >= 0.0) || value > 1.0) {
      throw validation_error("impact ratio must be in [0, 1], got " +
                             std::to_string(value));
    }
  }

  double value() const { return value_; }

 private:
  double value_;
};

// One homogeneous publishing unit. Counts may be fractional
// (fractional counting credits multi-institution papers in parts).
struct ResearchUnit {
  std::string id;
  std::string label;
  std::string country;
  double p_total = 0.0;
  double p_top10 = 0.0;
};

inline void validate_unit(const ResearchUnit& unit) {
  if (unit.p_total < 0.0 || unit.p_top10 < 0.0) {
    throw validation_error("unit '" + unit.id + "': counts must be nonnegative");
  }
  if (unit.p_top10 > unit.p_total) {
    throw validation_error("unit '" + unit.id + "': p_top10 (" +
                           std::to_string(unit.p_top10) + ") exceeds p (" +
                           std::to_string(unit.p_total) + ")");
  }
}

inline ImpactRatio impact_ratio(double p_total, double p_top10) {
  if (!(p_total > 0.0)) {
    throw validation_error("impact ratio undefined for p_total <= 0");
  }
  if (p_top10 < 0.0 || p_top10 > p_total) {
    throw validation_error("p_top10 must be in [0, p_total]");
  }
  return ImpactRatio(p_top10 / p_total);
}

inline double level_exponent(PercentileLevel level) { return level.exponent(); }

// Probability that one of the unit's papers is in the top x%.
// 0^0 is defined as 1: the top 100% contains every paper.
inline double top_probability(ImpactRatio ratio, PercentileLevel level) {
  const double e = level.exponent();
  if (e == 0.0) return 1.0;
  return std::pow(ratio.value(), e);
}

inline double expected_top_count(double p_total, ImpactRatio ratio,
                                 PercentileLevel level) {
  if (p_total < 0.0) {
    throw validation_error("p_total must be nonnegative");
  }
  return p_total * top_probability(ratio, level);
}

struct UnitAssessment {
  std::string unit_id;
  double ratio = 0.0;
  double level_percent = 0.0;
  double probability = 0.0;
  double expected_count = 0.0;
};

// Evaluates one unit at one level. At exponent 1 (x = 10) the expected
// count reduces algebraically to the measured p_top10, which is returned
// as-is so the identity holds without rounding.
inline UnitAssessment assess_unit(const ResearchUnit& unit, PercentileLevel level) {
  validate_unit(unit);
  const ImpactRatio ratio = impact_ratio(unit.p_total, unit.p_top10);
  const double probability = top_probability(ratio, level);
  const double expected = level.exponent() == 1.0
                              ? unit.p_top10
                              : unit.p_total * probability;
  return UnitAssessment{unit.id, ratio.value(), level.percent(), probability,
                        expected};
}

// Expected counts over a list of levels (Figure-1 style curve data).
inline std::vector<std::pair<double, double>> percentile_curve(
    const ResearchUnit& unit, std::span<const PercentileLevel> levels) {
  if (levels.empty()) {
    throw validation_error("percentile_curve: need at least one level");
  }
  validate_unit(unit);
  const ImpactRatio ratio = impact_ratio(unit.p_total, unit.p_top10);
  std::vector<std::pair<double, double>> curve;
  curve.reserve(levels.size());
  for (const PercentileLevel& level : levels) {
    curve.emplace_back(level.percent(),
                       expected_top_count(unit.p_total, ratio, level));
  }
  return curve;
}

}  // namespace percimpact

#endif  // PERCIMPACT_INDICATOR_HPP_
