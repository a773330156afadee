#ifndef PERCIMPACT_SIMULATION_HPP_
#define PERCIMPACT_SIMULATION_HPP_

// Synthetic citation world and the CFAL/AFCL comparison experiment.
//
// The world is built from n_series primary series (default 400) of
// per_series continuous lognormal citation values each (default 200),
// with the log-median mu decreasing linearly across series and a common
// sigma. A paper is "in the top x%" of the world when its value is >=
// the value at descending rank floor(N * x / 100) of the pooled series.
// Institutions are simulated by selecting 20 series whose top-10% ratios
// track a target profile, then comparing CFAL and AFCL at a narrow level.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "percimpact/aggregation.hpp"
#include "percimpact/errors.hpp"
#include "percimpact/indicator.hpp"
#include "percimpact/random.hpp"
#include "percimpact/statistics.hpp"

namespace percimpact {

inline constexpr std::size_t kUnitsPerInstitution = 20;

struct CitationSeries {
  std::size_t unit_index = 0;  // 0-based position in the world
  double mu = 0.0;
  std::vector<double> values;
};

struct WorldParams {
  std::size_t n_series = 400;
  std::size_t per_series = 200;
  double mu_max = 4.0;
  double mu_min = 2.0;
  double sigma = 1.1;
};

struct UnitTopCount {
  std::size_t unit_index = 0;
  std::size_t count = 0;
  double ratio = 0.0;
};

class WorldModel {
 public:
  static WorldModel build(const WorldParams& params, std::uint64_t seed) {
    if (params.n_series < 2) {
      throw validation_error("build_world: need at least 2 series");
    }
    if (params.per_series < 1) {
      throw validation_error("build_world: need at least 1 value per series");
    }
    if (!(params.mu_max > params.mu_min)) {
      throw validation_error("build_world: mu_max must exceed mu_min");
    }
    if (!(params.sigma > 0.0)) {
      throw validation_error("build_world: sigma must be positive");
    }
    WorldModel world;
    world.params_ = params;
    world.seed_ = seed;
    world.series_.reserve(params.n_series);
    // Exact duplicates would make rank thresholds ambiguous; redraw them.
    std::unordered_set<double> seen;
    seen.reserve(params.n_series * params.per_series);
    const double mu_step =
        (params.mu_max - params.mu_min) / static_cast<double>(params.n_series - 1);
    for (std::size_t i = 0; i < params.n_series; ++i) {
      CitationSeries series;
      series.unit_index = i;
      series.mu = params.mu_max - mu_step * static_cast<double>(i);
      series.values.reserve(params.per_series);
      RandomStream stream(derive_seed(seed, i));
      while (series.values.size() < params.per_series) {
        const double v =
            std::exp(series.mu + params.sigma * stream.next_normal());
        if (seen.insert(v).second) series.values.push_back(v);
      }
      world.series_.push_back(std::move(series));
    }
    world.sorted_desc_.reserve(params.n_series * params.per_series);
    for (const CitationSeries& s : world.series_) {
      world.sorted_desc_.insert(world.sorted_desc_.end(), s.values.begin(),
                                s.values.end());
    }
    std::sort(world.sorted_desc_.begin(), world.sorted_desc_.end(),
              std::greater<>());
    return world;
  }

  const WorldParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<CitationSeries>& series() const { return series_; }
  std::size_t total_values() const { return sorted_desc_.size(); }
  const std::vector<double>& values_descending() const { return sorted_desc_; }

  // Citation value at descending rank floor(N * x / 100); a value is in
  // the top x% iff it is >= this threshold.
  double threshold(PercentileLevel level) const {
    if (auto it = threshold_cache_.find(level.percent());
        it != threshold_cache_.end()) {
      return it->second;
    }
    const auto rank = static_cast<std::size_t>(
        std::floor(static_cast<double>(total_values()) * level.percent() / 100.0));
    if (rank == 0) {
      throw validation_error("world_threshold: level x=" +
                             std::to_string(level.percent()) +
                             " selects no papers in a world of " +
                             std::to_string(total_values()) + " values");
    }
    const double value = sorted_desc_[rank - 1];
    threshold_cache_.emplace(level.percent(), value);
    return value;
  }

  // Per-series counts of values at or above the world threshold. Counts
  // sum to floor(N * x / 100) exactly since values are duplicate-free.
  std::vector<UnitTopCount> unit_top_counts(PercentileLevel level) const {
    const double cut = threshold(level);
    std::vector<UnitTopCount> counts;
    counts.reserve(series_.size());
    for (const CitationSeries& s : series_) {
      std::size_t n = 0;
      for (double v : s.values) {
        if (v >= cut) ++n;
      }
      counts.push_back(UnitTopCount{
          s.unit_index, n,
          static_cast<double>(n) / static_cast<double>(s.values.size())});
    }
    return counts;
  }

 private:
  WorldParams params_;
  std::uint64_t seed_ = 0;
  std::vector<CitationSeries> series_;
  std::vector<double> sorted_desc_;
  mutable std::map<double, double> threshold_cache_;
};

inline WorldModel build_world(const WorldParams& params, std::uint64_t seed) {
  return WorldModel::build(params, seed);
}

enum class ProfileKind { linear, usa, uk, split };

inline const char* profile_name(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::linear: return "linear";
    case ProfileKind::usa: return "usa";
    case ProfileKind::uk: return "uk";
    case ProfileKind::split: return "split";
  }
  return "unknown";
}

inline ProfileKind parse_profile_kind(const std::string& name) {
  if (name == "linear") return ProfileKind::linear;
  if (name == "usa") return ProfileKind::usa;
  if (name == "uk") return ProfileKind::uk;
  if (name == "split") return ProfileKind::split;
  throw validation_error("unknown profile kind '" + name +
                         "' (expected linear, usa, uk, or split)");
}

// Knobs behind the four target-ratio curves. The sigmoid profiles are
// floor + amplitude / (1 + exp((rank - center) / scale)) over ranks 1..20.
struct ProfileParams {
  double linear_hi = 0.30;
  double linear_lo = 0.02;

  double usa_floor = 0.075;
  double usa_amplitude = 0.14;
  double usa_center = 6.0;
  double usa_scale = 1.0;

  double uk_floor = 0.07;
  double uk_amplitude = 0.14;
  double uk_center = 12.0;
  double uk_scale = 4.0;

  double split_high = 0.22;
  double split_low = 0.03;
  std::size_t split_high_count = 7;
  std::size_t split_low_count = 7;
  double split_ramp_hi = 0.18;
  double split_ramp_lo = 0.06;
};

struct SelectionProfile {
  ProfileKind kind = ProfileKind::linear;
  std::vector<double> target_ratios;  // rank-ordered, nonincreasing
};

inline SelectionProfile make_profile(ProfileKind kind,
                                     const ProfileParams& params = {}) {
  SelectionProfile profile;
  profile.kind = kind;
  profile.target_ratios.reserve(kUnitsPerInstitution);
  const auto n = static_cast<double>(kUnitsPerInstitution);
  switch (kind) {
    case ProfileKind::linear:
      for (std::size_t r = 0; r < kUnitsPerInstitution; ++r) {
        profile.target_ratios.push_back(
            params.linear_hi - (params.linear_hi - params.linear_lo) *
                                   static_cast<double>(r) / (n - 1.0));
      }
      break;
    case ProfileKind::usa:
    case ProfileKind::uk: {
      const double floor = kind == ProfileKind::usa ? params.usa_floor : params.uk_floor;
      const double amp =
          kind == ProfileKind::usa ? params.usa_amplitude : params.uk_amplitude;
      const double center = kind == ProfileKind::usa ? params.usa_center : params.uk_center;
      const double scale = kind == ProfileKind::usa ? params.usa_scale : params.uk_scale;
      for (std::size_t r = 1; r <= kUnitsPerInstitution; ++r) {
        profile.target_ratios.push_back(
            floor + amp / (1.0 + std::exp((static_cast<double>(r) - center) / scale)));
      }
      break;
    }
    case ProfileKind::split: {
      const std::size_t ramp =
          kUnitsPerInstitution - params.split_high_count - params.split_low_count;
      if (ramp < 2) {
        throw validation_error("make_profile: split high/low counts leave no ramp");
      }
      for (std::size_t r = 0; r < params.split_high_count; ++r) {
        profile.target_ratios.push_back(params.split_high);
      }
      for (std::size_t r = 0; r < ramp; ++r) {
        profile.target_ratios.push_back(
            params.split_ramp_hi - (params.split_ramp_hi - params.split_ramp_lo) *
                                       static_cast<double>(r) /
                                       static_cast<double>(ramp - 1));
      }
      for (std::size_t r = 0; r < params.split_low_count; ++r) {
        profile.target_ratios.push_back(params.split_low);
      }
      break;
    }
  }
  for (std::size_t i = 1; i < profile.target_ratios.size(); ++i) {
    if (profile.target_ratios[i] > profile.target_ratios[i - 1]) {
      throw validation_error("make_profile: target ratios must be nonincreasing");
    }
  }
  return profile;
}

// Greedy nearest-ratio matching in rank order, without replacement.
// Ties on |ratio - target| break toward the lower unit index.
inline std::vector<std::size_t> select_units(const SelectionProfile& profile,
                                             std::span<const UnitTopCount> pool) {
  if (pool.size() < profile.target_ratios.size()) {
    throw validation_error("select_units: pool smaller than the profile");
  }
  std::vector<bool> taken(pool.size(), false);
  std::vector<std::size_t> selected;
  selected.reserve(profile.target_ratios.size());
  for (double target : profile.target_ratios) {
    std::size_t best = pool.size();
    double best_dist = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (taken[i]) continue;
      const double dist = std::abs(pool[i].ratio - target);
      if (best == pool.size() || dist < best_dist ||
          (dist == best_dist && pool[i].unit_index < pool[best].unit_index)) {
        best = i;
        best_dist = dist;
      }
    }
    taken[best] = true;
    selected.push_back(pool[best].unit_index);
  }
  return selected;
}

struct ExperimentResult {
  ProfileKind kind = ProfileKind::linear;
  std::uint64_t seed = 0;
  double pooled_ratio = 0.0;
  double afcl = 0.0;
  double cfal = 0.0;
  double gap_factor = 1.0;
  std::vector<std::size_t> selected;      // world series indices, rank order
  std::vector<std::size_t> unit_counts;   // per selected unit, top-10% counts
};

// Builds a world, measures per-series top-10% ratios, assembles one
// 20-unit institution along the profile, and compares CFAL vs AFCL.
inline ExperimentResult run_experiment(ProfileKind kind, std::uint64_t seed,
                                       PercentileLevel level = PercentileLevel(0.01),
                                       const WorldParams& world_params = {},
                                       const ProfileParams& profile_params = {}) {
  const WorldModel world = build_world(world_params, seed);
  const std::vector<UnitTopCount> pool =
      world.unit_top_counts(PercentileLevel(10.0));
  const SelectionProfile profile = make_profile(kind, profile_params);
  ExperimentResult result;
  result.kind = kind;
  result.seed = seed;
  result.selected = select_units(profile, pool);

  std::vector<ResearchUnit> units;
  units.reserve(result.selected.size());
  for (std::size_t idx : result.selected) {
    const std::size_t count = pool[idx].count;
    result.unit_counts.push_back(count);
    units.push_back(ResearchUnit{"series-" + std::to_string(idx),
                                 "series " + std::to_string(idx),
                                 "",
                                 static_cast<double>(world.params().per_series),
                                 static_cast<double>(count)});
  }
  const AggregateAssessment gap = aggregation_gap(units, level);
  result.pooled_ratio = gap.pooled_ratio;
  result.afcl = gap.afcl;
  result.cfal = gap.cfal;
  result.gap_factor = gap.gap_factor;
  return result;
}

struct SummaryStats {
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

struct StudySummary {
  ProfileKind kind = ProfileKind::linear;
  std::uint64_t master_seed = 0;
  std::vector<ExperimentResult> replicates;
  SummaryStats pooled_ratio;
  SummaryStats afcl;
  SummaryStats cfal;
  SummaryStats gap_factor;
};

namespace detail {

inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

template <typename Getter>
SummaryStats summarize(const std::vector<ExperimentResult>& results, Getter get) {
  std::vector<double> values;
  values.reserve(results.size());
  for (const ExperimentResult& r : results) values.push_back(get(r));
  std::sort(values.begin(), values.end());
  return SummaryStats{quantile_sorted(values, 0.5), quantile_sorted(values, 0.25),
                      quantile_sorted(values, 0.75)};
}

}  // namespace detail

// Runs n_replicates independent experiments with seeds derived from the
// master seed; stabilizes the stochastic comparison across draws.
inline StudySummary replicate_study(ProfileKind kind, std::uint64_t master_seed,
                                    std::size_t n_replicates,
                                    PercentileLevel level = PercentileLevel(0.01),
                                    const WorldParams& world_params = {},
                                    const ProfileParams& profile_params = {}) {
  if (n_replicates == 0) {
    throw validation_error("replicate_study: need at least 1 replicate");
  }
  StudySummary summary;
  summary.kind = kind;
  summary.master_seed = master_seed;
  summary.replicates.reserve(n_replicates);
  for (std::size_t r = 0; r < n_replicates; ++r) {
    summary.replicates.push_back(run_experiment(
        kind, derive_seed(master_seed, r), level, world_params, profile_params));
  }
  summary.pooled_ratio = detail::summarize(
      summary.replicates, [](const ExperimentResult& r) { return r.pooled_ratio; });
  summary.afcl = detail::summarize(
      summary.replicates, [](const ExperimentResult& r) { return r.afcl; });
  summary.cfal = detail::summarize(
      summary.replicates, [](const ExperimentResult& r) { return r.cfal; });
  summary.gap_factor = detail::summarize(
      summary.replicates, [](const ExperimentResult& r) { return r.gap_factor; });
  return summary;
}

}  // namespace percimpact

#endif  // PERCIMPACT_SIMULATION_HPP_
