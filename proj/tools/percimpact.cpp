// percimpact command-line front end.
//
// Subcommands:
//   assess      per-group AFCL/CFAL expected counts from a units CSV
//   cumulative  plot-ready cumulative CFAL curve for one country
//   simulate    seeded CFAL-vs-AFCL experiments on synthetic worlds
//   world       build one synthetic world and dump ratio-vs-rank data
//   fit-ep      power-law e_p fit from (level, count) pairs
//   ks-test     lognormality test of a value-per-line file
//
// Exit codes: 0 success, 1 I/O failure, 2 validation failure.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "percimpact/percimpact.hpp"

namespace {

constexpr const char* kToolVersion = "0.1.0";

using percimpact::ReportDocument;

std::string lower_trim(std::string s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.erase(s.begin());
  while (!s.empty() && is_space(s.back())) s.pop_back();
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

percimpact::UnitsTable load_units(const std::string& input_path,
                                  const std::string& fixture_name) {
  if (!fixture_name.empty()) return percimpact::bundled_fixture(fixture_name);
  std::ifstream file(input_path);
  if (!file) {
    throw percimpact::io_error("cannot open input file: " + input_path);
  }
  return percimpact::parse_units_csv(file, input_path);
}

void write_report(const ReportDocument& doc, const std::string& out_path,
                  const std::string& format) {
  const std::string rendered = format == "json" ? percimpact::render_json(doc)
                                                : percimpact::render_csv(doc);
  if (out_path.empty()) {
    std::cout << rendered;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw percimpact::io_error("cannot open output file: " + out_path);
  out << rendered;
  if (!out) throw percimpact::io_error("write failed: " + out_path);
}

ReportDocument::Cell number_or_inf(double v) {
  if (std::isinf(v)) return ReportDocument::Cell{std::string("inf")};
  return ReportDocument::Cell{v};
}

int cmd_assess(const std::string& input, const std::string& fixture,
               const std::string& group_by, double level_percent,
               const std::string& out, const std::string& format) {
  const percimpact::UnitsTable table = load_units(input, fixture);
  for (const std::string& warning : table.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  const percimpact::PercentileLevel level(level_percent);
  const auto key = group_by == "country" ? percimpact::GroupKey::country
                                         : percimpact::GroupKey::all;
  const auto groups = percimpact::assess_groups(table.rows, key, level);

  ReportDocument doc;
  doc.title = "percimpact assess";
  doc.add_meta("command", "assess");
  doc.add_meta("input", table.source);
  doc.add_meta("group_by", group_by);
  doc.add_meta("level_percent", level_percent);
  doc.add_meta("tool_version", kToolVersion);
  ReportDocument::Table grid;
  grid.name = "groups";
  grid.columns = {"group",        "units", "pooled_p", "pooled_ratio",
                  "afcl",         "cfal",  "gap_absolute", "gap_factor"};
  for (const auto& [name, a] : groups) {
    grid.rows.push_back({name, static_cast<double>(a.units.size()), a.pooled_p,
                         a.pooled_ratio, a.afcl, a.cfal, a.gap_absolute,
                         number_or_inf(a.gap_factor)});
  }
  doc.tables.push_back(std::move(grid));
  write_report(doc, out, format);
  if (!out.empty()) {
    for (const auto& [name, a] : groups) {
      std::cout << name << ": afcl=" << percimpact::format_sig6(a.afcl)
                << " cfal=" << percimpact::format_sig6(a.cfal)
                << " factor=" << percimpact::format_sig6(a.gap_factor) << "\n";
    }
  }
  return 0;
}

int cmd_cumulative(const std::string& input, const std::string& fixture,
                   const std::string& country, double level_percent,
                   const std::string& out, const std::string& format) {
  const percimpact::UnitsTable table = load_units(input, fixture);
  const auto groups = percimpact::group_units(table);
  const std::string wanted = lower_trim(country);
  const std::vector<percimpact::ResearchUnit>* members = nullptr;
  for (const auto& [name, units] : groups) {
    if (lower_trim(name) == wanted) {
      members = &units;
      break;
    }
  }
  if (members == nullptr) {
    std::string available;
    for (const auto& [name, units] : groups) {
      if (!available.empty()) available += ", ";
      available += name;
    }
    throw percimpact::validation_error("unknown country '" + country +
                                       "'; available: " + available);
  }
  const percimpact::PercentileLevel level(level_percent);
  const percimpact::CumulativeCurve curve =
      percimpact::cumulative_cfal(*members, level);

  ReportDocument doc;
  doc.title = "percimpact cumulative";
  doc.add_meta("command", "cumulative");
  doc.add_meta("input", table.source);
  doc.add_meta("country", country);
  doc.add_meta("level_percent", level_percent);
  doc.add_meta("afcl", curve.afcl);
  doc.add_meta("prefix_to_reach_afcl",
               curve.prefix_to_reach_afcl
                   ? std::to_string(*curve.prefix_to_reach_afcl)
                   : std::string("none"));
  doc.add_meta("tool_version", kToolVersion);
  ReportDocument::Table grid;
  grid.name = "cumulative";
  grid.columns = {"rank", "unit_id", "expected_count", "running_total", "afcl"};
  for (const percimpact::CumulativeEntry& entry : curve.entries) {
    grid.rows.push_back({static_cast<double>(entry.rank), entry.unit_id,
                         entry.expected_count, entry.running_total, curve.afcl});
  }
  doc.tables.push_back(std::move(grid));
  write_report(doc, out, format);
  if (curve.prefix_to_reach_afcl) {
    std::cout << "prefix reaching AFCL: " << *curve.prefix_to_reach_afcl << " of "
              << curve.entries.size() << " units\n";
  } else {
    std::cout << "running total never reaches AFCL\n";
  }
  return 0;
}

void add_profile_meta(ReportDocument& doc, const percimpact::ProfileParams& p,
                      percimpact::ProfileKind kind) {
  doc.add_meta("profile", percimpact::profile_name(kind));
  switch (kind) {
    case percimpact::ProfileKind::linear:
      doc.add_meta("profile.linear_hi", p.linear_hi);
      doc.add_meta("profile.linear_lo", p.linear_lo);
      break;
    case percimpact::ProfileKind::usa:
      doc.add_meta("profile.floor", p.usa_floor);
      doc.add_meta("profile.amplitude", p.usa_amplitude);
      doc.add_meta("profile.center", p.usa_center);
      doc.add_meta("profile.scale", p.usa_scale);
      break;
    case percimpact::ProfileKind::uk:
      doc.add_meta("profile.floor", p.uk_floor);
      doc.add_meta("profile.amplitude", p.uk_amplitude);
      doc.add_meta("profile.center", p.uk_center);
      doc.add_meta("profile.scale", p.uk_scale);
      break;
    case percimpact::ProfileKind::split:
      doc.add_meta("profile.high", p.split_high);
      doc.add_meta("profile.low", p.split_low);
      doc.add_meta("profile.high_count", static_cast<double>(p.split_high_count));
      doc.add_meta("profile.low_count", static_cast<double>(p.split_low_count));
      doc.add_meta("profile.ramp_hi", p.split_ramp_hi);
      doc.add_meta("profile.ramp_lo", p.split_ramp_lo);
      break;
  }
}

void add_world_meta(ReportDocument& doc, const percimpact::WorldParams& w,
                    std::uint64_t seed) {
  doc.add_meta("world.n_series", static_cast<double>(w.n_series));
  doc.add_meta("world.per_series", static_cast<double>(w.per_series));
  doc.add_meta("world.mu_max", w.mu_max);
  doc.add_meta("world.mu_min", w.mu_min);
  doc.add_meta("world.sigma", w.sigma);
  doc.add_meta("seed", std::to_string(seed));
  doc.add_meta("rng", percimpact::kRngAlgorithm);
}

int cmd_simulate(const std::string& profile, std::uint64_t seed,
                 std::size_t replicates, double level_percent,
                 const std::string& out, const std::string& format) {
  const percimpact::ProfileKind kind = percimpact::parse_profile_kind(profile);
  const percimpact::PercentileLevel level(level_percent);
  const percimpact::WorldParams world_params;
  const percimpact::ProfileParams profile_params;
  const percimpact::StudySummary study = percimpact::replicate_study(
      kind, seed, replicates, level, world_params, profile_params);

  ReportDocument doc;
  doc.title = "percimpact simulate";
  doc.add_meta("command", "simulate");
  doc.add_meta("tool_version", kToolVersion);
  doc.add_meta("level_percent", level_percent);
  doc.add_meta("replicates", static_cast<double>(replicates));
  add_world_meta(doc, world_params, seed);
  add_profile_meta(doc, profile_params, kind);

  ReportDocument::Table rows;
  rows.name = "replicates";
  rows.columns = {"replicate", "seed", "pooled_ratio", "afcl", "cfal", "gap_factor"};
  for (std::size_t i = 0; i < study.replicates.size(); ++i) {
    const percimpact::ExperimentResult& r = study.replicates[i];
    rows.rows.push_back({static_cast<double>(i), std::to_string(r.seed),
                         r.pooled_ratio, r.afcl, r.cfal,
                         number_or_inf(r.gap_factor)});
  }
  doc.tables.push_back(std::move(rows));

  ReportDocument::Table summary;
  summary.name = "summary";
  summary.columns = {"statistic", "median", "q25", "q75"};
  const auto push = [&summary](const char* name, const percimpact::SummaryStats& s) {
    summary.rows.push_back({std::string(name), s.median, s.q25, s.q75});
  };
  push("pooled_ratio", study.pooled_ratio);
  push("afcl", study.afcl);
  push("cfal", study.cfal);
  push("gap_factor", study.gap_factor);
  doc.tables.push_back(std::move(summary));

  write_report(doc, out, format);
  if (!out.empty()) {
    std::cout << "profile=" << profile
              << " median pooled_ratio=" << percimpact::format_sig6(study.pooled_ratio.median)
              << " afcl=" << percimpact::format_sig6(study.afcl.median)
              << " cfal=" << percimpact::format_sig6(study.cfal.median)
              << " factor=" << percimpact::format_sig6(study.gap_factor.median)
              << "\n";
  }
  return 0;
}

int cmd_world(const percimpact::WorldParams& params, std::uint64_t seed,
              const std::string& out, const std::string& format) {
  const percimpact::WorldModel world = percimpact::build_world(params, seed);
  const auto counts = world.unit_top_counts(percimpact::PercentileLevel(10.0));

  std::vector<double> ranks, ratios;
  ranks.reserve(counts.size());
  for (const percimpact::UnitTopCount& c : counts) {
    ranks.push_back(static_cast<double>(c.unit_index + 1));
    ratios.push_back(c.ratio);
  }
  ReportDocument doc;
  doc.title = "percimpact world";
  doc.add_meta("command", "world");
  doc.add_meta("tool_version", kToolVersion);
  add_world_meta(doc, params, seed);
  if (ranks.size() >= 3) {  // shape fits need more points than coefficients
    const percimpact::QuadraticFit quad = percimpact::fit_quadratic(ranks, ratios);
    const percimpact::LinearFit line = percimpact::fit_linear(ranks, ratios);
    doc.add_meta("quadratic_fit.a", quad.a);
    doc.add_meta("quadratic_fit.b", quad.b);
    doc.add_meta("quadratic_fit.c", quad.c);
    doc.add_meta("quadratic_fit.rss", quad.rss);
    doc.add_meta("linear_fit.rss", line.rss);
  }

  ReportDocument::Table grid;
  grid.name = "series";
  grid.columns = {"index", "mu", "top10_count", "ratio"};
  for (std::size_t i = 0; i < counts.size(); ++i) {
    grid.rows.push_back({static_cast<double>(counts[i].unit_index),
                         world.series()[i].mu,
                         static_cast<double>(counts[i].count), counts[i].ratio});
  }
  doc.tables.push_back(std::move(grid));
  write_report(doc, out, format);
  return 0;
}

int cmd_fit_ep(const std::string& input, double p_total) {
  std::ifstream file(input);
  if (!file) throw percimpact::io_error("cannot open input file: " + input);
  std::vector<std::pair<percimpact::PercentileLevel, double>> counts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line == "level,count")) continue;
    std::istringstream row(line);
    std::string x_text, n_text;
    if (!std::getline(row, x_text, ',') || !std::getline(row, n_text)) {
      throw percimpact::validation_error("line " + std::to_string(line_no) +
                                         ": expected 'level,count'");
    }
    counts.emplace_back(
        percimpact::PercentileLevel(
            percimpact::detail::parse_number(x_text, line_no, "level")),
        percimpact::detail::parse_number(n_text, line_no, "count"));
  }
  const percimpact::PowerLawFit fit = percimpact::fit_ep_powerlaw(counts, p_total);
  for (const std::string& warning : fit.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  std::cout << "ep = " << percimpact::format_sig6(fit.ep) << "\n"
            << "slope = " << percimpact::format_sig6(fit.slope) << "\n"
            << "intercept = " << percimpact::format_sig6(fit.intercept)
            << " (expected from p_total: "
            << percimpact::format_sig6(fit.intercept_expected) << ")\n"
            << "r_squared = " << percimpact::format_sig6(fit.r_squared) << "\n";
  return 0;
}

int cmd_ks_test(const std::string& input) {
  std::ifstream file(input);
  if (!file) throw percimpact::io_error("cannot open input file: " + input);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const double v = percimpact::detail::parse_number(line, line_no, "value");
    if (!(v > 0.0)) {
      throw percimpact::validation_error("line " + std::to_string(line_no) +
                                         ": value must be positive, got " + line);
    }
    values.push_back(v);
  }
  const percimpact::KsResult result = percimpact::ks_lognormal_test(values);
  std::cout << "n = " << result.n << "\n"
            << "mu = " << percimpact::format_sig6(result.fitted.mu) << "\n"
            << "sigma = " << percimpact::format_sig6(result.fitted.sigma) << "\n"
            << "D = " << percimpact::format_sig6(result.d) << "\n"
            << "p = " << percimpact::format_sig6(result.p_value) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Percentile-based research-impact indicators: CFAL/AFCL "
               "aggregation and synthetic citation simulations"};
  app.require_subcommand(1);

  std::string input, fixture, out, format = "csv", group_by = "all", country,
              profile = "linear";
  double level = 0.01;
  double p_total = 0.0;
  std::uint64_t seed = 12345;
  std::size_t replicates = 1;
  percimpact::WorldParams world_params;

  auto* assess = app.add_subcommand("assess", "Per-group AFCL/CFAL expected counts");
  auto* assess_input = assess->add_option("--input", input, "Units CSV path");
  assess->add_option("--fixture", fixture,
                     "Bundled fixture (usa_top25, country_totals, university_sample)")
      ->excludes(assess_input);
  assess->add_option("--group-by", group_by, "country|all")
      ->check(CLI::IsMember({"country", "all"}));
  assess->add_option("--level", level, "Top percentile x in (0,100]");
  assess->add_option("--out", out, "Output path (default stdout)");
  assess->add_option("--format", format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* cumulative =
      app.add_subcommand("cumulative", "Cumulative CFAL curve for one country");
  auto* cumulative_input = cumulative->add_option("--input", input, "Units CSV path");
  cumulative->add_option("--fixture", fixture, "Bundled fixture")
      ->excludes(cumulative_input);
  cumulative->add_option("--country", country, "Country name")->required();
  cumulative->add_option("--level", level, "Top percentile x in (0,100]");
  cumulative->add_option("--out", out, "Output path (default stdout)");
  cumulative->add_option("--format", format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* simulate = app.add_subcommand("simulate", "Seeded CFAL/AFCL experiments");
  simulate->add_option("--profile", profile, "linear|usa|uk|split");
  simulate->add_option("--seed", seed, "Master seed");
  simulate->add_option("--replicates", replicates, "Replicate count");
  simulate->add_option("--level", level, "Top percentile x in (0,100]");
  simulate->add_option("--out", out, "Output path (default stdout)");
  simulate->add_option("--format", format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* world = app.add_subcommand("world", "Build one synthetic world");
  world->add_option("--series", world_params.n_series, "Number of primary series");
  world->add_option("--per-series", world_params.per_series, "Values per series");
  world->add_option("--mu-max", world_params.mu_max, "Top-series log median");
  world->add_option("--mu-min", world_params.mu_min, "Bottom-series log median");
  world->add_option("--sigma", world_params.sigma, "Common log sigma");
  world->add_option("--seed", seed, "Seed");
  world->add_option("--out", out, "Output path (default stdout)");
  world->add_option("--format", format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* fit_ep = app.add_subcommand("fit-ep", "Power-law e_p fit from level,count CSV");
  fit_ep->add_option("--input", input, "CSV of level,count")->required();
  fit_ep->add_option("--p-total", p_total, "Total paper count")->required();

  auto* ks = app.add_subcommand("ks-test", "Lognormality KS test, one value per line");
  ks->add_option("--input", input, "Value-per-line file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (assess->parsed()) {
      if (input.empty() && fixture.empty()) {
        throw percimpact::validation_error("assess: need --input or --fixture");
      }
      return cmd_assess(input, fixture, group_by, level, out, format);
    }
    if (cumulative->parsed()) {
      if (input.empty() && fixture.empty()) {
        throw percimpact::validation_error("cumulative: need --input or --fixture");
      }
      return cmd_cumulative(input, fixture, country, level, out, format);
    }
    if (simulate->parsed()) {
      return cmd_simulate(profile, seed, replicates, level, out, format);
    }
    if (world->parsed()) return cmd_world(world_params, seed, out, format);
    if (fit_ep->parsed()) return cmd_fit_ep(input, p_total);
    if (ks->parsed()) return cmd_ks_test(input);
  } catch (const percimpact::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const percimpact::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
