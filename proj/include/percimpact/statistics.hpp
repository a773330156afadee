#ifndef PERCIMPACT_STATISTICS_HPP_
#define PERCIMPACT_STATISTICS_HPP_

// Lognormal sampling and fitting, Kolmogorov-Smirnov lognormality
// testing, and the small least-squares fits used by the toolkit
// (quadratic ratio-vs-rank curves, log-log power laws for e_p).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "percimpact/errors.hpp"
#include "percimpact/indicator.hpp"
#include "percimpact/random.hpp"

namespace percimpact {

// Natural-log parameterization: mu and sigma are the mean and standard
// deviation of ln(value). exp(mu) is the distribution median.
struct LognormalParams {
  double mu = 0.0;
  double sigma = 1.0;
};

inline std::vector<double> sample_lognormal(const LognormalParams& params,
                                            std::size_t n, RandomStream& stream) {
  if (n == 0) throw validation_error("sample_lognormal: n must be >= 1");
  if (!(params.sigma > 0.0)) {
    throw validation_error("sample_lognormal: sigma must be positive");
  }
  std::vector<double> values(n);
  for (double& v : values) {
    v = std::exp(params.mu + params.sigma * stream.next_normal());
  }
  return values;
}

// Moment fit on logs: mu = mean of ln(values), sigma = sample standard
// deviation of ln(values) with the n-1 denominator.
inline LognormalParams fit_lognormal(std::span<const double> values) {
  if (values.size() < 2) {
    throw validation_error("fit_lognormal: need at least 2 values");
  }
  double sum = 0.0;
  for (double v : values) {
    if (!(v > 0.0)) {
      throw validation_error("fit_lognormal: values must be positive");
    }
    sum += std::log(v);
  }
  const double n = static_cast<double>(values.size());
  const double mu = sum / n;
  double ss = 0.0;
  for (double v : values) {
    const double d = std::log(v) - mu;
    ss += d * d;
  }
  const double sigma = std::sqrt(ss / (n - 1.0));
  if (!(sigma > 0.0)) {
    throw validation_error("fit_lognormal: degenerate sample (sigma = 0)");
  }
  return LognormalParams{mu, sigma};
}

inline double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

// Survival function of the asymptotic Kolmogorov distribution,
// Q(lambda) = P(K > lambda). Uses the alternating series for large
// lambda and the theta-function form for small lambda, where the
// alternating series converges too slowly.
inline double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    const double t = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int j = 1; j <= 20; j += 2) {  // odd j only
      const double term = std::exp(-static_cast<double>(j) * j * t);
      cdf += term;
      if (term < 1e-16 * cdf) break;
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double q = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    q += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * q, 0.0, 1.0);
}

struct KsResult {
  double d = 0.0;        // supremum deviation between ECDF and model CDF
  double p_value = 1.0;  // asymptotic, conservative (parameters estimated)
  std::size_t n = 0;
  LognormalParams fitted;
};

// One-sample KS test of lognormality with parameters estimated from the
// sample itself. D is taken over both sides of each ECDF step; the
// p-value uses the effective size sqrt(n) + 0.12 + 0.11/sqrt(n).
inline KsResult ks_lognormal_test(std::span<const double> values) {
  if (values.size() < 3) {
    throw validation_error("ks_lognormal_test: need at least 3 values");
  }
  const LognormalParams fitted = fit_lognormal(values);
  std::vector<double> logs;
  logs.reserve(values.size());
  for (double v : values) logs.push_back(std::log(v));
  std::sort(logs.begin(), logs.end());

  const double n = static_cast<double>(logs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const double f = normal_cdf((logs[i] - fitted.mu) / fitted.sigma);
    const double upper = static_cast<double>(i + 1) / n - f;
    const double lower = f - static_cast<double>(i) / n;
    d = std::max({d, upper, lower});
  }
  const double sqrt_n = std::sqrt(n);
  const double lambda = d * (sqrt_n + 0.12 + 0.11 / sqrt_n);
  return KsResult{d, kolmogorov_q(lambda), logs.size(), fitted};
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rss = 0.0;
};

inline LinearFit fit_linear(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw validation_error("fit_linear: need >= 2 matching points");
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12 * std::max(1.0, sxx * n)) {
    throw validation_error("fit_linear: x values are degenerate");
  }
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    fit.rss += r * r;
  }
  return fit;
}

struct QuadraticFit {
  double a = 0.0;  // y = a x^2 + b x + c
  double b = 0.0;
  double c = 0.0;
  double rss = 0.0;
};

// Least squares via the 3x3 normal equations with partial pivoting.
// Inputs here are small and well conditioned (ranks, ratios, logs).
inline QuadraticFit fit_quadratic(std::span<const double> xs,
                                  std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 3) {
    throw validation_error("fit_quadratic: need >= 3 matching points");
  }
  double s1 = static_cast<double>(xs.size());
  double sx = 0.0, sx2 = 0.0, sx3 = 0.0, sx4 = 0.0;
  double sy = 0.0, sxy = 0.0, sx2y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i], x2 = x * x;
    sx += x;
    sx2 += x2;
    sx3 += x2 * x;
    sx4 += x2 * x2;
    sy += ys[i];
    sxy += x * ys[i];
    sx2y += x2 * ys[i];
  }
  double m[3][4] = {{sx4, sx3, sx2, sx2y},
                    {sx3, sx2, sx, sxy},
                    {sx2, sx, s1, sy}};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row) {
      if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
    }
    if (std::abs(m[pivot][col]) < 1e-12 * std::max(1.0, std::abs(sx4))) {
      throw validation_error("fit_quadratic: rank-deficient system");
    }
    std::swap(m[col], m[pivot]);
    for (int row = col + 1; row < 3; ++row) {
      const double f = m[row][col] / m[col][col];
      for (int k = col; k < 4; ++k) m[row][k] -= f * m[col][k];
    }
  }
  QuadraticFit fit;
  fit.c = m[2][3] / m[2][2];
  fit.b = (m[1][3] - m[1][2] * fit.c) / m[1][1];
  fit.a = (m[0][3] - m[0][2] * fit.c - m[0][1] * fit.b) / m[0][0];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.a * xs[i] * xs[i] + fit.b * xs[i] + fit.c);
    fit.rss += r * r;
  }
  return fit;
}

struct PowerLawFit {
  double ep = 0.0;      // 10^(-slope)
  double slope = 0.0;   // of lg(count) on lg(x)
  double intercept = 0.0;
  double intercept_expected = 0.0;  // lg(p_total) + 2 lg(ep)
  double r_squared = 1.0;
  std::vector<std::string> warnings;
};

// Estimates e_p by ordinary least squares of lg(count) against lg(x)
// over several top-percentile counts. Levels with nonpositive counts
// are dropped with a warning.
inline PowerLawFit fit_ep_powerlaw(
    std::span<const std::pair<PercentileLevel, double>> counts, double p_total) {
  if (!(p_total > 0.0)) {
    throw validation_error("fit_ep_powerlaw: p_total must be positive");
  }
  PowerLawFit fit;
  std::vector<double> lx, ln;
  for (const auto& [level, n_papers] : counts) {
    if (!(n_papers > 0.0)) {
      fit.warnings.push_back("dropped level x=" + std::to_string(level.percent()) +
                             ": nonpositive count");
      continue;
    }
    lx.push_back(std::log10(level.percent()));
    ln.push_back(std::log10(n_papers));
  }
  if (lx.size() < 2) {
    throw validation_error("fit_ep_powerlaw: need >= 2 levels with positive counts");
  }
  const LinearFit line = fit_linear(lx, ln);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.ep = std::pow(10.0, -line.slope);
  fit.intercept_expected = std::log10(p_total) + 2.0 * std::log10(fit.ep);
  double mean = 0.0;
  for (double y : ln) mean += y;
  mean /= static_cast<double>(ln.size());
  double tss = 0.0;
  for (double y : ln) tss += (y - mean) * (y - mean);
  fit.r_squared = tss > 0.0 ? std::clamp(1.0 - line.rss / tss, 0.0, 1.0) : 1.0;
  return fit;
}

}  // namespace percimpact

#endif  // PERCIMPACT_STATISTICS_HPP_
