#pragma once

// Aggregation and goodness-of-fit helpers for Monte Carlo checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "ibd/errors.hpp"

namespace ibd::stats {

inline double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DomainError("total_variation: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

// Expected-scale bound for the TV distance between a law p and an empirical
// law from n draws: half the sum of `sigmas` binomial standard deviations.
inline double multinomial_tv_bound(std::span<const double> p, std::size_t n, double sigmas = 4.0) {
  double acc = 0.0;
  for (double v : p) acc += std::sqrt(v * (1.0 - v) / static_cast<double>(n));
  return 0.5 * sigmas * acc;
}

struct ChiSquare {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
};

// Pearson goodness of fit. Cells with expected count below min_expected are
// pooled into one cell before testing.
inline ChiSquare chi_square_gof(std::span<const double> observed_counts, std::span<const double> probabilities,
                                double min_expected = 5.0) {
  if (observed_counts.size() != probabilities.size()) throw DomainError("chi_square_gof: size mismatch");
  double n = 0.0;
  for (double c : observed_counts) n += c;
  double pooled_obs = 0.0, pooled_exp = 0.0;
  ChiSquare r;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < observed_counts.size(); ++i) {
    const double e = probabilities[i] * n;
    if (e < min_expected) {
      pooled_obs += observed_counts[i];
      pooled_exp += e;
      continue;
    }
    r.statistic += (observed_counts[i] - e) * (observed_counts[i] - e) / e;
    ++cells;
  }
  if (pooled_exp > 0.0) {
    r.statistic += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++cells;
  } else if (pooled_obs > 0.0) {
    // mass where none was expected
    r.p_value = 0.0;
    r.dof = cells;
    return r;
  }
  if (cells < 2) return r;
  r.dof = cells - 1;
  boost::math::chi_squared dist(static_cast<double>(r.dof));
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

struct Proportion {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double estimate = 0.0;
  double lower = 0.0;  // Wilson 95% interval
  double upper = 0.0;
};

inline Proportion proportion(std::size_t successes, std::size_t trials, double z = 1.959963984540054) {
  Proportion p{successes, trials};
  if (trials == 0) return p;
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  p.estimate = phat;
  const double denom = 1.0 + z * z / n;
  const double centre = (phat + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z * z / (4.0 * n * n)) / denom;
  p.lower = std::max(0.0, centre - half);
  p.upper = std::min(1.0, centre + half);
  return p;
}

inline Proportion frequency(std::span<const bool> outcomes) {
  return proportion(static_cast<std::size_t>(std::count(outcomes.begin(), outcomes.end(), true)), outcomes.size());
}

struct MeanSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double ci95_half_width = 0.0;
  double min = 0.0;
  double max = 0.0;
};

inline MeanSummary summarize(std::span<const double> values) {
  MeanSummary s;
  s.n = values.size();
  if (values.empty()) return s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(s.n - 1));
    s.ci95_half_width = 1.959963984540054 * s.stddev / std::sqrt(static_cast<double>(s.n));
  }
  return s;
}

}  // namespace ibd::stats
