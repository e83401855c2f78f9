#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace ibd::numeric {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(sum_i exp(v_i)); -inf for an empty input or when every term is -inf.
inline double log_sum_exp(std::span<const double> values) {
  double top = kNegInf;
  for (double v : values) top = std::max(top, v);
  if (top == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - top);
  return top + std::log(sum);
}

// Inverse-CDF draw from the categorical law proportional to exp(log_weights).
// u must lie in [0, 1). Weights are shifted by their maximum before
// exponentiation so arbitrarily large log-weights are safe.
inline std::size_t sample_log_categorical(std::span<const double> log_weights, double u) {
  double top = kNegInf;
  for (double v : log_weights) top = std::max(top, v);
  double total = 0.0;
  for (double v : log_weights) total += std::exp(v - top);
  double target = u * total;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    const double w = std::exp(log_weights[i] - top);
    if (w <= 0.0) continue;
    last_positive = i;
    if (target < w) return i;
    target -= w;
  }
  // rounding pushed the target past the last bin
  return last_positive;
}

}  // namespace ibd::numeric
