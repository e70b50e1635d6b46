#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace logens {

// Smallest and largest doubles strictly inside (0, 1).
inline constexpr double kProbFloor = std::numeric_limits<double>::min();
inline constexpr double kProbCeil = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;

/// Logistic function, evaluated without overflow and kept strictly inside
/// (0, 1) even when |z| is large enough for the exact value to round to 0 or 1.
inline double sigmoid(double z) {
  double p;
  if (z >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-z));
  } else {
    const double e = std::exp(z);
    p = e / (1.0 + e);
  }
  return std::clamp(p, kProbFloor, kProbCeil);
}

/// log(1 + e^z) without overflow.
inline double log1p_exp(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

/// Bernoulli log-likelihood contribution y·z − log(1 + e^z).
inline double bernoulli_loglik(double y, double z) { return y * z - log1p_exp(z); }

/// Two-sided p-value of a standard normal statistic.
inline double two_sided_p(double z) { return std::erfc(std::fabs(z) / std::sqrt(2.0)); }

/// Median of a non-empty sample (mean of the two middle values for even n).
inline double median(std::vector<double> values) {
  const auto n = values.size();
  auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace logens
