#pragma once

#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "logens/dataset.hpp"

namespace fixture {

inline std::vector<std::string> names(std::size_t k, const std::string& prefix = "f") {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < k; ++j) out.push_back(prefix + std::to_string(j));
  return out;
}

inline std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("id" + std::to_string(i));
  return out;
}

inline logens::Dataset dataset(const Eigen::MatrixXd& x, std::vector<int> labels, std::vector<int> periods = {},
                               std::vector<std::string> feature_names = {}) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (periods.empty()) periods.assign(n, 0);
  if (feature_names.empty()) feature_names = names(static_cast<std::size_t>(x.cols()));
  return logens::Dataset(std::move(feature_names), x, std::move(labels), std::move(periods), ids(n));
}

// Gaussian features with labels drawn from a logistic model.
struct LogisticSample {
  Eigen::MatrixXd x;
  std::vector<int> y;
};

inline LogisticSample logistic_sample(std::size_t n, const std::vector<double>& beta, double intercept,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  LogisticSample s;
  s.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(beta.size()));
  for (std::size_t i = 0; i < n; ++i) {
    double z = intercept;
    for (std::size_t j = 0; j < beta.size(); ++j) {
      const double v = normal(rng);
      s.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      z += beta[j] * v;
    }
    s.y.push_back(unif(rng) < 1.0 / (1.0 + std::exp(-z)) ? 1 : 0);
  }
  return s;
}

inline Eigen::VectorXd to_vector(const std::vector<int>& y) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) v(static_cast<Eigen::Index>(i)) = y[i];
  return v;
}

}  // namespace fixture
