#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "logens/dataset.hpp"

namespace logens {

struct FitOptions {
  /// Converged once the largest absolute coefficient update is below this.
  double tol = 1e-8;
  int max_iter = 50;
  /// Coefficients beyond this magnitude indicate separation; they are capped.
  double coef_cap = 30.0;
  /// Optional ridge penalty on the slopes (not the intercept).
  double ridge = 0.0;
};

struct FitInfo {
  int iterations = 0;
  double log_likelihood = 0.0;
  bool converged = false;
  bool separated = false;
  double intercept_std_error = 0.0;
  double intercept_p_value = 1.0;
  /// Per coefficient, aligned with LogitModel::features. Aliased columns
  /// (linearly dependent on earlier ones) get NaN errors and p-value 1.
  std::vector<double> std_errors;
  std::vector<double> p_values;
  std::vector<bool> aliased;
  /// Log-likelihood after each accepted Newton step, starting point first.
  std::vector<double> log_likelihood_trace;
  /// Features removed by backward elimination, in removal order.
  std::vector<std::string> eliminated;
};

/// Fitted logistic model: logit(p) = intercept + Σ coefficients[i]·x[features[i]].
struct LogitModel {
  double intercept = 0.0;
  std::vector<std::string> features;
  std::vector<double> coefficients;
  FitInfo info;

  std::optional<std::size_t> index_of(std::string_view feature) const;
  /// Coefficient of `feature`; 0 when the model does not use it.
  double coefficient_or_zero(std::string_view feature) const;
  /// Linear predictor for one record; throws DataError naming a missing feature.
  double linear_predictor(const FeatureRow& row) const;
};

/// Maximum-likelihood fit on a design matrix (no intercept column; one is
/// added internally) by Newton/IRLS with step halving.
LogitModel fit_design(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      std::vector<std::string> names, const FitOptions& options = {});

LogitModel fit(const Dataset& train, std::span<const std::string> features,
               const FitOptions& options = {});

double predict_proba(const LogitModel& m, const FeatureRow& row);
/// Probabilities for every row of `d`.
Eigen::VectorXd predict_proba(const LogitModel& m, const Dataset& d);

struct EliminationOptions {
  double alpha = 0.05;
  FitOptions fit;
  /// When set, after the significance pass also drop the feature with the
  /// smallest |β|·sd(x) while it is below this threshold.
  std::optional<double> min_effect;
};

/// Backward elimination on a design matrix: refit and drop the single
/// feature with the largest Wald p-value above alpha until none remains
/// or one feature is left.
LogitModel backward_eliminate_design(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                     std::vector<std::string> names,
                                     const EliminationOptions& options = {});

LogitModel backward_eliminate(const Dataset& train, std::span<const std::string> features,
                              const EliminationOptions& options = {});

/// e^β for `feature`: the odds multiplier of a unit increase.
double odds_multiplier(const LogitModel& m, std::string_view feature);

}  // namespace logens
