#include "logens/logit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "logens/errors.hpp"
#include "logens/numeric.hpp"

namespace logens {
namespace {

constexpr double kAliasTolerance = 1e-9;

// Greedy column selection by Gram-Schmidt with reorthogonalisation: a column
// is aliased when its residual against the already kept columns is
// negligible relative to its own norm. Earlier columns always win.
std::vector<bool> detect_aliased(const Eigen::MatrixXd& x) {
  const auto n = x.rows();
  std::vector<bool> aliased(static_cast<std::size_t>(x.cols()), false);
  Eigen::MatrixXd q(n, x.cols());
  Eigen::Index kept = 0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    Eigen::VectorXd v = x.col(j);
    const double norm = v.norm();
    if (norm == 0.0) {
      aliased[static_cast<std::size_t>(j)] = true;
      continue;
    }
    for (int pass = 0; pass < 2; ++pass)
      if (kept > 0) v -= q.leftCols(kept) * (q.leftCols(kept).transpose() * v);
    const double rnorm = v.norm();
    if (rnorm <= kAliasTolerance * norm) {
      aliased[static_cast<std::size_t>(j)] = true;
      continue;
    }
    q.col(kept++) = v / rnorm;
  }
  return aliased;
}

double penalised_loglik(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& beta, double ridge) {
  const Eigen::VectorXd eta = x * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += bernoulli_loglik(y(i), eta(i));
  if (ridge > 0.0) ll -= 0.5 * ridge * beta.tail(beta.size() - 1).squaredNorm();
  return ll;
}

Eigen::MatrixXd information(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta, double ridge) {
  const Eigen::VectorXd eta = x * beta;
  Eigen::VectorXd w(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double p = sigmoid(eta(i));
    w(i) = p * (1.0 - p);
  }
  Eigen::MatrixXd h = x.transpose() * (x.array().colwise() * w.array()).matrix();
  if (ridge > 0.0)
    h.diagonal().tail(h.cols() - 1).array() += ridge;
  return h;
}

}  // namespace

std::optional<std::size_t> LogitModel::index_of(std::string_view feature) const {
  auto it = std::find(features.begin(), features.end(), feature);
  if (it == features.end()) return std::nullopt;
  return static_cast<std::size_t>(it - features.begin());
}

double LogitModel::coefficient_or_zero(std::string_view feature) const {
  auto i = index_of(feature);
  return i ? coefficients[*i] : 0.0;
}

double LogitModel::linear_predictor(const FeatureRow& row) const {
  double z = intercept;
  for (std::size_t i = 0; i < features.size(); ++i) {
    auto it = row.find(features[i]);
    if (it == row.end()) throw DataError("row is missing feature '" + features[i] + "'");
    z += coefficients[i] * it->second;
  }
  return z;
}

LogitModel fit_design(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      std::vector<std::string> names, const FitOptions& options) {
  const auto n = x.rows();
  const auto p = x.cols();
  if (static_cast<std::size_t>(p) != names.size())
    throw ConfigError("fit: feature names do not match design columns");
  if (y.size() != n) throw ConfigError("fit: label vector length differs from design rows");
  if (n < 2) throw DataError("fit: need at least 2 rows");
  if (!x.allFinite()) throw DataError("fit: design contains missing or non-finite values");
  const double events = y.sum();
  if (events <= 0.0 || events >= static_cast<double>(n))
    throw DataError("fit: labels contain a single class");
  if (options.tol <= 0.0 || options.max_iter < 1 || options.coef_cap <= 0.0 || options.ridge < 0.0)
    throw ConfigError("fit: invalid options");

  Eigen::MatrixXd full(n, p + 1);
  full.col(0).setOnes();
  full.rightCols(p) = x;

  const auto aliased_full = detect_aliased(full);
  std::vector<Eigen::Index> active;
  for (Eigen::Index j = 0; j <= p; ++j)
    if (!aliased_full[static_cast<std::size_t>(j)]) active.push_back(j);
  const Eigen::MatrixXd xa = full(Eigen::all, active);
  const auto k = xa.cols();

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
  const double ybar = events / static_cast<double>(n);
  beta(0) = std::log(ybar / (1.0 - ybar));

  FitInfo info;
  double ll = penalised_loglik(xa, y, beta, options.ridge);
  info.log_likelihood_trace.push_back(ll);

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    const Eigen::VectorXd eta = xa * beta;
    Eigen::VectorXd resid(n);
    for (Eigen::Index i = 0; i < n; ++i) resid(i) = y(i) - sigmoid(eta(i));
    Eigen::VectorXd grad = xa.transpose() * resid;
    if (options.ridge > 0.0) grad.tail(k - 1) -= options.ridge * beta.tail(k - 1);
    const Eigen::MatrixXd h = information(xa, beta, options.ridge);
    Eigen::VectorXd delta = h.ldlt().solve(grad);
    if (!delta.allFinite()) delta = h.completeOrthogonalDecomposition().solve(grad);
    if (!delta.allFinite()) break;

    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd candidate;
    double ll_new = ll;
    for (int halving = 0; halving < 40; ++halving) {
      candidate = beta + step * delta;
      ll_new = penalised_loglik(xa, y, candidate, options.ridge);
      if (std::isfinite(ll_new) && ll_new >= ll) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    info.iterations = iter;
    if (!accepted) {
      // No ascent direction left at working precision.
      info.converged = true;
      break;
    }
    const double change = (step * delta).cwiseAbs().maxCoeff();
    beta = candidate;
    ll = ll_new;
    info.log_likelihood_trace.push_back(ll);
    if (beta.cwiseAbs().maxCoeff() > options.coef_cap) {
      info.separated = true;
      break;
    }
    if (change < options.tol) {
      info.converged = true;
      break;
    }
  }
  if (info.separated)
    beta = beta.cwiseMax(-options.coef_cap).cwiseMin(options.coef_cap);

  info.log_likelihood = penalised_loglik(xa, y, beta, 0.0);

  Eigen::MatrixXd cov;
  {
    const Eigen::MatrixXd h = information(xa, beta, options.ridge);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    cov = ldlt.solve(Eigen::MatrixXd::Identity(k, k));
  }
  auto se_of = [&](Eigen::Index a) {
    const double v = cov(a, a);
    return (std::isfinite(v) && v > 0.0) ? std::sqrt(v) : std::numeric_limits<double>::infinity();
  };
  auto p_of = [&](double b, double se) {
    return std::isfinite(se) ? two_sided_p(b / se) : 1.0;
  };

  LogitModel model;
  model.features = std::move(names);
  model.coefficients.assign(static_cast<std::size_t>(p), 0.0);
  info.std_errors.assign(static_cast<std::size_t>(p), std::numeric_limits<double>::quiet_NaN());
  info.p_values.assign(static_cast<std::size_t>(p), 1.0);
  info.aliased.assign(static_cast<std::size_t>(p), false);
  for (Eigen::Index j = 0; j < p; ++j) info.aliased[static_cast<std::size_t>(j)] = aliased_full[static_cast<std::size_t>(j + 1)];

  for (Eigen::Index a = 0; a < k; ++a) {
    const auto col = active[static_cast<std::size_t>(a)];
    const double se = se_of(a);
    if (col == 0) {
      model.intercept = beta(a);
      info.intercept_std_error = se;
      info.intercept_p_value = p_of(beta(a), se);
    } else {
      const auto j = static_cast<std::size_t>(col - 1);
      model.coefficients[j] = beta(a);
      info.std_errors[j] = se;
      info.p_values[j] = p_of(beta(a), se);
    }
  }
  model.info = std::move(info);
  return model;
}

LogitModel fit(const Dataset& train, std::span<const std::string> features,
               const FitOptions& options) {
  if (train.empty()) throw DataError("fit: dataset has no rows");
  return fit_design(train.design(features), train.label_vector(),
                    {features.begin(), features.end()}, options);
}

double predict_proba(const LogitModel& m, const FeatureRow& row) {
  return sigmoid(m.linear_predictor(row));
}

Eigen::VectorXd predict_proba(const LogitModel& m, const Dataset& d) {
  Eigen::VectorXd z = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d.rows()), m.intercept);
  for (std::size_t i = 0; i < m.features.size(); ++i) {
    if (!d.has_feature(m.features[i]))
      throw DataError("data is missing feature '" + m.features[i] + "'");
    const auto col = d.feature_index(m.features[i]);
    if (d.missing_mask().col(static_cast<Eigen::Index>(col)).any())
      throw DataError("feature '" + m.features[i] + "' has missing values");
    z += m.coefficients[i] * d.column(col);
  }
  return z.unaryExpr([](double v) { return sigmoid(v); });
}

LogitModel backward_eliminate_design(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                     std::vector<std::string> names,
                                     const EliminationOptions& options) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0))
    throw ConfigError("backward elimination: alpha must lie strictly between 0 and 1");
  std::vector<Eigen::Index> cols(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index j = 0; j < x.cols(); ++j) cols[static_cast<std::size_t>(j)] = j;
  std::vector<std::string> removed;

  while (true) {
    LogitModel m = fit_design(x(Eigen::all, cols), y, names, options.fit);
    std::optional<std::size_t> drop;
    if (cols.size() > 1) {
      const auto& pv = m.info.p_values;
      const auto worst = static_cast<std::size_t>(std::max_element(pv.begin(), pv.end()) - pv.begin());
      if (pv[worst] > options.alpha) drop = worst;
    }
    if (!drop && options.min_effect && cols.size() > 1) {
      double smallest = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < cols.size(); ++j) {
        const auto c = x.col(cols[j]);
        const double mean = c.mean();
        const double sd = std::sqrt((c.array() - mean).square().sum() / static_cast<double>(std::max<Eigen::Index>(1, c.size() - 1)));
        const double effect = std::fabs(m.coefficients[j]) * sd;
        if (effect < smallest) {
          smallest = effect;
          if (effect < *options.min_effect) drop = j;
        }
      }
    }
    if (!drop) {
      m.info.eliminated = std::move(removed);
      return m;
    }
    removed.push_back(names[*drop]);
    names.erase(names.begin() + static_cast<std::ptrdiff_t>(*drop));
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(*drop));
  }
}

LogitModel backward_eliminate(const Dataset& train, std::span<const std::string> features,
                              const EliminationOptions& options) {
  if (train.empty()) throw DataError("backward elimination: dataset has no rows");
  return backward_eliminate_design(train.design(features), train.label_vector(),
                                   {features.begin(), features.end()}, options);
}

double odds_multiplier(const LogitModel& m, std::string_view feature) {
  auto i = m.index_of(feature);
  if (!i) throw ConfigError("odds multiplier: model does not use feature '" + std::string(feature) + "'");
  return std::exp(m.coefficients[*i]);
}

}  // namespace logens
