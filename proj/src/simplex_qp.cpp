#include "logens/simplex_qp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>

#include "logens/ensemble.hpp"
#include "logens/errors.hpp"

namespace logens {

double GramSystem::objective(const Eigen::VectorXd& lambda) const {
  return lambda.dot(gram * lambda) - 2.0 * cross.dot(lambda) + y_norm_sq;
}

Eigen::VectorXd GramSystem::gradient(const Eigen::VectorXd& lambda) const {
  return 2.0 * (gram * lambda - cross);
}

GramSystem build_gram(const Eigen::MatrixXd& predictions, const Eigen::VectorXd& target) {
  if (predictions.cols() == 0) throw ConfigError("gram: prediction matrix has no columns");
  if (predictions.rows() != target.size())
    throw ConfigError("gram: target length differs from prediction rows");
  const auto k = predictions.cols();
  GramSystem gs;
  gs.gram = Eigen::MatrixXd::Zero(k, k);
  gs.gram.selfadjointView<Eigen::Lower>().rankUpdate(predictions.transpose());
  gs.gram.triangularView<Eigen::StrictlyUpper>() = gs.gram.transpose();
  gs.cross = predictions.transpose() * target;
  gs.y_norm_sq = target.squaredNorm();
  return gs;
}

GramSystem build_gram(const PredictionMatrix& pm) { return build_gram(pm.columns, pm.target); }

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  const auto k = v.size();
  std::vector<double> u(v.data(), v.data() + k);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    cumulative += u[static_cast<std::size_t>(j)];
    const double t = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

KktVerdict check_kkt(const GramSystem& gs, const Eigen::VectorXd& lambda, double tol) {
  if (lambda.size() != static_cast<Eigen::Index>(gs.size()))
    throw ConfigError("kkt: weight vector length differs from the system size");
  KktVerdict verdict;
  const double feasibility = std::max(std::fabs(lambda.sum() - 1.0), std::max(0.0, -lambda.minCoeff()));
  const Eigen::VectorXd g = gs.gradient(lambda);

  double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
  int count = 0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (lambda(i) <= 0.0) continue;
    lo = std::min(lo, g(i));
    hi = std::max(hi, g(i));
    sum += g(i);
    ++count;
  }
  if (count == 0) {
    verdict.residual = std::numeric_limits<double>::infinity();
    return verdict;
  }
  const double common = sum / count;
  double residual = std::max(hi - lo, feasibility);
  for (Eigen::Index j = 0; j < g.size(); ++j)
    if (lambda(j) <= 0.0) residual = std::max(residual, common - g(j));
  verdict.residual = residual;
  verdict.pass = residual <= tol;
  return verdict;
}

KktVerdict check_kkt(const GramSystem& gs, const WeightSolution& w, double tol) {
  return check_kkt(gs, w.lambda, tol);
}

namespace {

// Minimises the objective restricted to the support of `start` (entries above
// `cutoff`) subject to Σλ = 1, dropping coordinates that turn negative by a
// ratio test toward the equality-constrained minimiser.
std::optional<Eigen::VectorXd> polish_on_support(const GramSystem& gs, const Eigen::VectorXd& start,
                                                 double cutoff) {
  const auto k = start.size();
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < k; ++i)
    if (start(i) > cutoff) support.push_back(i);
  if (support.empty()) return std::nullopt;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(k);
  for (auto i : support) x(i) = start(i);
  x /= x.sum();

  while (!support.empty()) {
    const auto s = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(s + 1, s + 1);
    Eigen::VectorXd rhs(s + 1);
    for (Eigen::Index a = 0; a < s; ++a) {
      for (Eigen::Index b = 0; b < s; ++b)
        kkt(a, b) = 2.0 * gs.gram(support[static_cast<std::size_t>(a)], support[static_cast<std::size_t>(b)]);
      kkt(a, s) = 1.0;
      kkt(s, a) = 1.0;
      rhs(a) = 2.0 * gs.cross(support[static_cast<std::size_t>(a)]);
    }
    rhs(s) = 1.0;
    const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    if (!sol.allFinite()) return std::nullopt;

    const Eigen::VectorXd z = sol.head(s);
    if ((z.array() > 0.0).all()) {
      x.setZero();
      for (Eigen::Index a = 0; a < s; ++a) x(support[static_cast<std::size_t>(a)]) = z(a);
      return x;
    }
    double t = 1.0;
    Eigen::Index blocking = -1;
    for (Eigen::Index a = 0; a < s; ++a) {
      const double cur = x(support[static_cast<std::size_t>(a)]);
      if (z(a) <= 0.0) {
        const double ta = cur / (cur - z(a));
        if (ta < t || blocking < 0) {
          t = std::min(t, ta);
          blocking = a;
        }
      }
    }
    for (Eigen::Index a = 0; a < s; ++a) {
      auto& xi = x(support[static_cast<std::size_t>(a)]);
      xi += t * (z(a) - xi);
    }
    x(support[static_cast<std::size_t>(blocking)]) = 0.0;
    support.erase(support.begin() + blocking);
    x = x.cwiseMax(0.0);
    const double total = x.sum();
    if (total <= 0.0) return std::nullopt;
    x /= total;
  }
  return std::nullopt;
}

void finalise(const GramSystem& gs, const SolverOptions& options, WeightSolution& w) {
  Eigen::VectorXd& lambda = w.lambda;
  Eigen::Index best = 0;
  lambda.maxCoeff(&best);
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda(i) <= options.sparsity_tol) lambda(i) = 0.0;
  if (lambda.sum() <= 0.0) lambda(best) = 1.0;
  lambda /= lambda.sum();
  Eigen::Index largest = 0;
  lambda.maxCoeff(&largest);
  lambda(largest) += 1.0 - lambda.sum();

  w.support.clear();
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda(i) > 0.0) w.support.push_back(static_cast<std::size_t>(i));
  w.objective = gs.objective(lambda);
  w.kkt_residual = check_kkt(gs, lambda, options.tol).residual;
}

}  // namespace

WeightSolution solve_simplex_qp(const GramSystem& gs, const SolverOptions& options) {
  const auto k = static_cast<Eigen::Index>(gs.size());
  if (k == 0) throw ConfigError("qp: empty system");
  if (gs.gram.rows() != k || gs.gram.cols() != k)
    throw ConfigError("qp: gram matrix shape does not match cross-product vector");
  if (!gs.gram.allFinite() || !gs.cross.allFinite() || !std::isfinite(gs.y_norm_sq))
    throw NumericalError("qp: non-finite gram system");
  if (options.tol <= 0.0 || options.max_iter < 0 || options.sparsity_tol < 0.0 ||
      options.polish_interval < 1)
    throw ConfigError("qp: invalid solver options");

  WeightSolution w;
  if (k == 1) {
    w.lambda = Eigen::VectorXd::Ones(1);
    w.converged = true;
    finalise(gs, options, w);
    if (options.record_trace) w.objective_trace.push_back(w.objective);
    return w;
  }

  // Row-sum bound on the largest eigenvalue of G; the gradient 2Gλ − 2c is
  // Lipschitz with constant 2·λmax(G).
  double lipschitz = 2.0 * gs.gram.cwiseAbs().rowwise().sum().maxCoeff();
  if (!(lipschitz > 0.0)) lipschitz = 1.0;

  Eigen::VectorXd lambda = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
  double f = gs.objective(lambda);
  if (options.record_trace) w.objective_trace.push_back(f);

  auto try_polish = [&]() -> bool {
    auto candidate = polish_on_support(gs, lambda, options.sparsity_tol);
    if (!candidate) return false;
    const double fc = gs.objective(*candidate);
    if (!(fc <= f)) return false;
    lambda = *candidate;
    f = fc;
    return true;
  };

  int it = 0;
  for (; it < options.max_iter; ++it) {
    if (check_kkt(gs, lambda, options.tol).pass) {
      w.converged = true;
      break;
    }
    const Eigen::VectorXd next = project_to_simplex(lambda - gs.gradient(lambda) / lipschitz);
    const double fn = gs.objective(next);
    bool moved = false;
    if (fn <= f) {
      moved = (next - lambda).cwiseAbs().maxCoeff() > 0.0;
      lambda = next;
      f = fn;
    }
    if (!moved || (it + 1) % options.polish_interval == 0) {
      const bool improved = try_polish();
      if (!moved && !improved) {
        // Stalled at working precision.
        w.converged = check_kkt(gs, lambda, options.tol).pass;
        if (options.record_trace) w.objective_trace.push_back(f);
        ++it;
        break;
      }
    }
    if (options.record_trace) w.objective_trace.push_back(f);
  }
  w.iterations = it;
  w.lambda = lambda;
  finalise(gs, options, w);
  return w;
}

}  // namespace logens
