#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace logens {

struct PredictionMatrix;

/// Expanded least-squares objective ‖y − Pλ‖² = λᵀGλ − 2cᵀλ + yᵀy.
struct GramSystem {
  Eigen::MatrixXd gram;     // G = PᵀP
  Eigen::VectorXd cross;    // c = Pᵀy
  double y_norm_sq = 0.0;   // yᵀy

  std::size_t size() const { return static_cast<std::size_t>(cross.size()); }
  double objective(const Eigen::VectorXd& lambda) const;
  /// ∇ = 2Gλ − 2c.
  Eigen::VectorXd gradient(const Eigen::VectorXd& lambda) const;
};

GramSystem build_gram(const Eigen::MatrixXd& predictions, const Eigen::VectorXd& target);
GramSystem build_gram(const PredictionMatrix& pm);

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 200000;
  double sparsity_tol = 1e-8;
  /// Iterations between attempts to solve exactly on the current support.
  int polish_interval = 50;
  bool record_trace = false;
};

struct WeightSolution {
  Eigen::VectorXd lambda;
  double objective = 0.0;
  std::vector<std::size_t> support;
  double kkt_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Objective per iteration; filled only when SolverOptions::record_trace.
  std::vector<double> objective_trace;
};

/// Euclidean projection onto {λ : λ ≥ 0, Σλ = 1} (sort-based).
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

/// Minimises λᵀGλ − 2cᵀλ + yᵀy over the probability simplex.
WeightSolution solve_simplex_qp(const GramSystem& gs, const SolverOptions& options = {});

struct KktVerdict {
  bool pass = false;
  double residual = 0.0;
};

/// First-order optimality certificate: gradient components equal on the
/// support and no smaller than that common value off the support.
KktVerdict check_kkt(const GramSystem& gs, const Eigen::VectorXd& lambda, double tol);
KktVerdict check_kkt(const GramSystem& gs, const WeightSolution& w, double tol);

}  // namespace logens
