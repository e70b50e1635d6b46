#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "logens/dataset.hpp"
#include "logens/ensemble.hpp"
#include "logens/logit.hpp"
#include "logens/simplex_qp.hpp"

namespace logens {

struct EnsembleMember {
  double weight = 0.0;
  std::size_t pool_index = 0;
  LogitModel model;
};

struct FeatureSummary {
  double mean = 0.0;
  double median = 0.0;
  double stddev = 0.0;
};

/// Solver outcome carried alongside the ensemble for reporting.
struct SolverReport {
  double objective = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::size_t pool_size = 0;
  std::vector<std::size_t> support;
  SolverOptions options;
};

/// p = Σ λᵢ pᵢ over members with λᵢ > 0 and Σλᵢ = 1.
class EnsembleModel {
 public:
  EnsembleModel() = default;
  explicit EnsembleModel(std::vector<EnsembleMember> members);

  const std::vector<EnsembleMember>& members() const { return members_; }
  /// Sorted union of the members' features.
  const std::vector<std::string>& required_features() const { return required_; }

  PoolConfig pool_config;
  SolverReport solver;
  std::optional<ImputationStats> imputation;
  /// Training-set summaries of the required features (reason-code defaults).
  std::map<std::string, FeatureSummary, std::less<>> feature_summary;

 private:
  std::vector<EnsembleMember> members_;
  std::vector<std::string> required_;
};

/// Keeps the members with weight above `min_weight` and renormalises.
/// Weight j belongs to pool member column_members[j].
EnsembleModel assemble(const ModelPool& pool, std::span<const std::size_t> column_members,
                       const WeightSolution& w, double min_weight = 1e-8);
EnsembleModel assemble(const ModelPool& pool, const PredictionMatrix& pm, const WeightSolution& w,
                       double min_weight = 1e-8);

/// Mean, median and standard deviation of each required feature over `train`.
void attach_feature_summary(EnsembleModel& e, const Dataset& train);

double score(const EnsembleModel& e, const FeatureRow& row);
Eigen::VectorXd score(const EnsembleModel& e, const Dataset& d);
/// Per-member probabilities for each row (rows × members).
Eigen::MatrixXd member_scores(const EnsembleModel& e, const Dataset& d);

/// ∂p/∂xᵢ = Σⱼ λⱼ βⱼᵢ pⱼ(1 − pⱼ); members without the feature contribute 0.
double sensitivity(const EnsembleModel& e, const FeatureRow& row, std::string_view feature);

struct DeltaEstimate {
  double delta_p = 0.0;
  /// score + Δp falls outside [0, 1]; the first-order estimate is unreliable.
  bool out_of_range = false;
};

DeltaEstimate delta_p(const EnsembleModel& e, const FeatureRow& row, std::string_view feature,
                      double delta_x);

struct ReasonCode {
  std::string feature;
  double sensitivity = 0.0;
  double delta_x = 0.0;
  double delta_p = 0.0;
};

/// Top features by |Δp|; ties broken by feature name. Features missing from
/// `deltas` use one training standard deviation.
std::vector<ReasonCode> reason_codes(const EnsembleModel& e, const FeatureRow& row,
                                     const std::map<std::string, double, std::less<>>& deltas,
                                     int top_n);

enum class ReferencePoint { mean, median };
/// Row of training means or medians over the required features.
FeatureRow reference_row(const EnsembleModel& e, ReferencePoint point);

}  // namespace logens
