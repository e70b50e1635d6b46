#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "logens/dataset.hpp"
#include "logens/logit.hpp"

namespace logens {

struct PoolConfig {
  int samples_per_period = 40;
  double feature_fraction = 0.25;
  double alpha = 0.05;
  std::uint64_t rng_seed = 7;
};

/// One random feature sample for one period.
struct SubsetDraw {
  int period = 0;
  int sample_index = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> features;
};

/// Number of features drawn per sample: round(fraction · available), at least 1.
std::size_t subset_size(std::size_t available, double feature_fraction);

/// Seed of the stream used for (period, sample index); independent of
/// the order in which samples are drawn or trained.
std::uint64_t derive_seed(std::uint64_t base, int period, int sample_index);

/// samples_per_period uniform draws without replacement for every period,
/// ordered by (period, sample index). Each subset keeps the input order.
std::vector<SubsetDraw> sample_feature_subsets(std::span<const std::string> features,
                                               const PoolConfig& config,
                                               std::span<const int> periods);

enum class MemberStatus { ok, failed };

struct PoolMember {
  SubsetDraw draw;
  MemberStatus status = MemberStatus::failed;
  std::string failure;
  std::optional<LogitModel> model;

  bool usable() const { return status == MemberStatus::ok && model.has_value(); }
};

struct ModelPool {
  PoolConfig config;
  std::vector<PoolMember> members;

  std::size_t usable_count() const;
};

struct TrainPoolOptions {
  /// Fit settings and optional effect floor; the significance level comes from PoolConfig.
  EliminationOptions elimination;
  /// Upper bound on concurrent fits; results never depend on it.
  unsigned workers = 1;
};

/// Trains every draw on its own period's rows by backward elimination.
/// Failed or non-converged members are recorded and kept out of scoring.
ModelPool train_pool(const Dataset& d, std::span<const SubsetDraw> draws, const PoolConfig& config,
                     const TrainPoolOptions& options = {});

/// Column j holds usable member member_index[j]'s probabilities over all rows.
struct PredictionMatrix {
  Eigen::MatrixXd columns;
  Eigen::VectorXd target;
  std::vector<std::size_t> member_index;
};

PredictionMatrix build_prediction_matrix(const ModelPool& pool, const Dataset& rows);

}  // namespace logens
