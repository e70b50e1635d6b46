#pragma once

#include <optional>
#include <string>
#include <vector>

#include "logens/baseline.hpp"
#include "logens/dataset.hpp"
#include "logens/ensemble.hpp"
#include "logens/interpret.hpp"
#include "logens/simplex_qp.hpp"

namespace logens {

struct PrepOptions {
  CleaningOptions cleaning;
  /// Rows flagged in this column are removed and the column dropped, when present.
  std::string prior_flag = std::string(kPriorDefaultColumn);
  bool drop_prior_defaulters = true;
  /// Keep only these periods before splitting; all periods when unset.
  std::optional<std::vector<int>> periods;
  SplitSpec split;
  ImputationPolicy imputation;
};

struct Prepared {
  Dataset train;
  Dataset holdout;
  /// Fitted on the training side only and applied to both.
  ImputationStats imputation;
  std::size_t prior_removed = 0;
};

Prepared prepare(const Dataset& raw, const PrepOptions& options);

struct EnsembleRun {
  ModelPool pool;
  PredictionMatrix matrix;
  GramSystem gram;
  WeightSolution solution;
  EnsembleModel model;
};

/// Subset sampling, per-period pool training, weight fitting on the pooled
/// training rows, and assembly.
EnsembleRun train_ensemble(const Dataset& train, const PoolConfig& pool,
                           const TrainPoolOptions& training = {}, const SolverOptions& solver = {});

/// Bins every feature not listed as passthrough.
BaselineConfig default_baseline_config(const Dataset& train, std::vector<std::string> passthrough = {},
                                       int bins = 10);

}  // namespace logens
