#include "logens/pipeline.hpp"

#include <algorithm>

#include "logens/errors.hpp"

namespace logens {

Prepared prepare(const Dataset& raw, const PrepOptions& options) {
  Dataset d = clean(raw, options.cleaning);
  if (options.periods) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < d.rows(); ++i)
      if (std::find(options.periods->begin(), options.periods->end(), d.period(i)) != options.periods->end())
        keep.push_back(i);
    if (keep.empty()) throw DataError("prep: no rows in the requested periods");
    d = d.select_rows(keep);
  }

  Prepared out;
  if (options.drop_prior_defaulters && d.has_feature(options.prior_flag)) {
    auto filtered = filter_prior_defaulters(d, options.prior_flag);
    out.prior_removed = filtered.removed;
    const std::string flag[] = {options.prior_flag};
    d = filtered.data.drop_features(flag);
  }

  auto parts = split(d, options.split);
  auto imputed = impute_missing(parts.train, options.imputation);
  out.train = std::move(imputed.data);
  out.holdout = apply_imputation(parts.validation, imputed.stats);
  out.imputation = std::move(imputed.stats);
  return out;
}

EnsembleRun train_ensemble(const Dataset& train, const PoolConfig& pool, const TrainPoolOptions& training,
                           const SolverOptions& solver) {
  EnsembleRun run;
  const auto periods = train.distinct_periods();
  const auto draws = sample_feature_subsets(train.feature_names(), pool, periods);
  run.pool = train_pool(train, draws, pool, training);
  run.matrix = build_prediction_matrix(run.pool, train);
  run.gram = build_gram(run.matrix);
  run.solution = solve_simplex_qp(run.gram, solver);
  run.model = assemble(run.pool, run.matrix, run.solution);
  run.model.solver.options = solver;
  attach_feature_summary(run.model, train);
  return run;
}

BaselineConfig default_baseline_config(const Dataset& train, std::vector<std::string> passthrough, int bins) {
  BaselineConfig config;
  config.default_bins = bins;
  for (const auto& f : passthrough)
    if (!train.has_feature(f)) throw ConfigError("baseline: unknown passthrough feature '" + f + "'");
  for (const auto& f : train.feature_names())
    if (std::find(passthrough.begin(), passthrough.end(), f) == passthrough.end())
      config.binned.push_back({f, std::nullopt, {}});
  config.passthrough = std::move(passthrough);
  return config;
}

}  // namespace logens
