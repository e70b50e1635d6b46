#pragma once

#include <optional>
#include <string>
#include <vector>

#include "logens/dataset.hpp"
#include "logens/logit.hpp"

namespace logens {

enum class BinMethod { equal_frequency, explicit_cutpoints };

/// Bin i covers (edges[i-1], edges[i]]; the first bin is open to −∞ and the
/// last to +∞, so every real value lands in exactly one bin.
struct BinningSpec {
  std::string feature;
  BinMethod method = BinMethod::equal_frequency;
  int requested_bins = 0;
  std::vector<double> edges;

  std::size_t bin_count() const { return edges.size() + 1; }
  std::size_t bin_of(double x) const;
};

BinningSpec bin_equal_frequency(const Dataset& d, std::string_view feature, int k);
BinningSpec bin_explicit(std::string_view feature, std::vector<double> cutpoints);

struct BinStats {
  double events = 0.0;
  double nonevents = 0.0;
  double odds = 1.0;
  double log_odds = 0.0;
};

struct BinEncoding {
  BinningSpec spec;
  std::vector<BinStats> bins;
  double smoothing = 0.5;

  double log_odds_of(double x) const { return bins[spec.bin_of(x)].log_odds; }
  double odds_of(double x) const { return bins[spec.bin_of(x)].odds; }
};

/// Recomputes odds = (events + s) / (nonevents + s) and its logarithm.
void refresh_odds(BinEncoding& enc);

BinEncoding encode_log_odds(const Dataset& d, const BinningSpec& spec, double smoothing = 0.5);

/// Two-sided p-value of the pooled two-proportion z-test.
double two_proportion_p_value(double events1, double n1, double events2, double n2);

/// Merges the least distinguishable adjacent pair while its p-value exceeds alpha.
BinEncoding collapse_adjacent_bins(const BinEncoding& enc, double alpha = 0.05);

struct BinnedFeature {
  std::string feature;
  /// Equal-frequency bin count; BaselineConfig::default_bins when unset.
  std::optional<int> bins;
  /// Explicit cut points; takes precedence over `bins` when non-empty.
  std::vector<double> cutpoints;
};

struct BaselineConfig {
  std::vector<BinnedFeature> binned;
  std::vector<std::string> passthrough;
  int default_bins = 10;
  bool collapse = true;
  double collapse_alpha = 0.05;
  double smoothing = 0.5;
  /// Also offer the odds encoding to elimination (log-odds only by default).
  bool include_odds = false;
  EliminationOptions elimination;
};

/// Frozen per-feature transform applied identically at scoring time.
struct FeatureTransform {
  BinEncoding encoding;
  std::string log_odds_name;
  std::optional<std::string> odds_name;
};

struct BaseModel {
  std::vector<FeatureTransform> transforms;
  std::vector<std::string> passthrough;
  LogitModel model;
  std::optional<ImputationStats> imputation;

  /// Raw features the model reads.
  std::vector<std::string> required_features() const;
  /// Raw record → model design row.
  FeatureRow transform(const FeatureRow& raw) const;
  double predict(const FeatureRow& raw) const;
  Eigen::VectorXd score(const Dataset& d) const;
};

BaseModel train_base_model(const Dataset& train, const BaselineConfig& config);

}  // namespace logens
