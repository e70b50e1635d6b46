#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace logens {

/// Feature name → value, used for single-record scoring.
using FeatureRow = std::map<std::string, double, std::less<>>;

/// Immutable table of numeric features with a binary label, an ordinal
/// period tag and a unique record id per row. Missing cells hold NaN and are
/// flagged in the missing mask.
class Dataset {
 public:
  using MissingMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

  Dataset() = default;
  Dataset(std::vector<std::string> feature_names, Eigen::MatrixXd values,
          std::vector<int> labels, std::vector<int> periods,
          std::vector<std::string> record_ids);
  Dataset(std::vector<std::string> feature_names, Eigen::MatrixXd values,
          std::vector<int> labels, std::vector<int> periods,
          std::vector<std::string> record_ids, MissingMask missing);

  std::size_t rows() const { return labels_.size(); }
  std::size_t num_features() const { return feature_names_.size(); }
  bool empty() const { return labels_.empty(); }

  const std::vector<std::string>& feature_names() const { return feature_names_; }
  bool has_feature(std::string_view name) const;
  /// Column index of `name`; throws ConfigError when unknown.
  std::size_t feature_index(std::string_view name) const;

  const Eigen::MatrixXd& values() const { return values_; }
  double value(std::size_t row, std::size_t col) const { return values_(row, col); }
  auto column(std::size_t col) const { return values_.col(static_cast<Eigen::Index>(col)); }

  std::span<const int> labels() const { return labels_; }
  int label(std::size_t row) const { return labels_[row]; }
  Eigen::VectorXd label_vector() const;
  std::size_t event_count() const;

  std::span<const int> periods() const { return periods_; }
  int period(std::size_t row) const { return periods_[row]; }
  /// Distinct period tags in ascending order.
  std::vector<int> distinct_periods() const;

  std::span<const std::string> record_ids() const { return record_ids_; }
  const std::string& record_id(std::size_t row) const { return record_ids_[row]; }

  const MissingMask& missing_mask() const { return missing_; }
  bool is_missing(std::size_t row, std::size_t col) const { return missing_(row, col); }
  std::size_t missing_count() const;

  FeatureRow row(std::size_t i) const;

  Dataset select_rows(std::span<const std::size_t> indices) const;
  std::vector<std::size_t> rows_in_period(int period) const;
  Dataset period_subset(int period) const;
  Dataset drop_features(std::span<const std::string> names) const;
  /// Design matrix (no intercept column) for the named features, in order.
  Eigen::MatrixXd design(std::span<const std::string> features) const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  void validate() const;

  std::vector<std::string> feature_names_;
  Eigen::MatrixXd values_;
  std::vector<int> labels_;
  std::vector<int> periods_;
  std::vector<std::string> record_ids_;
  MissingMask missing_;
};

// ---------------------------------------------------------------------------
// CSV ingestion

struct Schema {
  std::string label_column = "label";
  std::string period_column = "period";
  std::optional<std::string> id_column = "record_id";
  /// Explicit feature list; empty means every remaining column.
  std::vector<std::string> feature_columns;
  char delimiter = ',';
  /// Field values treated as missing in addition to the empty field.
  std::vector<std::string> missing_sentinels = {"NA", "NaN", "nan", "null"};
  /// When false a missing label column yields all-zero labels (scoring input).
  bool label_required = true;
};

Dataset load_csv(const std::filesystem::path& path, const Schema& schema);
Dataset parse_csv(std::string_view text, const Schema& schema);
/// Writes record_id, period, label, then features. Missing cells are empty.
void write_csv(const Dataset& d, const std::filesystem::path& path);
std::string to_csv(const Dataset& d);

// ---------------------------------------------------------------------------
// Cleaning and imputation

/// Marks non-finite cells and cells outside configured [lo, hi] bounds as
/// missing so that imputation can fill them.
struct CleaningOptions {
  std::map<std::string, std::pair<double, double>, std::less<>> bounds;
};
Dataset clean(const Dataset& d, const CleaningOptions& options = {});

struct ImputationPolicy {
  enum class Kind { median, constant };
  Kind kind = Kind::median;
  double constant = 0.0;
};

/// Per-feature fill values, frozen at training time and reapplied at scoring.
struct ImputationStats {
  ImputationPolicy policy;
  std::vector<std::string> features;
  std::vector<double> fill_values;

  double fill_for(std::string_view feature) const;
  bool covers(std::string_view feature) const;
};

struct Imputed {
  Dataset data;
  ImputationStats stats;
};

Imputed impute_missing(const Dataset& d, const ImputationPolicy& policy = {});
/// Fills missing cells with previously frozen statistics.
Dataset apply_imputation(const Dataset& d, const ImputationStats& stats);

struct FilterResult {
  Dataset data;
  std::size_t removed = 0;
};

/// Drops every row whose `prior_flag` column equals 1.
FilterResult filter_prior_defaulters(const Dataset& d, std::string_view prior_flag);

// ---------------------------------------------------------------------------
// Splitting

struct SplitSpec {
  double train_fraction = 0.7;
  std::uint64_t rng_seed = 42;
  bool stratify_by_label = true;
};

struct Split {
  Dataset train;
  Dataset validation;
};

Split split(const Dataset& d, const SplitSpec& spec);

// ---------------------------------------------------------------------------
// Synthetic data

struct SynthConfig {
  std::size_t rows = 20000;
  std::size_t features = 40;
  std::size_t periods = 4;
  std::uint64_t rng_seed = 7;
  /// Per-period relative change applied to the true coefficients.
  double drift = 0.05;
  double base_rate = 0.10;
  /// Loading on a shared latent factor, in [0, 1).
  double correlation = 0.3;
  /// Number of leading features that enter the truth through a squared term.
  std::size_t nonlinear_features = 4;
  /// Probability of a row carrying a prior-default flag; 0 omits the column.
  double prior_default_rate = 0.0;
  /// Probability of any feature cell being blanked.
  double missing_rate = 0.0;
};

/// Logistic ground truth for one period:
/// logit = intercept + Σ linear_j x_j + Σ quadratic_j (x_j² − 1).
struct PeriodTruth {
  int period = 0;
  double intercept = 0.0;
  std::vector<double> linear;
  std::vector<double> quadratic;
};

struct SyntheticData {
  Dataset data;
  std::vector<PeriodTruth> truth;
};

SyntheticData generate_synthetic(const SynthConfig& config);

/// Column name used for the prior-default flag in synthetic data.
inline constexpr std::string_view kPriorDefaultColumn = "prior_default";

}  // namespace logens
