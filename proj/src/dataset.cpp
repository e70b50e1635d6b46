#include "logens/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "logens/diagnostics.hpp"
#include "logens/errors.hpp"
#include "logens/numeric.hpp"

namespace logens {

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(std::vector<std::string> feature_names, Eigen::MatrixXd values,
                 std::vector<int> labels, std::vector<int> periods,
                 std::vector<std::string> record_ids)
    : feature_names_(std::move(feature_names)),
      values_(std::move(values)),
      labels_(std::move(labels)),
      periods_(std::move(periods)),
      record_ids_(std::move(record_ids)) {
  missing_ = values_.array().isNaN();
  validate();
}

Dataset::Dataset(std::vector<std::string> feature_names, Eigen::MatrixXd values,
                 std::vector<int> labels, std::vector<int> periods,
                 std::vector<std::string> record_ids, MissingMask missing)
    : feature_names_(std::move(feature_names)),
      values_(std::move(values)),
      labels_(std::move(labels)),
      periods_(std::move(periods)),
      record_ids_(std::move(record_ids)),
      missing_(std::move(missing)) {
  validate();
}

void Dataset::validate() const {
  const auto n = labels_.size();
  if (periods_.size() != n || record_ids_.size() != n ||
      static_cast<std::size_t>(values_.rows()) != n)
    throw DataError("dataset: row counts of labels, periods, ids and values differ");
  if (static_cast<std::size_t>(values_.cols()) != feature_names_.size())
    throw DataError("dataset: feature name count does not match value columns");
  if (missing_.rows() != values_.rows() || missing_.cols() != values_.cols())
    throw DataError("dataset: missing mask shape does not match values");
  for (std::size_t i = 0; i < n; ++i)
    if (labels_[i] != 0 && labels_[i] != 1)
      throw DataError("dataset: label of row " + std::to_string(i + 1) + " is not 0 or 1");
  std::unordered_set<std::string_view> seen;
  for (const auto& id : record_ids_)
    if (!seen.insert(id).second) throw DataError("dataset: duplicate record id '" + id + "'");
  std::unordered_set<std::string_view> names;
  for (const auto& f : feature_names_)
    if (!names.insert(f).second) throw DataError("dataset: duplicate feature '" + f + "'");
}

bool Dataset::has_feature(std::string_view name) const {
  return std::find(feature_names_.begin(), feature_names_.end(), name) != feature_names_.end();
}

std::size_t Dataset::feature_index(std::string_view name) const {
  auto it = std::find(feature_names_.begin(), feature_names_.end(), name);
  if (it == feature_names_.end())
    throw ConfigError("unknown feature '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - feature_names_.begin());
}

Eigen::VectorXd Dataset::label_vector() const {
  Eigen::VectorXd y(static_cast<Eigen::Index>(labels_.size()));
  for (std::size_t i = 0; i < labels_.size(); ++i) y(static_cast<Eigen::Index>(i)) = labels_[i];
  return y;
}

std::size_t Dataset::event_count() const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), 1));
}

std::vector<int> Dataset::distinct_periods() const {
  std::set<int> s(periods_.begin(), periods_.end());
  return {s.begin(), s.end()};
}

std::size_t Dataset::missing_count() const { return static_cast<std::size_t>(missing_.count()); }

FeatureRow Dataset::row(std::size_t i) const {
  FeatureRow r;
  for (std::size_t j = 0; j < feature_names_.size(); ++j)
    r.emplace(feature_names_[j], values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  return r;
}

Dataset Dataset::select_rows(std::span<const std::size_t> indices) const {
  const auto m = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd v(m, values_.cols());
  MissingMask mask(m, values_.cols());
  std::vector<int> labels, periods;
  std::vector<std::string> ids;
  labels.reserve(indices.size());
  periods.reserve(indices.size());
  ids.reserve(indices.size());
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto src = indices[static_cast<std::size_t>(r)];
    if (src >= rows()) throw ConfigError("select_rows: row index out of range");
    v.row(r) = values_.row(static_cast<Eigen::Index>(src));
    mask.row(r) = missing_.row(static_cast<Eigen::Index>(src));
    labels.push_back(labels_[src]);
    periods.push_back(periods_[src]);
    ids.push_back(record_ids_[src]);
  }
  return Dataset(feature_names_, std::move(v), std::move(labels), std::move(periods),
                 std::move(ids), std::move(mask));
}

std::vector<std::size_t> Dataset::rows_in_period(int period) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < periods_.size(); ++i)
    if (periods_[i] == period) out.push_back(i);
  return out;
}

Dataset Dataset::period_subset(int period) const {
  const auto idx = rows_in_period(period);
  return select_rows(idx);
}

Dataset Dataset::drop_features(std::span<const std::string> names) const {
  std::vector<std::string> keep_names;
  std::vector<Eigen::Index> keep;
  for (std::size_t j = 0; j < feature_names_.size(); ++j) {
    if (std::find(names.begin(), names.end(), feature_names_[j]) != names.end()) continue;
    keep_names.push_back(feature_names_[j]);
    keep.push_back(static_cast<Eigen::Index>(j));
  }
  for (const auto& n : names) feature_index(n);
  Eigen::MatrixXd v = values_(Eigen::all, keep);
  MissingMask mask = missing_(Eigen::all, keep);
  return Dataset(std::move(keep_names), std::move(v), labels_, periods_, record_ids_,
                 std::move(mask));
}

Eigen::MatrixXd Dataset::design(std::span<const std::string> features) const {
  std::vector<Eigen::Index> cols;
  cols.reserve(features.size());
  for (const auto& f : features) cols.push_back(static_cast<Eigen::Index>(feature_index(f)));
  return values_(Eigen::all, cols);
}

bool operator==(const Dataset& a, const Dataset& b) {
  if (a.feature_names_ != b.feature_names_ || a.labels_ != b.labels_ ||
      a.periods_ != b.periods_ || a.record_ids_ != b.record_ids_)
    return false;
  if (a.values_.rows() != b.values_.rows() || a.values_.cols() != b.values_.cols()) return false;
  if ((a.missing_ != b.missing_).any()) return false;
  for (Eigen::Index i = 0; i < a.values_.rows(); ++i)
    for (Eigen::Index j = 0; j < a.values_.cols(); ++j) {
      if (a.missing_(i, j)) continue;
      if (a.values_(i, j) != b.values_(i, j)) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> split_fields(std::string_view line, char delim) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string row_context(std::size_t data_row) {
  return "row " + std::to_string(data_row) + " (line " + std::to_string(data_row + 1) + ")";
}

}  // namespace

Dataset parse_csv(std::string_view text, const Schema& schema) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      auto line = text.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines.push_back(line);
      start = end + 1;
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  }
  if (lines.empty()) throw DataError("csv: missing header row");

  auto header = split_fields(lines[0], schema.delimiter);
  for (auto& h : header) h = std::string(trim(h));
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);

  auto find_col = [&](std::string_view name) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  auto require_col = [&](std::string_view name) {
    auto c = find_col(name);
    if (!c) throw ConfigError("csv: schema column '" + std::string(name) + "' not found in header");
    return *c;
  };

  std::optional<std::size_t> label_col =
      schema.label_required ? std::optional(require_col(schema.label_column))
                            : find_col(schema.label_column);
  const std::size_t period_col = require_col(schema.period_column);
  std::optional<std::size_t> id_col;
  if (schema.id_column) id_col = require_col(*schema.id_column);

  std::vector<std::string> features;
  std::vector<std::size_t> feature_cols;
  if (schema.feature_columns.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == period_col || (label_col && c == *label_col) || (id_col && c == *id_col)) continue;
      if (!label_col && header[c] == schema.label_column) continue;
      features.push_back(header[c]);
      feature_cols.push_back(c);
    }
  } else {
    for (const auto& f : schema.feature_columns) {
      features.push_back(f);
      feature_cols.push_back(require_col(f));
    }
  }

  const std::size_t n = lines.size() - 1;
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(features.size()));
  Dataset::MissingMask missing =
      Dataset::MissingMask::Constant(values.rows(), values.cols(), false);
  std::vector<int> labels(n, 0), periods(n, 0);
  std::vector<std::string> ids(n);

  auto is_missing_token = [&](std::string_view tok) {
    tok = trim(tok);
    if (tok.empty()) return true;
    return std::find(schema.missing_sentinels.begin(), schema.missing_sentinels.end(), tok) !=
           schema.missing_sentinels.end();
  };

  for (std::size_t r = 0; r < n; ++r) {
    const auto fields = split_fields(lines[r + 1], schema.delimiter);
    if (fields.size() != header.size())
      throw DataError("csv: malformed " + row_context(r + 1) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    if (label_col) {
      auto v = parse_double(fields[*label_col]);
      if (!v || (*v != 0.0 && *v != 1.0))
        throw DataError("csv: non-binary label '" + std::string(trim(fields[*label_col])) +
                        "' at " + row_context(r + 1));
      labels[r] = static_cast<int>(*v);
    }
    {
      auto v = parse_double(fields[period_col]);
      if (!v || *v != std::floor(*v))
        throw DataError("csv: period must be an integer at " + row_context(r + 1));
      periods[r] = static_cast<int>(*v);
    }
    ids[r] = id_col ? std::string(trim(fields[*id_col])) : "row" + std::to_string(r + 1);
    for (std::size_t j = 0; j < features.size(); ++j) {
      const auto& tok = fields[feature_cols[j]];
      const auto ri = static_cast<Eigen::Index>(r);
      const auto cj = static_cast<Eigen::Index>(j);
      if (is_missing_token(tok)) {
        values(ri, cj) = std::numeric_limits<double>::quiet_NaN();
        missing(ri, cj) = true;
        continue;
      }
      auto v = parse_double(tok);
      if (!v)
        throw DataError("csv: non-numeric value '" + std::string(trim(tok)) + "' in column '" +
                        features[j] + "' at " + row_context(r + 1));
      if (!std::isfinite(*v)) {
        values(ri, cj) = std::numeric_limits<double>::quiet_NaN();
        missing(ri, cj) = true;
      } else {
        values(ri, cj) = *v;
      }
    }
  }
  return Dataset(std::move(features), std::move(values), std::move(labels), std::move(periods),
                 std::move(ids), std::move(missing));
}

Dataset load_csv(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("csv: cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), schema);
}

namespace {

std::string quote_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

std::string to_csv(const Dataset& d) {
  std::string out = "record_id,period,label";
  for (const auto& f : d.feature_names()) out += "," + quote_field(f);
  out += '\n';
  for (std::size_t i = 0; i < d.rows(); ++i) {
    out += quote_field(d.record_id(i));
    out += ',' + std::to_string(d.period(i));
    out += ',' + std::to_string(d.label(i));
    for (std::size_t j = 0; j < d.num_features(); ++j) {
      out += ',';
      if (!d.is_missing(i, j)) out += format_double(d.value(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_csv(const Dataset& d, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("csv: cannot write '" + path.string() + "'");
  out << to_csv(d);
}

// ---------------------------------------------------------------------------
// Cleaning / imputation

Dataset clean(const Dataset& d, const CleaningOptions& options) {
  Eigen::MatrixXd v = d.values();
  Dataset::MissingMask mask = d.missing_mask();
  for (const auto& [name, range] : options.bounds) {
    if (range.first > range.second)
      throw ConfigError("clean: empty range for feature '" + name + "'");
    d.feature_index(name);
  }
  for (std::size_t j = 0; j < d.num_features(); ++j) {
    const auto bound = options.bounds.find(d.feature_names()[j]);
    const auto c = static_cast<Eigen::Index>(j);
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      if (mask(i, c)) continue;
      const double x = v(i, c);
      bool bad = !std::isfinite(x);
      if (!bad && bound != options.bounds.end())
        bad = x < bound->second.first || x > bound->second.second;
      if (bad) {
        v(i, c) = std::numeric_limits<double>::quiet_NaN();
        mask(i, c) = true;
      }
    }
  }
  return Dataset(d.feature_names(), std::move(v), {d.labels().begin(), d.labels().end()},
                 {d.periods().begin(), d.periods().end()},
                 {d.record_ids().begin(), d.record_ids().end()}, std::move(mask));
}

double ImputationStats::fill_for(std::string_view feature) const {
  auto it = std::find(features.begin(), features.end(), feature);
  if (it == features.end())
    throw ConfigError("imputation: no statistics for feature '" + std::string(feature) + "'");
  return fill_values[static_cast<std::size_t>(it - features.begin())];
}

bool ImputationStats::covers(std::string_view feature) const {
  return std::find(features.begin(), features.end(), feature) != features.end();
}

Imputed impute_missing(const Dataset& d, const ImputationPolicy& policy) {
  if (d.empty()) throw DataError("impute: dataset has no rows");
  ImputationStats stats;
  stats.policy = policy;
  for (std::size_t j = 0; j < d.num_features(); ++j) {
    std::vector<double> observed;
    observed.reserve(d.rows());
    for (std::size_t i = 0; i < d.rows(); ++i)
      if (!d.is_missing(i, j)) observed.push_back(d.value(i, j));
    if (observed.empty())
      throw DataError("impute: feature '" + d.feature_names()[j] + "' is entirely missing");
    stats.features.push_back(d.feature_names()[j]);
    stats.fill_values.push_back(policy.kind == ImputationPolicy::Kind::median
                                    ? median(observed)
                                    : policy.constant);
  }
  return {apply_imputation(d, stats), std::move(stats)};
}

Dataset apply_imputation(const Dataset& d, const ImputationStats& stats) {
  Eigen::MatrixXd v = d.values();
  for (std::size_t j = 0; j < d.num_features(); ++j) {
    const auto c = static_cast<Eigen::Index>(j);
    if (!d.missing_mask().col(c).any()) continue;
    const double fill = stats.fill_for(d.feature_names()[j]);
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      if (d.missing_mask()(i, c)) v(i, c) = fill;
  }
  return Dataset(d.feature_names(), std::move(v), {d.labels().begin(), d.labels().end()},
                 {d.periods().begin(), d.periods().end()},
                 {d.record_ids().begin(), d.record_ids().end()},
                 Dataset::MissingMask::Constant(d.missing_mask().rows(), d.missing_mask().cols(),
                                                false));
}

FilterResult filter_prior_defaulters(const Dataset& d, std::string_view prior_flag) {
  const auto col = d.feature_index(prior_flag);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    const double f = d.value(i, col);
    if (d.is_missing(i, col) || (f != 0.0 && f != 1.0))
      throw DataError("filter: flag column '" + std::string(prior_flag) +
                      "' is not binary at row " + std::to_string(i + 1));
    if (f == 0.0) keep.push_back(i);
  }
  FilterResult result{d.select_rows(keep), d.rows() - keep.size()};
  if (result.data.empty() && !d.empty())
    warn("filter: every row carries the prior-default flag; result is empty");
  return result;
}

// ---------------------------------------------------------------------------
// Split

Split split(const Dataset& d, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw ConfigError("split: train_fraction must lie strictly between 0 and 1");
  if (d.rows() < 2) throw DataError("split: need at least 2 rows");

  std::mt19937_64 rng(spec.rng_seed);
  std::vector<std::vector<std::size_t>> strata;
  if (spec.stratify_by_label) {
    strata.resize(2);
    for (std::size_t i = 0; i < d.rows(); ++i) strata[static_cast<std::size_t>(d.label(i))].push_back(i);
  } else {
    strata.emplace_back(d.rows());
    std::iota(strata[0].begin(), strata[0].end(), std::size_t{0});
  }

  std::vector<std::size_t> train, validation;
  for (auto& s : strata) {
    std::shuffle(s.begin(), s.end(), rng);
    const auto take = static_cast<std::size_t>(
        std::llround(spec.train_fraction * static_cast<double>(s.size())));
    train.insert(train.end(), s.begin(), s.begin() + static_cast<std::ptrdiff_t>(take));
    validation.insert(validation.end(), s.begin() + static_cast<std::ptrdiff_t>(take), s.end());
  }
  if (train.empty() || validation.empty())
    throw ConfigError("split: train_fraction leaves one side empty");
  std::sort(train.begin(), train.end());
  std::sort(validation.begin(), validation.end());
  return {d.select_rows(train), d.select_rows(validation)};
}

// ---------------------------------------------------------------------------
// Synthetic generator

SyntheticData generate_synthetic(const SynthConfig& cfg) {
  if (cfg.rows < 1 || cfg.features < 1 || cfg.periods < 1)
    throw ConfigError("synth: rows, features and periods must all be at least 1");
  if (!(cfg.base_rate > 0.0 && cfg.base_rate < 1.0))
    throw ConfigError("synth: base_rate must lie strictly between 0 and 1");
  if (!(cfg.correlation >= 0.0 && cfg.correlation < 1.0))
    throw ConfigError("synth: correlation must lie in [0, 1)");
  if (cfg.prior_default_rate < 0.0 || cfg.prior_default_rate >= 1.0 || cfg.missing_rate < 0.0 ||
      cfg.missing_rate >= 1.0)
    throw ConfigError("synth: rates must lie in [0, 1)");

  std::mt19937_64 rng(cfg.rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const std::size_t F = cfg.features;
  const std::size_t nonlinear = std::min(cfg.nonlinear_features, F);

  // Base truth, then per-feature drift directions.
  std::vector<double> linear(F), quadratic(F, 0.0), direction(F);
  for (std::size_t j = 0; j < F; ++j) {
    const double sign = unif(rng) < 0.5 ? -1.0 : 1.0;
    if (j < nonlinear) {
      linear[j] = sign * (0.02 + 0.05 * unif(rng));
      quadratic[j] = 0.35 + 0.2 * unif(rng);
    } else {
      linear[j] = sign * (0.08 + 0.3 * unif(rng));
    }
  }
  for (std::size_t j = 0; j < F; ++j) direction[j] = normal(rng);

  std::vector<PeriodTruth> truth(cfg.periods);
  for (std::size_t q = 0; q < cfg.periods; ++q) {
    auto& t = truth[q];
    t.period = static_cast<int>(q);
    t.linear.resize(F);
    t.quadratic.resize(F);
    const double scale = cfg.drift * static_cast<double>(q);
    for (std::size_t j = 0; j < F; ++j) {
      t.linear[j] = linear[j] * (1.0 + scale * direction[j]);
      t.quadratic[j] = quadratic[j] * (1.0 + scale * direction[j]);
    }
  }

  const std::size_t N = cfg.rows;
  const auto n = static_cast<Eigen::Index>(N);
  const bool with_flag = cfg.prior_default_rate > 0.0;
  const auto width = static_cast<Eigen::Index>(F + (with_flag ? 1 : 0));
  Eigen::MatrixXd x(n, width);
  const double load = std::sqrt(cfg.correlation), own = std::sqrt(1.0 - cfg.correlation);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double shared = normal(rng);
    for (std::size_t j = 0; j < F; ++j)
      x(i, static_cast<Eigen::Index>(j)) = load * shared + own * normal(rng);
  }

  std::vector<int> periods(N);
  for (std::size_t i = 0; i < N; ++i)
    periods[i] = static_cast<int>(i * cfg.periods / N);

  std::vector<double> signal(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const auto& t = truth[static_cast<std::size_t>(periods[i])];
    double s = 0.0;
    for (std::size_t j = 0; j < F; ++j) {
      const double v = x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      s += t.linear[j] * v + t.quadratic[j] * (v * v - 1.0);
    }
    signal[i] = s;
  }

  // Intercept calibrated so the mean true probability equals the base rate.
  auto mean_prob = [&](double b) {
    double acc = 0.0;
    for (double s : signal) acc += sigmoid(b + s);
    return acc / static_cast<double>(N);
  };
  double lo = -30.0, hi = 30.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean_prob(mid) < cfg.base_rate ? lo : hi) = mid;
  }
  const double intercept = 0.5 * (lo + hi);
  for (auto& t : truth) t.intercept = intercept;

  std::vector<int> flags(N, 0);
  if (with_flag)
    for (std::size_t i = 0; i < N; ++i) flags[i] = unif(rng) < cfg.prior_default_rate ? 1 : 0;

  std::vector<int> labels(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double p = flags[i] ? 0.8 : sigmoid(intercept + signal[i]);
    labels[i] = unif(rng) < p ? 1 : 0;
  }

  std::vector<std::string> names;
  const int digits = F >= 100 ? 3 : 2;
  for (std::size_t j = 0; j < F; ++j) {
    std::string idx = std::to_string(j + 1);
    names.push_back("x" + std::string(static_cast<std::size_t>(std::max(0, digits - static_cast<int>(idx.size()))), '0') + idx);
  }
  if (with_flag) {
    names.emplace_back(kPriorDefaultColumn);
    for (Eigen::Index i = 0; i < n; ++i) x(i, width - 1) = flags[static_cast<std::size_t>(i)];
  }

  Dataset::MissingMask missing = Dataset::MissingMask::Constant(n, width, false);
  if (cfg.missing_rate > 0.0)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(F); ++j)
        if (unif(rng) < cfg.missing_rate) {
          missing(i, j) = true;
          x(i, j) = std::numeric_limits<double>::quiet_NaN();
        }

  std::vector<std::string> ids(N);
  const auto id_width = std::to_string(N).size();
  for (std::size_t i = 0; i < N; ++i) {
    auto s = std::to_string(i + 1);
    ids[i] = "r" + std::string(id_width - s.size(), '0') + s;
  }

  return {Dataset(std::move(names), std::move(x), std::move(labels), std::move(periods),
                  std::move(ids), std::move(missing)),
          std::move(truth)};
}

}  // namespace logens
