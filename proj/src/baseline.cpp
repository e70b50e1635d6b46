#include "logens/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "logens/diagnostics.hpp"
#include "logens/errors.hpp"
#include "logens/numeric.hpp"

namespace logens {

std::size_t BinningSpec::bin_of(double x) const {
  return static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), x) - edges.begin());
}

namespace {

std::vector<double> observed_values(const Dataset& d, std::string_view feature) {
  const auto col = d.feature_index(feature);
  std::vector<double> v;
  v.reserve(d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) {
    if (d.is_missing(i, col))
      throw DataError("binning: feature '" + std::string(feature) + "' has missing values");
    v.push_back(d.value(i, col));
  }
  return v;
}

}  // namespace

BinningSpec bin_equal_frequency(const Dataset& d, std::string_view feature, int k) {
  if (k < 2) throw ConfigError("binning: need at least 2 bins");
  auto v = observed_values(d, feature);
  if (v.empty()) throw DataError("binning: dataset has no rows");
  std::sort(v.begin(), v.end());
  int distinct = 1;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] != v[i - 1]) ++distinct;
  BinningSpec spec;
  spec.feature = std::string(feature);
  spec.method = BinMethod::equal_frequency;
  spec.requested_bins = k;
  int bins = k;
  if (distinct < k) {
    warn("binning: feature '" + spec.feature + "' has " + std::to_string(distinct) +
         " distinct values; using " + std::to_string(distinct) + " bins instead of " + std::to_string(k));
    bins = distinct;
  }
  const auto n = v.size();
  for (int i = 1; i < bins; ++i) {
    const auto rank = (static_cast<std::size_t>(i) * n + static_cast<std::size_t>(bins) - 1) / static_cast<std::size_t>(bins);
    const double edge = v[rank - 1];
    if (edge >= v.back()) continue;
    if (spec.edges.empty() || edge > spec.edges.back()) spec.edges.push_back(edge);
  }
  return spec;
}

BinningSpec bin_explicit(std::string_view feature, std::vector<double> cutpoints) {
  if (cutpoints.empty()) throw ConfigError("binning: explicit cut points are empty");
  for (std::size_t i = 0; i < cutpoints.size(); ++i) {
    if (!std::isfinite(cutpoints[i])) throw ConfigError("binning: cut points must be finite");
    if (i > 0 && !(cutpoints[i] > cutpoints[i - 1]))
      throw ConfigError("binning: cut points must be strictly ascending");
  }
  BinningSpec spec;
  spec.feature = std::string(feature);
  spec.method = BinMethod::explicit_cutpoints;
  spec.requested_bins = static_cast<int>(cutpoints.size() + 1);
  spec.edges = std::move(cutpoints);
  return spec;
}

void refresh_odds(BinEncoding& enc) {
  for (auto& b : enc.bins) {
    b.odds = (b.events + enc.smoothing) / (b.nonevents + enc.smoothing);
    b.log_odds = std::log(b.odds);
  }
}

BinEncoding encode_log_odds(const Dataset& d, const BinningSpec& spec, double smoothing) {
  if (smoothing < 0.0) throw ConfigError("encoding: smoothing must be non-negative");
  const auto v = observed_values(d, spec.feature);
  BinEncoding enc;
  enc.spec = spec;
  enc.smoothing = smoothing;
  enc.bins.assign(spec.bin_count(), BinStats{});
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto& b = enc.bins[spec.bin_of(v[i])];
    (d.label(i) ? b.events : b.nonevents) += 1.0;
  }
  for (std::size_t b = 0; b < enc.bins.size(); ++b) {
    const auto& s = enc.bins[b];
    if (s.events + s.nonevents <= 0.0)
      throw DataError("encoding: bin " + std::to_string(b) + " of feature '" + spec.feature + "' is empty");
    if (smoothing == 0.0 && (s.events == 0.0 || s.nonevents == 0.0))
      throw DataError("encoding: bin " + std::to_string(b) + " of feature '" + spec.feature +
                      "' has a zero count and no smoothing");
  }
  refresh_odds(enc);
  return enc;
}

double two_proportion_p_value(double events1, double n1, double events2, double n2) {
  if (n1 <= 0.0 || n2 <= 0.0) throw ConfigError("z-test: group sizes must be positive");
  const double pooled = (events1 + events2) / (n1 + n2);
  if (pooled <= 0.0 || pooled >= 1.0) return 1.0;
  const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2));
  return two_sided_p((events1 / n1 - events2 / n2) / se);
}

BinEncoding collapse_adjacent_bins(const BinEncoding& enc, double alpha) {
  BinEncoding out = enc;
  while (out.bins.size() >= 2) {
    std::size_t best = 0;
    double best_p = -1.0;
    for (std::size_t i = 0; i + 1 < out.bins.size(); ++i) {
      const auto& a = out.bins[i];
      const auto& b = out.bins[i + 1];
      const double p = two_proportion_p_value(a.events, a.events + a.nonevents, b.events,
                                              b.events + b.nonevents);
      if (p > best_p) {
        best_p = p;
        best = i;
      }
    }
    if (!(best_p > alpha)) break;
    out.bins[best].events += out.bins[best + 1].events;
    out.bins[best].nonevents += out.bins[best + 1].nonevents;
    out.bins.erase(out.bins.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    out.spec.edges.erase(out.spec.edges.begin() + static_cast<std::ptrdiff_t>(best));
    refresh_odds(out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Base model

std::vector<std::string> BaseModel::required_features() const {
  std::set<std::string> out(passthrough.begin(), passthrough.end());
  for (const auto& t : transforms) out.insert(t.encoding.spec.feature);
  return {out.begin(), out.end()};
}

FeatureRow BaseModel::transform(const FeatureRow& raw) const {
  FeatureRow row;
  for (const auto& t : transforms) {
    auto it = raw.find(t.encoding.spec.feature);
    if (it == raw.end())
      throw DataError("row is missing feature '" + t.encoding.spec.feature + "'");
    row[t.log_odds_name] = t.encoding.log_odds_of(it->second);
    if (t.odds_name) row[*t.odds_name] = t.encoding.odds_of(it->second);
  }
  for (const auto& f : passthrough) {
    auto it = raw.find(f);
    if (it == raw.end()) throw DataError("row is missing feature '" + f + "'");
    row[f] = it->second;
  }
  return row;
}

double BaseModel::predict(const FeatureRow& raw) const { return predict_proba(model, transform(raw)); }

Eigen::VectorXd BaseModel::score(const Dataset& d) const {
  Eigen::VectorXd z = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d.rows()), model.intercept);
  auto column_of = [&](std::string_view f) {
    if (!d.has_feature(f)) throw DataError("data is missing feature '" + std::string(f) + "'");
    const auto c = d.feature_index(f);
    if (d.missing_mask().col(static_cast<Eigen::Index>(c)).any())
      throw DataError("feature '" + std::string(f) + "' has missing values");
    return d.column(c);
  };
  for (std::size_t j = 0; j < model.features.size(); ++j) {
    const auto& name = model.features[j];
    const double beta = model.coefficients[j];
    const FeatureTransform* source = nullptr;
    bool odds = false;
    for (const auto& t : transforms) {
      if (t.log_odds_name == name) source = &t;
      if (t.odds_name && *t.odds_name == name) {
        source = &t;
        odds = true;
      }
    }
    if (source) {
      const auto col = column_of(source->encoding.spec.feature);
      for (Eigen::Index i = 0; i < col.size(); ++i)
        z(i) += beta * (odds ? source->encoding.odds_of(col(i)) : source->encoding.log_odds_of(col(i)));
    } else {
      z += beta * column_of(name);
    }
  }
  return z.unaryExpr([](double v) { return sigmoid(v); });
}

BaseModel train_base_model(const Dataset& train, const BaselineConfig& config) {
  if (train.empty()) throw DataError("base model: dataset has no rows");
  std::vector<FeatureTransform> transforms;
  std::vector<std::string> names;
  std::vector<Eigen::VectorXd> columns;

  for (const auto& bf : config.binned) {
    BinningSpec spec = bf.cutpoints.empty()
                           ? bin_equal_frequency(train, bf.feature, bf.bins.value_or(config.default_bins))
                           : bin_explicit(bf.feature, bf.cutpoints);
    BinEncoding enc = encode_log_odds(train, spec, config.smoothing);
    if (config.collapse) enc = collapse_adjacent_bins(enc, config.collapse_alpha);
    FeatureTransform t{std::move(enc), bf.feature + "_lo", std::nullopt};
    if (config.include_odds) t.odds_name = bf.feature + "_odds";

    const auto col = train.column(train.feature_index(bf.feature));
    Eigen::VectorXd lo(col.size()), od(col.size());
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      lo(i) = t.encoding.log_odds_of(col(i));
      od(i) = t.encoding.odds_of(col(i));
    }
    names.push_back(t.log_odds_name);
    columns.push_back(std::move(lo));
    if (t.odds_name) {
      names.push_back(*t.odds_name);
      columns.push_back(std::move(od));
    }
    transforms.push_back(std::move(t));
  }
  for (const auto& f : config.passthrough) {
    const auto c = train.feature_index(f);
    if (train.missing_mask().col(static_cast<Eigen::Index>(c)).any())
      throw DataError("base model: feature '" + f + "' has missing values");
    names.push_back(f);
    columns.emplace_back(train.column(c));
  }

  Eigen::MatrixXd x(static_cast<Eigen::Index>(train.rows()), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) x.col(static_cast<Eigen::Index>(j)) = columns[j];

  BaseModel base;
  base.model = backward_eliminate_design(x, train.label_vector(), names, config.elimination);
  const auto& kept = base.model.features;
  auto used = [&](const std::string& n) { return std::find(kept.begin(), kept.end(), n) != kept.end(); };
  for (auto& t : transforms) {
    const bool lo_used = used(t.log_odds_name);
    const bool odds_used = t.odds_name && used(*t.odds_name);
    if (!odds_used) t.odds_name.reset();
    if (lo_used || odds_used) base.transforms.push_back(std::move(t));
  }
  // Transforms that only survive through their odds column still emit log-odds
  // in transform(); the model ignores it.
  for (const auto& f : config.passthrough)
    if (used(f)) base.passthrough.push_back(f);
  return base;
}

}  // namespace logens
