#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"

#include "logens/baseline.hpp"
#include "logens/diagnostics.hpp"
#include "logens/errors.hpp"
#include "logens/metrics.hpp"
#include "logens/pipeline.hpp"

using namespace logens;

namespace {

Dataset one_feature(const std::vector<double>& v, std::vector<int> y = {}) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) x(static_cast<Eigen::Index>(i), 0) = v[i];
  if (y.empty()) {
    y.assign(v.size(), 0);
    y[0] = 1;
  }
  return fixture::dataset(x, std::move(y), {}, {"v"});
}

BinEncoding two_bins(double e1, double n1, double e2, double n2) {
  BinEncoding enc;
  enc.spec = bin_explicit("v", {0.0});
  enc.bins = {{e1, n1 - e1}, {e2, n2 - e2}};
  refresh_odds(enc);
  return enc;
}

// Pooled two-proportion z-test written out directly.
double z_test(double e1, double n1, double e2, double n2) {
  const double p = (e1 + e2) / (n1 + n2);
  const double z = (e1 / n1 - e2 / n2) / std::sqrt(p * (1 - p) * (1 / n1 + 1 / n2));
  return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

}  // namespace

TEST_CASE("equal-frequency binning: exact quantiles") {
  const auto spec = bin_equal_frequency(one_feature({3, 1, 2, 4, 5, 6, 7, 8, 9, 10}), "v", 5);
  CHECK(spec.edges == std::vector<double>{2, 4, 6, 8});
  std::vector<int> counts(spec.bin_count(), 0);
  for (int v = 1; v <= 10; ++v) ++counts[spec.bin_of(v)];
  CHECK(counts == std::vector<int>{2, 2, 2, 2, 2});
}

TEST_CASE("equal-frequency binning: degenerate and tied inputs") {
  {
    WarningCapture warnings;
    const auto spec = bin_equal_frequency(one_feature(std::vector<double>(8, 4.0)), "v", 5);
    CHECK(spec.bin_count() == 1);
    CHECK(warnings.messages().size() == 1);
  }
  std::vector<double> v(50, 0.0);
  for (int i = 1; i <= 50; ++i) v.push_back(i);
  const auto spec = bin_equal_frequency(one_feature(v), "v", 4);
  // Every tied zero lands in the same bin.
  std::set<std::size_t> zero_bins;
  for (std::size_t i = 0; i < 50; ++i) zero_bins.insert(spec.bin_of(v[i]));
  CHECK(zero_bins.size() == 1);
  CHECK_THROWS_AS(bin_equal_frequency(one_feature(v), "v", 1), ConfigError);
}

TEST_CASE("bins partition the real line") {
  const auto spec = bin_explicit("v", {-1.0, 0.5, 3.0});
  CHECK(spec.bin_of(-1e300) == 0);
  CHECK(spec.bin_of(-1.0) == 0);
  CHECK(spec.bin_of(-0.999) == 1);
  CHECK(spec.bin_of(3.0) == 2);
  CHECK(spec.bin_of(1e300) == 3);
  CHECK(spec.bin_of(std::numeric_limits<double>::infinity()) == 3);
  CHECK_THROWS_AS(bin_explicit("v", {1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(bin_explicit("v", {}), ConfigError);
}

TEST_CASE("monotone transforms keep equal-frequency memberships") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  std::vector<double> v, t;
  for (int i = 0; i < 500; ++i) {
    v.push_back(n(rng));
    t.push_back(std::exp(2.0 * v.back()) + 1.0);
  }
  const auto a = bin_equal_frequency(one_feature(v), "v", 10);
  const auto b = bin_equal_frequency(one_feature(t), "v", 10);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(a.bin_of(v[i]) == b.bin_of(t[i]));
}

TEST_CASE("log-odds encoding examples") {
  // Bin 0: 3 events and 1 non-event. Bin 1: 2 and 2. Bin 2: 4 events only.
  const auto d = one_feature({0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2}, {1, 1, 1, 0, 1, 1, 0, 0, 1, 1, 1, 1});
  const auto spec = bin_explicit("v", {0.5, 1.5});
  CHECK_THROWS_AS(encode_log_odds(d, spec, 0.0), DataError);
  const auto smoothed = encode_log_odds(d, spec, 0.5);
  CHECK(std::fabs(smoothed.bins[1].log_odds) < 1e-15);
  CHECK(std::fabs(smoothed.bins[2].log_odds - std::log(9.0)) < 1e-15);

  const auto two = one_feature({0, 0, 0, 0, 1, 1, 1, 1}, {1, 1, 1, 0, 1, 1, 0, 0});
  const auto exact = encode_log_odds(two, bin_explicit("v", {0.5}), 0.0);
  CHECK(std::fabs(exact.bins[0].log_odds - std::log(3.0)) < 1e-15);
  CHECK(exact.bins[1].log_odds == 0.0);
  for (const auto& b : smoothed.bins) CHECK(b.log_odds == std::log(b.odds));

  CHECK_THROWS_AS(encode_log_odds(two, bin_explicit("v", {0.5, 0.7}), 0.5), DataError);
}

TEST_CASE("collapse adjacent bins") {
  CHECK(std::fabs(two_proportion_p_value(15, 50, 15.5, 50) - z_test(15, 50, 15.5, 50)) < 1e-15);
  CHECK(z_test(15, 50, 15.5, 50) > 0.05);
  const auto merged = collapse_adjacent_bins(two_bins(15, 50, 15.5, 50));
  CHECK(merged.bins.size() == 1);
  CHECK(merged.spec.edges.empty());
  CHECK(merged.bins[0].events == 30.5);
  CHECK(merged.bins[0].log_odds == std::log((30.5 + 0.5) / (69.5 + 0.5)));

  CHECK(z_test(10, 200, 120, 200) < 1e-6);
  CHECK(collapse_adjacent_bins(two_bins(10, 200, 120, 200)).bins.size() == 2);

  BinEncoding single;
  single.spec.feature = "v";
  single.bins = {{3, 4}};
  refresh_odds(single);
  CHECK(collapse_adjacent_bins(single).bins.size() == 1);
  CHECK(two_proportion_p_value(0, 10, 0, 10) == 1.0);
}

TEST_CASE("collapse never adds bins and re-derives odds from merged counts") {
  const auto s = generate_synthetic({.rows = 3000, .features = 6, .periods = 1});
  for (const auto& f : s.data.feature_names()) {
    const auto enc = encode_log_odds(s.data, bin_equal_frequency(s.data, f, 10));
    const auto c = collapse_adjacent_bins(enc);
    CHECK(c.bins.size() <= enc.bins.size());
    CHECK(c.spec.edges.size() + 1 == c.bins.size());
    double events = 0;
    for (const auto& b : c.bins) {
      events += b.events;
      CHECK(b.log_odds == std::log((b.events + 0.5) / (b.nonevents + 0.5)));
    }
    CHECK(events == static_cast<double>(s.data.event_count()));
  }
}

TEST_CASE("base model beats a plain linear logit on nonlinear data") {
  const auto s = generate_synthetic({.rows = 20000, .features = 40, .periods = 4, .rng_seed = 7});
  const auto prep = prepare(s.data, PrepOptions{});
  const auto base = train_base_model(prep.train, default_baseline_config(prep.train));
  const auto linear = backward_eliminate(prep.train, prep.train.feature_names());
  const auto& h = prep.holdout;
  const auto bs = base.score(h);
  const auto ls = predict_proba(linear, h);
  const double ks_base = ks_statistic({bs.data(), h.rows()}, h.labels());
  const double ks_linear = ks_statistic({ls.data(), h.rows()}, h.labels());
  CHECK(ks_base > ks_linear);
}

TEST_CASE("base model without binned features reduces to elimination") {
  const auto s = generate_synthetic({.rows = 3000, .features = 8, .periods = 1});
  BaselineConfig cfg;
  cfg.passthrough = s.data.feature_names();
  const auto base = train_base_model(s.data, cfg);
  const auto direct = backward_eliminate(s.data, s.data.feature_names());
  CHECK(base.transforms.empty());
  CHECK(base.model.features == direct.features);
  CHECK(base.model.coefficients == direct.coefficients);
  CHECK(base.model.intercept == direct.intercept);
}

TEST_CASE("base model scoring uses frozen training edges") {
  const auto s = generate_synthetic({.rows = 4000, .features = 6, .periods = 1});
  auto cfg = default_baseline_config(s.data);
  cfg.elimination.alpha = 0.5;
  const auto base = train_base_model(s.data, cfg);
  REQUIRE_FALSE(base.transforms.empty());
  const auto& t = base.transforms[0];
  const auto& f = t.encoding.spec.feature;

  Eigen::MatrixXd shifted = s.data.values();
  shifted.col(static_cast<Eigen::Index>(s.data.feature_index(f))).array() += 100.0;
  const Dataset moved(s.data.feature_names(), shifted, {s.data.labels().begin(), s.data.labels().end()},
                      {s.data.periods().begin(), s.data.periods().end()},
                      {s.data.record_ids().begin(), s.data.record_ids().end()});
  // Every shifted value falls in the top training bin.
  for (std::size_t i = 0; i < 20; ++i) {
    const auto row = base.transform(moved.row(i));
    CHECK(row.at(t.log_odds_name) == t.encoding.bins.back().log_odds);
  }
  const auto batch = base.score(moved);
  for (std::size_t i = 0; i < 20; ++i) CHECK(std::fabs(batch(static_cast<Eigen::Index>(i)) - base.predict(moved.row(i))) < 1e-15);
  CHECK_THROWS_AS(base.predict(FeatureRow{}), DataError);
}
