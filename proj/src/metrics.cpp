#include "logens/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "logens/diagnostics.hpp"
#include "logens/errors.hpp"

namespace logens {
namespace {

void check_inputs(std::span<const double> scores, std::span<const int> labels, const char* what) {
  if (scores.size() != labels.size())
    throw ConfigError(std::string(what) + ": scores and labels differ in length");
  std::size_t events = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw DataError(std::string(what) + ": labels must be 0 or 1");
    events += static_cast<std::size_t>(y);
  }
  if (events == 0 || events == labels.size())
    throw DataError(std::string(what) + ": both label classes are required");
}

std::vector<std::size_t> order_descending(std::span<const double> scores) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return idx;
}

}  // namespace

double ks_statistic(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels, "ks");
  const auto idx = order_descending(scores);
  double n_events = 0.0;
  for (int y : labels) n_events += y;
  const double n_non = static_cast<double>(labels.size()) - n_events;

  double ce = 0.0, cn = 0.0, best = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    (labels[idx[i]] ? ce : cn) += 1.0;
    const bool boundary = i + 1 == idx.size() || scores[idx[i + 1]] != scores[idx[i]];
    if (boundary) best = std::max(best, std::fabs(ce / n_events - cn / n_non));
  }
  return best;
}

double Concordance::concordant_pct() const { return 100.0 * static_cast<double>(concordant) / static_cast<double>(pairs()); }
double Concordance::discordant_pct() const { return 100.0 * static_cast<double>(discordant) / static_cast<double>(pairs()); }
double Concordance::tied_pct() const { return 100.0 * static_cast<double>(tied) / static_cast<double>(pairs()); }

Concordance concordance(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels, "concordance");
  std::vector<double> non_events;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (!labels[i]) non_events.push_back(scores[i]);
  std::sort(non_events.begin(), non_events.end());

  Concordance c;
  const auto n_non = static_cast<std::uint64_t>(non_events.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    const auto [lo, hi] = std::equal_range(non_events.begin(), non_events.end(), scores[i]);
    const auto below = static_cast<std::uint64_t>(lo - non_events.begin());
    const auto equal = static_cast<std::uint64_t>(hi - lo);
    c.concordant += below;
    c.tied += equal;
    c.discordant += n_non - below - equal;
  }
  return c;
}

std::vector<DecileRow> decile_table(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw ConfigError("deciles: scores and labels differ in length");
  if (scores.size() < 10) throw DataError("deciles: need at least 10 rows");
  const auto idx = order_descending(scores);
  const std::size_t n = scores.size();
  std::size_t total_events = 0;
  for (int y : labels) total_events += static_cast<std::size_t>(y);
  const std::size_t total_non = n - total_events;

  std::vector<DecileRow> table;
  std::size_t pos = 0, cum_e = 0, cum_n = 0;
  for (int d = 0; d < 10; ++d) {
    DecileRow row;
    row.decile = d + 1;
    row.n = n / 10 + (static_cast<std::size_t>(d) < n % 10 ? 1 : 0);
    for (std::size_t k = 0; k < row.n; ++k, ++pos) row.events += static_cast<std::size_t>(labels[idx[pos]]);
    cum_e += row.events;
    cum_n += row.n - row.events;
    row.event_rate = static_cast<double>(row.events) / static_cast<double>(row.n);
    row.cum_event_share = total_events ? static_cast<double>(cum_e) / static_cast<double>(total_events) : 0.0;
    row.cum_nonevent_share = total_non ? static_cast<double>(cum_n) / static_cast<double>(total_non) : 0.0;
    table.push_back(row);
  }
  return table;
}

double decile_ks(const std::vector<DecileRow>& table) {
  double best = 0.0;
  for (const auto& r : table) best = std::max(best, std::fabs(r.cum_event_share - r.cum_nonevent_share));
  return best;
}

EvaluationReport evaluate(std::span<const double> scores, std::span<const int> labels) {
  EvaluationReport r;
  r.ks = ks_statistic(scores, labels);
  const auto c = concordance(scores, labels);
  r.concordant_pct = c.concordant_pct();
  r.discordant_pct = c.discordant_pct();
  r.tied_pct = c.tied_pct();
  r.n_rows = scores.size();
  for (int y : labels) r.n_events += static_cast<std::size_t>(y);
  if (scores.size() >= 10) {
    r.deciles = decile_table(scores, labels);
    r.ks_decile = decile_ks(r.deciles);
  }
  return r;
}

std::vector<PeriodKs> evaluate_over_time(const Scorer& scorer, const Dataset& data,
                                         std::optional<std::vector<int>> periods) {
  const auto wanted = periods ? *periods : data.distinct_periods();
  std::vector<PeriodKs> series;
  for (int period : wanted) {
    const Dataset slice = data.period_subset(period);
    if (slice.empty()) {
      warn("period " + std::to_string(period) + " has no rows; skipped");
      continue;
    }
    const auto events = slice.event_count();
    if (events == 0 || events == slice.rows()) {
      warn("period " + std::to_string(period) + " has a single label class; skipped");
      continue;
    }
    const Eigen::VectorXd s = scorer(slice);
    PeriodKs point;
    point.period = period;
    point.ks = ks_statistic({s.data(), static_cast<std::size_t>(s.size())}, slice.labels());
    point.n = slice.rows();
    point.events = events;
    series.push_back(point);
  }
  return series;
}

}  // namespace logens
