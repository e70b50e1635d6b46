#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "logens/dataset.hpp"

namespace logens {

/// Two-sample KS distance between event and non-event score distributions,
/// on the 0–1 scale. Thresholds fall only between distinct scores.
double ks_statistic(std::span<const double> scores, std::span<const int> labels);

struct Concordance {
  std::uint64_t concordant = 0;
  std::uint64_t discordant = 0;
  std::uint64_t tied = 0;

  std::uint64_t pairs() const { return concordant + discordant + tied; }
  double concordant_pct() const;
  double discordant_pct() const;
  double tied_pct() const;
};

/// Event/non-event pair counts by sorting, O(n log n).
Concordance concordance(std::span<const double> scores, std::span<const int> labels);

struct DecileRow {
  int decile = 0;
  std::size_t n = 0;
  std::size_t events = 0;
  double event_rate = 0.0;
  double cum_event_share = 0.0;
  double cum_nonevent_share = 0.0;
};

/// Rows sorted by descending score and cut into 10 count-based groups, the
/// first n mod 10 groups one row larger. Tied scores may straddle groups.
std::vector<DecileRow> decile_table(std::span<const double> scores, std::span<const int> labels);
/// max |cum_event_share − cum_nonevent_share| over the decile rows.
double decile_ks(const std::vector<DecileRow>& table);

struct EvaluationReport {
  double ks = 0.0;          // score grain, 0–1
  double ks_decile = 0.0;   // decile grain, 0–1
  double concordant_pct = 0.0;
  double discordant_pct = 0.0;
  double tied_pct = 0.0;
  std::vector<DecileRow> deciles;
  std::size_t n_rows = 0;
  std::size_t n_events = 0;
};

EvaluationReport evaluate(std::span<const double> scores, std::span<const int> labels);

struct PeriodKs {
  int period = 0;
  double ks = 0.0;
  std::size_t n = 0;
  std::size_t events = 0;
};

using Scorer = std::function<Eigen::VectorXd(const Dataset&)>;

/// KS of a frozen scorer on each period of `data`, ascending by period.
/// When `periods` is given only those are evaluated, in that order; empty or
/// single-class periods are skipped with a warning.
std::vector<PeriodKs> evaluate_over_time(const Scorer& scorer, const Dataset& data,
                                         std::optional<std::vector<int>> periods = std::nullopt);

}  // namespace logens
