#include "logens/interpret.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "logens/errors.hpp"
#include "logens/numeric.hpp"

namespace logens {

EnsembleModel::EnsembleModel(std::vector<EnsembleMember> members) : members_(std::move(members)) {
  if (members_.empty()) throw ConfigError("ensemble: no members");
  double total = 0.0;
  std::set<std::string> features;
  for (const auto& m : members_) {
    if (!(m.weight > 0.0) || !std::isfinite(m.weight))
      throw ConfigError("ensemble: member weights must be positive");
    total += m.weight;
    features.insert(m.model.features.begin(), m.model.features.end());
  }
  if (std::fabs(total - 1.0) > 1e-12) throw ConfigError("ensemble: weights do not sum to 1");
  required_.assign(features.begin(), features.end());
}

EnsembleModel assemble(const ModelPool& pool, std::span<const std::size_t> column_members,
                       const WeightSolution& w, double min_weight) {
  if (static_cast<std::size_t>(w.lambda.size()) != column_members.size())
    throw ConfigError("assemble: weight vector length differs from the column map");
  std::vector<EnsembleMember> members;
  double total = 0.0;
  for (std::size_t j = 0; j < column_members.size(); ++j) {
    const double lambda = w.lambda(static_cast<Eigen::Index>(j));
    if (!(lambda > min_weight)) continue;
    const auto idx = column_members[j];
    if (idx >= pool.members.size() || !pool.members[idx].usable())
      throw ConfigError("assemble: weight refers to an unusable pool member");
    members.push_back({lambda, idx, *pool.members[idx].model});
    total += lambda;
  }
  if (members.empty()) throw ConfigError("assemble: solution has empty support");
  for (auto& m : members) m.weight /= total;
  double sum = 0.0;
  for (const auto& m : members) sum += m.weight;
  auto largest = std::max_element(members.begin(), members.end(),
                                  [](const auto& a, const auto& b) { return a.weight < b.weight; });
  largest->weight += 1.0 - sum;

  EnsembleModel e(std::move(members));
  e.pool_config = pool.config;
  e.solver.objective = w.objective;
  e.solver.kkt_residual = w.kkt_residual;
  e.solver.iterations = w.iterations;
  e.solver.converged = w.converged;
  e.solver.pool_size = pool.members.size();
  for (auto s : w.support) e.solver.support.push_back(column_members[s]);
  return e;
}

EnsembleModel assemble(const ModelPool& pool, const PredictionMatrix& pm, const WeightSolution& w,
                       double min_weight) {
  return assemble(pool, pm.member_index, w, min_weight);
}

void attach_feature_summary(EnsembleModel& e, const Dataset& train) {
  e.feature_summary.clear();
  for (const auto& f : e.required_features()) {
    const auto col = train.column(train.feature_index(f));
    std::vector<double> v(col.data(), col.data() + col.size());
    if (v.empty()) throw DataError("feature summary: no rows");
    FeatureSummary s;
    s.mean = col.mean();
    s.median = median(v);
    const double ss = (col.array() - s.mean).square().sum();
    s.stddev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    e.feature_summary.emplace(f, s);
  }
}

double score(const EnsembleModel& e, const FeatureRow& row) {
  double p = 0.0, lo = 1.0, hi = 0.0;
  for (const auto& m : e.members()) {
    const double pm = predict_proba(m.model, row);
    p += m.weight * pm;
    lo = std::min(lo, pm);
    hi = std::max(hi, pm);
  }
  return std::clamp(p, lo, hi);
}

Eigen::MatrixXd member_scores(const EnsembleModel& e, const Dataset& d) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(d.rows()), static_cast<Eigen::Index>(e.members().size()));
  for (std::size_t j = 0; j < e.members().size(); ++j)
    out.col(static_cast<Eigen::Index>(j)) = predict_proba(e.members()[j].model, d);
  return out;
}

Eigen::VectorXd score(const EnsembleModel& e, const Dataset& d) {
  const Eigen::MatrixXd ps = member_scores(e, d);
  Eigen::VectorXd w(static_cast<Eigen::Index>(e.members().size()));
  for (std::size_t j = 0; j < e.members().size(); ++j) w(static_cast<Eigen::Index>(j)) = e.members()[j].weight;
  Eigen::VectorXd p = ps * w;
  // Convex combination; clamp away rounding beyond the member range.
  for (Eigen::Index i = 0; i < p.size(); ++i)
    p(i) = std::clamp(p(i), ps.row(i).minCoeff(), ps.row(i).maxCoeff());
  return p;
}

double sensitivity(const EnsembleModel& e, const FeatureRow& row, std::string_view feature) {
  double total = 0.0;
  for (const auto& m : e.members()) {
    const double beta = m.model.coefficient_or_zero(feature);
    if (beta == 0.0) {
      // Still validate the row for the member's features.
      m.model.linear_predictor(row);
      continue;
    }
    const double p = predict_proba(m.model, row);
    total += m.weight * beta * p * (1.0 - p);
  }
  return total;
}

DeltaEstimate delta_p(const EnsembleModel& e, const FeatureRow& row, std::string_view feature,
                      double delta_x) {
  DeltaEstimate out;
  out.delta_p = sensitivity(e, row, feature) * delta_x;
  const double moved = score(e, row) + out.delta_p;
  out.out_of_range = moved < 0.0 || moved > 1.0;
  return out;
}

std::vector<ReasonCode> reason_codes(const EnsembleModel& e, const FeatureRow& row,
                                     const std::map<std::string, double, std::less<>>& deltas,
                                     int top_n) {
  if (top_n < 1) throw ConfigError("reason codes: top_n must be at least 1");
  std::vector<ReasonCode> codes;
  for (const auto& f : e.required_features()) {
    ReasonCode code;
    code.feature = f;
    if (auto it = deltas.find(f); it != deltas.end()) {
      code.delta_x = it->second;
    } else if (auto s = e.feature_summary.find(f); s != e.feature_summary.end()) {
      code.delta_x = s->second.stddev;
    } else {
      throw ConfigError("reason codes: no delta for feature '" + f + "' and no training summary");
    }
    code.sensitivity = sensitivity(e, row, f);
    code.delta_p = code.sensitivity * code.delta_x;
    codes.push_back(std::move(code));
  }
  std::sort(codes.begin(), codes.end(), [](const ReasonCode& a, const ReasonCode& b) {
    const double ma = std::fabs(a.delta_p), mb = std::fabs(b.delta_p);
    if (ma != mb) return ma > mb;
    return a.feature < b.feature;
  });
  if (codes.size() > static_cast<std::size_t>(top_n)) codes.resize(static_cast<std::size_t>(top_n));
  return codes;
}

FeatureRow reference_row(const EnsembleModel& e, ReferencePoint point) {
  FeatureRow row;
  for (const auto& f : e.required_features()) {
    auto it = e.feature_summary.find(f);
    if (it == e.feature_summary.end())
      throw ConfigError("reference row: no training summary for feature '" + f + "'");
    row.emplace(f, point == ReferencePoint::mean ? it->second.mean : it->second.median);
  }
  return row;
}

}  // namespace logens
