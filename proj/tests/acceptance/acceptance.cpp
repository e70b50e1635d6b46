// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include "logens/diagnostics.hpp"
#include "logens/metrics.hpp"
#include "logens/pipeline.hpp"
#include "logens/serialize.hpp"

using namespace logens;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// Every weight solution produced anywhere in the suite is certified here.
struct KktLedger {
  int checked = 0;
  int failed = 0;
  double worst = 0.0;

  void record(const GramSystem& gs, const WeightSolution& w) {
    const auto v = check_kkt(gs, w, 1e-8);
    ++checked;
    if (!v.pass) ++failed;
    worst = std::max(worst, v.residual);
  }
};

KktLedger kkt_ledger;

struct QpInstance {
  Eigen::MatrixXd p;
  Eigen::VectorXd y;
};

QpInstance random_qp(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  QpInstance in{Eigen::MatrixXd(n, k), Eigen::VectorXd(n)};
  std::vector<double> noise(static_cast<std::size_t>(k));
  for (auto& s : noise) s = 0.05 + 0.4 * unif(rng);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double truth = unif(rng);
    in.y(i) = unif(rng) < truth ? 1.0 : 0.0;
    for (Eigen::Index j = 0; j < k; ++j)
      in.p(i, j) = std::clamp(truth + noise[static_cast<std::size_t>(j)] * (2.0 * unif(rng) - 1.0), 0.001, 0.999);
  }
  return in;
}

std::vector<std::vector<double>> columns(const Eigen::MatrixXd& p) {
  std::vector<std::vector<double>> out;
  for (Eigen::Index j = 0; j < p.cols(); ++j) out.emplace_back(p.col(j).data(), p.col(j).data() + p.rows());
  return out;
}

double ks_points(const Eigen::VectorXd& s, const Dataset& d) {
  return 100.0 * ks_statistic({s.data(), static_cast<std::size_t>(s.size())}, d.labels());
}

// Desk-scale experiment shared by several criteria.
struct Desk {
  Prepared prep;
  EnsembleRun run;
  double seconds = 0.0;
};

const Desk& desk() {
  static const Desk d = [] {
    const auto t0 = std::chrono::steady_clock::now();
    Desk out;
    SynthConfig sc;
    sc.rng_seed = 7;
    sc.rows = 20000;
    sc.features = 40;
    sc.periods = 4;
    const auto syn = generate_synthetic(sc);
    out.prep = prepare(syn.data, PrepOptions{});
    PoolConfig pc;
    pc.samples_per_period = 5;
    pc.feature_fraction = 0.25;
    pc.rng_seed = 7;
    out.run = train_ensemble(out.prep.train, pc);
    kkt_ledger.record(out.run.gram, out.run.solution);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }();
  return d;
}

// ---------------------------------------------------------------------------

Outcome interpolating_predictor() {
  double worst_gap = -std::numeric_limits<double>::infinity();
  int violations = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Eigen::Index k = 2 + static_cast<Eigen::Index>(seed % 9);
    const auto in = random_qp(200, k, 1000 + seed);
    const auto gs = build_gram(in.p, in.y);
    const auto w = solve_simplex_qp(gs);
    kkt_ledger.record(gs, w);
    const double sse = (in.y - in.p * w.lambda).squaredNorm();
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < k; ++j) best = std::min(best, (in.y - in.p.col(j)).squaredNorm());
    worst_gap = std::max(worst_gap, sse - best);
    if (sse > best + 1e-9) ++violations;
  }
  return {violations == 0, "50 instances, max(SSE - best single) = " + sci(worst_gap)};
}

Outcome qp_oracle() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::Index k = 1 + static_cast<Eigen::Index>(seed % 3);
    auto in = random_qp(30, k, 2000 + seed);
    if (seed == 2) in.p.col(2) = in.p.col(0);
    const auto gs = build_gram(in.p, in.y);
    const auto w = solve_simplex_qp(gs);
    kkt_ledger.record(gs, w);
    const auto grid = oracle::simplex_grid_search(columns(in.p), {in.y.data(), in.y.data() + in.y.size()}, 1e-3);
    worst = std::max(worst, std::fabs(w.objective - grid.objective));
  }
  return {worst <= 1e-5, "20 instances (one with a duplicated column), max |solver - grid| = " + sci(worst)};
}

Outcome kkt_certificates() {
  return {kkt_ledger.checked > 0 && kkt_ledger.failed == 0,
          std::to_string(kkt_ledger.checked) + " solutions, worst residual " + sci(kkt_ledger.worst)};
}

Outcome gradient_check() {
  const auto& e = desk().run.model;
  const auto& h = desk().prep.holdout;
  const auto& features = e.required_features();
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> pick_row(0, h.rows() - 1), pick_f(0, features.size() - 1);
  double worst = 0.0;
  int bad = 0;
  for (int t = 0; t < 100; ++t) {
    auto row = h.row(pick_row(rng));
    const auto& f = features[pick_f(rng)];
    const double analytic = sensitivity(e, row, f);
    const double x = row.at(f), step = 1e-5;
    row[f] = x + step;
    const double up = score(e, row);
    row[f] = x - step;
    const double down = score(e, row);
    const double numeric = (up - down) / (2.0 * step);
    const double err = std::fabs(analytic - numeric);
    const double allowed = std::max(1e-9, 1e-6 * std::fabs(numeric));
    worst = std::max(worst, err / allowed);
    if (err > allowed) ++bad;
  }
  return {bad == 0, "100 pairs, worst error / tolerance = " + fixed(worst, 4)};
}

Outcome logit_mle() {
  Eigen::MatrixXd x(8, 1);
  x << 1, 1, 1, 1, 0, 0, 0, 0;
  const auto sat = fit(fixture::dataset(x, {1, 1, 1, 0, 1, 0, 0, 0}, {}, {"x"}), std::vector<std::string>{"x"});
  const double e_int = std::fabs(sat.intercept - std::log(1.0 / 3.0));
  const double e_slope = std::fabs(sat.coefficients[0] - std::log(9.0));

  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = fixture::logistic_sample(50, {0.9, -0.6}, 0.2, 3000 + seed);
    const auto m = fit_design(s.x, fixture::to_vector(s.y), {"a", "b"});
    std::vector<std::vector<double>> rows;
    for (Eigen::Index i = 0; i < s.x.rows(); ++i) rows.push_back({s.x(i, 0), s.x(i, 1)});
    worst = std::max(worst, std::fabs(m.info.log_likelihood - oracle::loglik_grid_search(rows, s.y).loglik));
  }
  return {e_int <= 1e-6 && e_slope <= 1e-6 && worst <= 1e-6,
          "saturated errors " + sci(e_int) + ", " + sci(e_slope) + "; max |LL - grid| = " + sci(worst)};
}

Outcome metric_oracles() {
  std::mt19937_64 rng(6);
  int mismatches = 0;
  double worst_invariance = 0.0;
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 20 + static_cast<std::size_t>(t) * 12;
    const int levels = t % 2 ? 5 : 1000;
    std::uniform_int_distribution<int> lvl(1, levels - 1);
    std::bernoulli_distribution coin(0.35);
    std::vector<double> s;
    std::vector<int> y;
    for (std::size_t i = 0; i < n; ++i) {
      s.push_back(static_cast<double>(lvl(rng)) / levels);
      y.push_back(coin(rng) ? 1 : 0);
    }
    y[0] = 1;
    y[1] = 0;
    const auto fast = concordance(s, y);
    const auto slow = oracle::concordance_pairs(s, y);
    if (fast.concordant != slow.concordant || fast.discordant != slow.discordant || fast.tied != slow.tied)
      ++mismatches;
    const double ks = ks_statistic(s, y);
    for (auto f : {+[](double v) { return v * v * v; }, +[](double v) { return std::log(v / (1.0 - v)); }}) {
      std::vector<double> ts;
      for (double v : s) ts.push_back(f(v));
      worst_invariance = std::max(worst_invariance, std::fabs(ks_statistic(ts, y) - ks));
      worst_invariance =
          std::max(worst_invariance, std::fabs(concordance(ts, y).concordant_pct() - fast.concordant_pct()));
    }
  }
  const double hand = ks_statistic(std::vector<double>{0.9, 0.7, 0.4, 0.2}, std::vector<int>{1, 0, 1, 0});
  return {mismatches == 0 && worst_invariance <= 1e-12 && std::fabs(hand - 0.5) < 1e-15,
          "concordance mismatches " + std::to_string(mismatches) + ", invariance error " + sci(worst_invariance) +
              ", hand KS " + fixed(hand, 3)};
}

Outcome desk_experiment() {
  const auto& d = desk();
  const auto t0 = std::chrono::steady_clock::now();
  const auto& h = d.prep.holdout;
  const double ens = ks_points(score(d.run.model, h), h);
  const auto pm = build_prediction_matrix(d.run.pool, h);
  double best = 0.0, mean = 0.0;
  for (Eigen::Index j = 0; j < pm.columns.cols(); ++j) {
    const double k = ks_points(pm.columns.col(j), h);
    best = std::max(best, k);
    mean += k;
  }
  mean /= static_cast<double>(pm.columns.cols());
  const double seconds = d.seconds + std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = ens >= best - 1.0 && ens >= mean + 2.0 && seconds < 60.0;
  return {pass, "ensemble KS " + fixed(ens) + ", best member " + fixed(best) + ", member mean " + fixed(mean) +
                    ", support " + std::to_string(d.run.model.members().size()) + "/" +
                    std::to_string(pm.columns.cols()) + ", " + fixed(seconds, 1) + " s"};
}

Outcome over_time_stability() {
  SynthConfig sc;
  sc.rng_seed = 7;
  sc.rows = 40000;
  sc.periods = 8;
  const auto syn = generate_synthetic(sc);
  PrepOptions po;
  po.periods = std::vector<int>{0, 1, 2, 3};
  const auto prep = prepare(syn.data, po);
  PoolConfig pc;
  pc.samples_per_period = 5;
  const auto run = train_ensemble(prep.train, pc);
  kkt_ledger.record(run.gram, run.solution);
  const std::string frozen = dump(ensemble_to_json(run.model));

  const double reference = ks_points(score(run.model, prep.holdout), prep.holdout);
  Scorer scorer = [&](const Dataset& d) { return score(run.model, d); };
  const auto later = evaluate_over_time(scorer, syn.data, std::vector<int>{4, 5, 6, 7});
  double worst = 0.0;
  std::string series;
  for (const auto& p : later) {
    worst = std::max(worst, std::fabs(100.0 * p.ks - reference));
    series += (series.empty() ? "" : " ") + fixed(100.0 * p.ks, 1);
  }
  const bool untouched = dump(ensemble_to_json(run.model)) == frozen;
  return {later.size() == 4 && worst <= 10.0 && untouched,
          "training KS " + fixed(reference, 1) + ", periods 4-7: " + series + ", max drift " + fixed(worst, 1)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "logens_acceptance_determinism";
  fs::remove_all(root);
  std::ostringstream sink;
  auto* old = std::cout.rdbuf(sink.rdbuf());
  const auto data = (root / "d.csv").string();
  bool ok = run_cli({"synth", "--out", data, "--n", "8000", "--features", "20", "--periods", "4"}) == 0;
  const char* runs[][2] = {{"w1", "1"}, {"w4", "4"}, {"w1b", "1"}};
  for (auto& r : runs)
    ok = ok && run_cli({"train-ensemble", "--data", data, "--out", (root / r[0]).string(), "--samples", "5",
                        "--workers", r[1]}) == 0;
  std::cout.rdbuf(old);

  int compared = 0, differing = 0;
  if (ok) {
    for (const auto& entry : fs::recursive_directory_iterator(root / "w1")) {
      if (!entry.is_regular_file()) continue;
      const auto rel = fs::relative(entry.path(), root / "w1");
      if (rel.string().find("timings") != std::string::npos) continue;
      for (const char* other : {"w4", "w1b"}) {
        ++compared;
        if (slurp(entry.path()) != slurp(root / other / rel)) ++differing;
      }
    }
  }
  fs::remove_all(root);
  return {ok && compared > 0 && differing == 0,
          std::to_string(compared) + " artifact comparisons across --workers 1/4 and a rerun, " +
              std::to_string(differing) + " differ"};
}

Outcome convexity_bound() {
  const auto& e = desk().run.model;
  SynthConfig sc;
  sc.rng_seed = 1234;
  sc.rows = 10000;
  const auto rows = generate_synthetic(sc).data;
  // Stretch half the rows far outside the training range.
  Eigen::MatrixXd v = rows.values();
  v.bottomRows(5000) *= 25.0;
  const Dataset wide(rows.feature_names(), v, {rows.labels().begin(), rows.labels().end()},
                     {rows.periods().begin(), rows.periods().end()},
                     {rows.record_ids().begin(), rows.record_ids().end()});
  const auto s = score(e, wide);
  const auto m = member_scores(e, wide);
  int bad = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double lo = m.row(i).minCoeff(), hi = m.row(i).maxCoeff();
    if (!(s(i) >= lo && s(i) <= hi && s(i) > 0.0 && s(i) < 1.0)) ++bad;
  }
  return {bad == 0, std::to_string(s.size()) + " rows, " + std::to_string(bad) + " outside [min p, max p] or (0,1)"};
}

}  // namespace

int main() {
  WarningCapture quiet;
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
    double budget_seconds;
  };
  const Criterion criteria[] = {
      {1, "interpolating predictor", interpolating_predictor, 5.0},
      {2, "QP grid-oracle equivalence", qp_oracle, 10.0},
      {5, "logit MLE correctness", logit_mle, 0.0},
      {6, "metric oracles", metric_oracles, 0.0},
      {7, "desk-scale experiment", desk_experiment, 0.0},
      {4, "sensitivity gradient check", gradient_check, 5.0},
      {8, "over-time stability", over_time_stability, 0.0},
      {9, "determinism across workers", determinism, 0.0},
      {10, "convexity bound", convexity_bound, 0.0},
      {3, "KKT certificate", kkt_certificates, 0.0},
  };

  std::map<int, std::string> lines;
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0.0 && secs >= c.budget_seconds) {
      o.pass = false;
      o.detail += " (over the " + fixed(c.budget_seconds, 0) + " s budget)";
    }
    if (!o.pass) ++failures;
    lines[c.id] = std::string(o.pass ? "PASS" : "FAIL") + "  criterion " + std::to_string(c.id) + ": " + c.name +
                  " - " + o.detail + " [" + fixed(secs, 2) + " s]";
  }
  for (const auto& [id, line] : lines) std::cout << line << "\n";
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
