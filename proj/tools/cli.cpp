#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "logens/baseline.hpp"
#include "logens/dataset.hpp"
#include "logens/errors.hpp"
#include "logens/interpret.hpp"
#include "logens/metrics.hpp"
#include "logens/pipeline.hpp"
#include "logens/serialize.hpp"

namespace fs = std::filesystem;

namespace logens {
namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

// Re-raises a library error with the pipeline stage prefixed, keeping its type
// so the exit code is preserved.
template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(name) + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(std::string(name) + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(name) + ": " + e.what());
  }
}

class Timer {
 public:
  template <class F>
  auto run(const char* name, F&& f) {
    const auto t0 = Clock::now();
    if constexpr (std::is_void_v<decltype(stage(name, f))>) {
      stage(name, f);
      record(name, t0);
    } else {
      auto out = stage(name, f);
      record(name, t0);
      return out;
    }
  }

  json sidecar(const std::string& command, unsigned workers) const {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    json stages = json::array();
    double total = 0.0;
    for (const auto& [name, secs] : stages_) {
      stages.push_back({{"stage", name}, {"seconds", secs}});
      total += secs;
    }
    return json{{"command", command},
                {"finished_at", ts.str()},
                {"workers", workers},
                {"hardware_threads", std::thread::hardware_concurrency()},
                {"total_seconds", total},
                {"stages", stages}};
  }

 private:
  void record(const char* name, Clock::time_point t0) {
    stages_.emplace_back(name, std::chrono::duration<double>(Clock::now() - t0).count());
  }
  std::vector<std::pair<std::string, double>> stages_;
};

// ---------------------------------------------------------------------------
// Shared option groups

struct SchemaArgs {
  std::string label = "label";
  std::string period = "period";
  std::string id = "record_id";

  void add(CLI::App* app) {
    app->add_option("--label-col", label, "Label column name")->capture_default_str();
    app->add_option("--period-col", period, "Period column name")->capture_default_str();
    app->add_option("--id-col", id, "Record id column name")->capture_default_str();
  }

  Schema schema(bool label_required) const {
    Schema s;
    s.label_column = label;
    s.period_column = period;
    s.id_column = id;
    s.label_required = label_required;
    return s;
  }
};

struct PrepArgs {
  double train_fraction = 0.7;
  std::uint64_t split_seed = 42;
  bool no_stratify = false;
  bool keep_prior = false;
  std::string prior_flag = std::string(kPriorDefaultColumn);
  std::string impute = "median";
  double impute_constant = 0.0;
  std::vector<int> periods;
  std::vector<std::string> bounds;

  void add(CLI::App* app) {
    app->add_option("--train-fraction", train_fraction, "Share of rows used for training")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app->add_option("--split-seed", split_seed, "Seed of the train/holdout split")->capture_default_str();
    app->add_flag("--no-stratify", no_stratify, "Split without stratifying by label");
    app->add_flag("--keep-prior-defaulters", keep_prior, "Do not remove rows flagged as prior defaulters");
    app->add_option("--prior-flag", prior_flag, "Prior-default flag column")->capture_default_str();
    app->add_option("--impute", impute, "Imputation policy")
        ->check(CLI::IsMember({"median", "constant"}))
        ->capture_default_str();
    app->add_option("--impute-constant", impute_constant, "Fill value for --impute constant");
    app->add_option("--periods", periods, "Restrict to these periods (comma separated)")->delimiter(',');
    app->add_option("--bound", bounds, "Valid range FEATURE=LO:HI; values outside become missing");
  }

  PrepOptions options() const {
    PrepOptions o;
    o.split.train_fraction = train_fraction;
    o.split.rng_seed = split_seed;
    o.split.stratify_by_label = !no_stratify;
    o.drop_prior_defaulters = !keep_prior;
    o.prior_flag = prior_flag;
    o.imputation.kind = impute == "median" ? ImputationPolicy::Kind::median : ImputationPolicy::Kind::constant;
    o.imputation.constant = impute_constant;
    if (!periods.empty()) o.periods = periods;
    for (const auto& b : bounds) {
      const auto eq = b.find('=');
      const auto colon = b.find(':', eq == std::string::npos ? 0 : eq);
      if (eq == std::string::npos || colon == std::string::npos)
        throw ConfigError("--bound expects FEATURE=LO:HI, got '" + b + "'");
      try {
        o.cleaning.bounds[b.substr(0, eq)] = {std::stod(b.substr(eq + 1, colon - eq - 1)),
                                              std::stod(b.substr(colon + 1))};
      } catch (const std::logic_error&) {
        throw ConfigError("--bound has a non-numeric range in '" + b + "'");
      }
    }
    return o;
  }
};

json prep_summary(const Prepared& p, const PrepOptions& o) {
  return json{{"split", o.split},
              {"imputation", p.imputation},
              {"prior_defaulters_removed", p.prior_removed},
              {"train_rows", p.train.rows()},
              {"train_events", p.train.event_count()},
              {"holdout_rows", p.holdout.rows()},
              {"holdout_events", p.holdout.event_count()}};
}

// ---------------------------------------------------------------------------
// Loaded models

struct LoadedModel {
  std::optional<BaseModel> base;
  std::optional<EnsembleModel> ensemble;

  std::vector<std::string> required_features() const {
    return base ? base->required_features() : ensemble->required_features();
  }
  const std::optional<ImputationStats>& imputation() const {
    return base ? base->imputation : ensemble->imputation;
  }
  Eigen::VectorXd score(const Dataset& d) const { return base ? base->score(d) : logens::score(*ensemble, d); }
};

LoadedModel load_model(const fs::path& path) {
  const json j = load_json(path);
  LoadedModel m;
  if (model_kind(j) == ModelKind::baseline)
    m.base = base_model_from_json(j);
  else
    m.ensemble = ensemble_from_json(j);
  return m;
}

struct ScoringInput {
  Dataset data;
  std::vector<std::size_t> source_rows;
  std::vector<std::string> errors;
};

// Restricts to the model's features, applies the frozen imputation unless
// strict, and separates rows that still lack a value.
ScoringInput scoring_input(const Dataset& raw, const LoadedModel& model, bool strict) {
  const auto required = model.required_features();
  std::vector<std::string> absent;
  for (const auto& f : required)
    if (!raw.has_feature(f)) absent.push_back(f);
  if (!absent.empty()) {
    std::string list;
    for (const auto& f : absent) list += (list.empty() ? "" : ", ") + f;
    throw DataError("data is missing required feature column(s): " + list);
  }
  std::vector<std::string> extra;
  for (const auto& f : raw.feature_names())
    if (std::find(required.begin(), required.end(), f) == required.end()) extra.push_back(f);
  Dataset d = raw.drop_features(extra);
  if (!strict && model.imputation()) d = apply_imputation(d, *model.imputation());

  ScoringInput in;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    std::string missing;
    for (std::size_t j = 0; j < d.num_features(); ++j)
      if (d.is_missing(i, j)) missing += (missing.empty() ? "" : ", ") + d.feature_names()[j];
    if (missing.empty())
      in.source_rows.push_back(i);
    else
      in.errors.push_back("row " + std::to_string(i + 1) + " (" + d.record_id(i) + "): missing value for " +
                          missing);
  }
  in.data = d.select_rows(in.source_rows);
  return in;
}

void report_row_errors(const std::vector<std::string>& errors) {
  constexpr std::size_t kShown = 20;
  for (std::size_t i = 0; i < errors.size() && i < kShown; ++i) std::cerr << "error: " << errors[i] << "\n";
  if (errors.size() > kShown) std::cerr << "error: ... " << errors.size() - kShown << " more rows\n";
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
}

// ---------------------------------------------------------------------------
// Subcommands

struct SynthArgs {
  fs::path out;
  SynthConfig config;
};

int cmd_synth(const SynthArgs& a) {
  const auto syn = generate_synthetic(a.config);
  write_csv(syn.data, a.out);
  json truth{{"schema_version", kSchemaVersion},
             {"kind", "synthetic_truth"},
             {"config",
              {{"rows", a.config.rows},
               {"features", a.config.features},
               {"periods", a.config.periods},
               {"seed", a.config.rng_seed},
               {"drift", a.config.drift},
               {"base_rate", a.config.base_rate},
               {"correlation", a.config.correlation},
               {"nonlinear_features", a.config.nonlinear_features},
               {"prior_default_rate", a.config.prior_default_rate},
               {"missing_rate", a.config.missing_rate}}},
             {"features", syn.data.feature_names()},
             {"periods", syn.truth}};
  auto truth_path = a.out;
  truth_path.replace_extension(".truth.json");
  save_json(truth, truth_path);
  std::cout << "wrote " << syn.data.rows() << " rows to " << a.out.string() << "\n";
  return 0;
}

struct PrepCmdArgs {
  fs::path data, out;
  SchemaArgs schema;
  PrepArgs prep;
};

int cmd_prep(const PrepCmdArgs& a) {
  const auto options = a.prep.options();
  const auto raw = stage("load", [&] { return load_csv(a.data, a.schema.schema(true)); });
  const auto p = stage("prep", [&] { return prepare(raw, options); });
  fs::create_directories(a.out);
  write_csv(p.train, a.out / "train.csv");
  write_csv(p.holdout, a.out / "holdout.csv");
  save_json(prep_summary(p, options), a.out / "prep.json");
  std::cout << "train " << p.train.rows() << " rows, holdout " << p.holdout.rows() << " rows, removed "
            << p.prior_removed << " prior defaulters\n";
  return 0;
}

struct TrainArgs {
  fs::path data, out;
  SchemaArgs schema;
  PrepArgs prep;
  unsigned workers = 1;
};

struct EnsembleArgs : TrainArgs {
  PoolConfig pool;
  SolverOptions solver;
};

int cmd_train_ensemble(const EnsembleArgs& a) {
  Timer timer;
  const auto options = a.prep.options();
  const auto raw = timer.run("load", [&] { return load_csv(a.data, a.schema.schema(true)); });
  const auto p = timer.run("prep", [&] { return prepare(raw, options); });

  TrainPoolOptions training;
  training.workers = a.workers;
  const auto periods = p.train.distinct_periods();
  const auto draws =
      timer.run("sample_feature_subsets", [&] { return sample_feature_subsets(p.train.feature_names(), a.pool, periods); });
  const auto pool = timer.run("train_pool", [&] { return train_pool(p.train, draws, a.pool, training); });
  const auto pm = timer.run("build_prediction_matrix", [&] { return build_prediction_matrix(pool, p.train); });
  const auto gram = timer.run("build_gram", [&] { return build_gram(pm); });
  const auto solution = timer.run("solve_simplex_qp", [&] { return solve_simplex_qp(gram, a.solver); });
  auto model = timer.run("assemble", [&] {
    auto e = assemble(pool, pm, solution);
    e.solver.options = a.solver;
    e.imputation = p.imputation;
    attach_feature_summary(e, p.train);
    return e;
  });

  fs::create_directories(a.out);
  timer.run("write", [&] {
    json j = ensemble_to_json(model);
    j["training"] = prep_summary(p, options);
    save_json(j, a.out / "ensemble.json");
    save_pool(pool, a.out / "pool");
    write_csv(p.train, a.out / "train.csv");
    write_csv(p.holdout, a.out / "holdout.csv");
  });
  save_json(timer.sidecar("train-ensemble", a.workers), a.out / "train-ensemble.timings.json");

  std::cout << "pool " << pool.usable_count() << "/" << pool.members.size() << " usable, support "
            << model.members().size() << ", objective " << fmt(solution.objective) << ", kkt residual "
            << fmt(solution.kkt_residual) << "\n";
  return 0;
}

struct BaselineArgs : TrainArgs {
  int bins = 10;
  std::vector<std::string> passthrough;
  bool no_collapse = false;
  double collapse_alpha = 0.05;
  double smoothing = 0.5;
  bool include_odds = false;
  double alpha = 0.05;
};

int cmd_train_baseline(const BaselineArgs& a) {
  Timer timer;
  const auto options = a.prep.options();
  const auto raw = timer.run("load", [&] { return load_csv(a.data, a.schema.schema(true)); });
  const auto p = timer.run("prep", [&] { return prepare(raw, options); });
  auto base = timer.run("train_base_model", [&] {
    auto config = default_baseline_config(p.train, a.passthrough, a.bins);
    config.collapse = !a.no_collapse;
    config.collapse_alpha = a.collapse_alpha;
    config.smoothing = a.smoothing;
    config.include_odds = a.include_odds;
    config.elimination.alpha = a.alpha;
    auto m = train_base_model(p.train, config);
    m.imputation = p.imputation;
    return m;
  });

  fs::create_directories(a.out);
  timer.run("write", [&] {
    json j = base_model_to_json(base);
    j["training"] = prep_summary(p, options);
    save_json(j, a.out / "baseline.json");
    write_csv(p.train, a.out / "train.csv");
    write_csv(p.holdout, a.out / "holdout.csv");
  });
  save_json(timer.sidecar("train-baseline", a.workers), a.out / "train-baseline.timings.json");
  std::cout << "base model keeps " << base.model.features.size() << " of "
            << p.train.num_features() << " candidate terms\n";
  return 0;
}

struct ScoreArgs {
  fs::path model, data, out;
  SchemaArgs schema;
  int top_n = 0;
  bool strict = false;
};

int cmd_score(const ScoreArgs& a) {
  const auto model = stage("load model", [&] { return load_model(a.model); });
  if (a.top_n > 0 && !model.ensemble) throw ConfigError("--top-n reason codes need an ensemble model");
  const auto raw = stage("load data", [&] { return load_csv(a.data, a.schema.schema(false)); });
  const auto in = stage("validate", [&] { return scoring_input(raw, model, a.strict); });
  const auto scores = stage("score", [&] { return model.score(in.data); });

  std::string csv = "record_id,score";
  for (int r = 1; r <= a.top_n; ++r) csv += ",reason_" + std::to_string(r);
  csv += "\n";
  for (std::size_t i = 0; i < in.data.rows(); ++i) {
    csv += in.data.record_id(i) + "," + fmt(scores(static_cast<Eigen::Index>(i)));
    if (a.top_n > 0) {
      const auto codes = reason_codes(*model.ensemble, in.data.row(i), {}, a.top_n);
      for (int r = 0; r < a.top_n; ++r)
        csv += "," + (static_cast<std::size_t>(r) < codes.size() ? codes[static_cast<std::size_t>(r)].feature : "");
    }
    csv += "\n";
  }
  if (a.out.empty())
    std::cout << csv;
  else
    write_text(a.out, csv);

  if (!in.errors.empty()) {
    report_row_errors(in.errors);
    std::cerr << in.errors.size() << " of " << raw.rows() << " rows could not be scored\n";
    return 2;
  }
  return 0;
}

struct EvaluateArgs {
  fs::path model, data, out;
  SchemaArgs schema;
};

void print_report(const EvaluationReport& r, const std::vector<PeriodKs>& series) {
  std::cout << std::fixed << std::setprecision(2);
  std::cout << "rows " << r.n_rows << ", events " << r.n_events << "\n";
  std::cout << "KS (score grain)   " << 100.0 * r.ks << "\n";
  std::cout << "KS (decile grain)  " << 100.0 * r.ks_decile << "\n";
  std::cout << "concordant %       " << r.concordant_pct << "\n";
  std::cout << "discordant %       " << r.discordant_pct << "\n";
  std::cout << "tied %             " << r.tied_pct << "\n\n";
  std::cout << "decile        n   events  event_rate  cum_events  cum_nonevents\n";
  for (const auto& d : r.deciles)
    std::cout << std::setw(6) << d.decile << std::setw(9) << d.n << std::setw(9) << d.events << std::setw(12)
              << 100.0 * d.event_rate << std::setw(12) << 100.0 * d.cum_event_share << std::setw(15)
              << 100.0 * d.cum_nonevent_share << "\n";
  if (!series.empty()) {
    std::cout << "\nperiod      KS        n   events\n";
    for (const auto& p : series)
      std::cout << std::setw(6) << p.period << std::setw(8) << 100.0 * p.ks << std::setw(9) << p.n
                << std::setw(9) << p.events << "\n";
  }
  std::cout.unsetf(std::ios::fixed);
}

int cmd_evaluate(const EvaluateArgs& a) {
  const auto model = stage("load model", [&] { return load_model(a.model); });
  const auto raw = stage("load data", [&] { return load_csv(a.data, a.schema.schema(true)); });
  const auto in = stage("validate", [&] { return scoring_input(raw, model, false); });
  if (!in.errors.empty()) {
    report_row_errors(in.errors);
    throw DataError("evaluate: " + std::to_string(in.errors.size()) + " rows could not be scored");
  }
  const auto scores = stage("score", [&] { return model.score(in.data); });
  const auto report = stage("evaluate", [&] {
    return evaluate({scores.data(), static_cast<std::size_t>(scores.size())}, in.data.labels());
  });
  const auto series = stage("evaluate_over_time", [&] {
    return evaluate_over_time([&](const Dataset& d) { return model.score(d); }, in.data);
  });

  print_report(report, series);
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    json j{{"schema_version", kSchemaVersion},
           {"kind", "evaluation"},
           {"model", a.model.filename().string()},
           {"report", report}};
    save_json(j, a.out / "report.json");
    std::string csv = "period,ks,n,events\n";
    for (const auto& p : series)
      csv += std::to_string(p.period) + "," + fmt(100.0 * p.ks) + "," + std::to_string(p.n) + "," +
             std::to_string(p.events) + "\n";
    write_text(a.out / "periods.csv", csv);
  }
  return 0;
}

struct ExplainArgs {
  fs::path model, data, out;
  SchemaArgs schema;
  std::string record_id;
  std::string reference;
  int top_n = 5;
  std::vector<std::string> deltas;
};

int cmd_explain(const ExplainArgs& a) {
  const auto model = stage("load model", [&] { return load_model(a.model); });
  if (!model.ensemble) throw ConfigError("explain needs an ensemble model");
  const auto& e = *model.ensemble;
  if (a.record_id.empty() == a.reference.empty())
    throw ConfigError("explain needs exactly one of --record-id or --reference");

  std::map<std::string, double, std::less<>> deltas;
  for (const auto& d : a.deltas) {
    const auto eq = d.find('=');
    if (eq == std::string::npos) throw ConfigError("--delta expects FEATURE=VALUE, got '" + d + "'");
    try {
      deltas[d.substr(0, eq)] = std::stod(d.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw ConfigError("--delta has a non-numeric value in '" + d + "'");
    }
  }

  FeatureRow row;
  std::string label;
  if (!a.reference.empty()) {
    row = reference_row(e, a.reference == "median" ? ReferencePoint::median : ReferencePoint::mean);
    label = a.reference;
  } else {
    if (a.data.empty()) throw ConfigError("--record-id needs --data");
    const auto raw = stage("load data", [&] { return load_csv(a.data, a.schema.schema(false)); });
    const auto in = stage("validate", [&] { return scoring_input(raw, model, false); });
    const auto ids = in.data.record_ids();
    const auto it = std::find(ids.begin(), ids.end(), a.record_id);
    if (it == ids.end()) {
      const auto raw_ids = raw.record_ids();
      if (std::find(raw_ids.begin(), raw_ids.end(), a.record_id) != raw_ids.end()) {
        report_row_errors(in.errors);
        throw DataError("record '" + a.record_id + "' has missing values");
      }
      throw DataError("record '" + a.record_id + "' not found");
    }
    row = in.data.row(static_cast<std::size_t>(it - ids.begin()));
    label = a.record_id;
  }

  const auto codes = stage("explain", [&] { return reason_codes(e, row, deltas, a.top_n); });
  json sens = json::object();
  for (const auto& f : e.required_features()) sens[f] = sensitivity(e, row, f);
  json reasons = json::array();
  for (const auto& c : codes)
    reasons.push_back(
        {{"feature", c.feature}, {"sensitivity", c.sensitivity}, {"delta_x", c.delta_x}, {"delta_p", c.delta_p}});
  json values = json::object();
  for (const auto& f : e.required_features()) values[f] = row.at(f);
  const json j{{"record", label},
               {"score", score(e, row)},
               {"values", values},
               {"sensitivities", sens},
               {"reason_codes", reasons}};
  if (a.out.empty())
    std::cout << dump(j);
  else
    save_json(j, a.out);
  return 0;
}

// ---------------------------------------------------------------------------

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"Subset logistic regression ensembles with simplex-constrained weights"};
  app.name("logens");
  app.set_config("--config", "", "Read options from an INI or TOML file; command-line flags win");
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic multi-period dataset");
  s->add_option("--out", synth.out, "Output CSV path")->required();
  s->add_option("--seed", synth.config.rng_seed, "Random seed")->capture_default_str();
  s->add_option("--n", synth.config.rows, "Number of rows")->check(CLI::PositiveNumber)->capture_default_str();
  s->add_option("--features", synth.config.features, "Number of features")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s->add_option("--periods", synth.config.periods, "Number of periods")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s->add_option("--drift", synth.config.drift, "Per-period coefficient drift")->capture_default_str();
  s->add_option("--base-rate", synth.config.base_rate, "Target event rate")->capture_default_str();
  s->add_option("--correlation", synth.config.correlation, "Shared-factor correlation")->capture_default_str();
  s->add_option("--nonlinear", synth.config.nonlinear_features, "Features with a quadratic effect")
      ->capture_default_str();
  s->add_option("--prior-default-rate", synth.config.prior_default_rate, "Share of rows flagged as prior defaulters")
      ->capture_default_str();
  s->add_option("--missing-rate", synth.config.missing_rate, "Share of feature cells left missing")
      ->capture_default_str();

  PrepCmdArgs prep;
  auto* p = app.add_subcommand("prep", "Clean, filter, split and impute a dataset");
  p->add_option("--data", prep.data, "Input CSV")->required();
  p->add_option("--out", prep.out, "Output directory")->required();
  prep.schema.add(p);
  prep.prep.add(p);

  BaselineArgs baseline;
  auto* b = app.add_subcommand("train-baseline", "Train the binned log-odds base model");
  b->add_option("--data", baseline.data, "Input CSV")->required();
  b->add_option("--out", baseline.out, "Output directory")->required();
  baseline.schema.add(b);
  baseline.prep.add(b);
  b->add_option("--bins", baseline.bins, "Equal-frequency bins per feature")->capture_default_str();
  b->add_option("--passthrough", baseline.passthrough, "Features used raw instead of binned")->delimiter(',');
  b->add_flag("--no-collapse", baseline.no_collapse, "Keep statistically indistinguishable adjacent bins");
  b->add_option("--collapse-alpha", baseline.collapse_alpha, "Significance level for merging bins")
      ->capture_default_str();
  b->add_option("--smoothing", baseline.smoothing, "Count added to each bin's events and non-events")
      ->capture_default_str();
  b->add_flag("--include-odds", baseline.include_odds, "Also offer the raw odds encoding");
  b->add_option("--alpha", baseline.alpha, "Backward elimination significance level")->capture_default_str();
  b->add_option("--workers", baseline.workers, "Worker threads")->capture_default_str();

  EnsembleArgs ens;
  auto* t = app.add_subcommand("train-ensemble", "Train the subset pool and fit ensemble weights");
  t->add_option("--data", ens.data, "Input CSV")->required();
  t->add_option("--out", ens.out, "Output directory")->required();
  ens.schema.add(t);
  ens.prep.add(t);
  t->add_option("--samples", ens.pool.samples_per_period, "Feature subsets per period")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  t->add_option("--fraction", ens.pool.feature_fraction, "Share of features per subset")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  t->add_option("--alpha", ens.pool.alpha, "Backward elimination significance level")->capture_default_str();
  t->add_option("--seed", ens.pool.rng_seed, "Subset sampling seed")->capture_default_str();
  t->add_option("--tol", ens.solver.tol, "Weight solver KKT tolerance")->capture_default_str();
  t->add_option("--max-iter", ens.solver.max_iter, "Weight solver iteration cap")->capture_default_str();
  t->add_option("--sparsity-tol", ens.solver.sparsity_tol, "Weights at or below this are zeroed")
      ->capture_default_str();
  t->add_option("--workers", ens.workers, "Worker threads for pool training (0 = all cores)")
      ->capture_default_str();

  ScoreArgs sc;
  auto* c = app.add_subcommand("score", "Score records with a saved model");
  c->add_option("--model", sc.model, "Model JSON")->required();
  c->add_option("--data", sc.data, "Input CSV")->required();
  c->add_option("--out", sc.out, "Output CSV (stdout when omitted)");
  sc.schema.add(c);
  c->add_option("--top-n", sc.top_n, "Reason-code columns per record")->check(CLI::NonNegativeNumber);
  c->add_flag("--strict", sc.strict, "Reject rows with missing values instead of imputing");

  EvaluateArgs ev;
  auto* v = app.add_subcommand("evaluate", "KS, concordance, decile table and per-period KS");
  v->add_option("--model", ev.model, "Model JSON")->required();
  v->add_option("--data", ev.data, "Labelled CSV")->required();
  v->add_option("--out", ev.out, "Directory for report.json and periods.csv");
  ev.schema.add(v);

  ExplainArgs ex;
  auto* x = app.add_subcommand("explain", "Sensitivities and reason codes for one record");
  x->add_option("--model", ex.model, "Ensemble model JSON")->required();
  x->add_option("--data", ex.data, "Input CSV");
  x->add_option("--record-id", ex.record_id, "Record to explain");
  x->add_option("--reference", ex.reference, "Explain the training mean or median row instead")
      ->check(CLI::IsMember({"mean", "median"}));
  x->add_option("--top-n", ex.top_n, "Number of reason codes")->capture_default_str();
  x->add_option("--delta", ex.deltas, "Per-feature change FEATURE=VALUE (default: training stddev)");
  x->add_option("--out", ex.out, "Output JSON (stdout when omitted)");
  ex.schema.add(x);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (s->parsed()) return cmd_synth(synth);
  if (p->parsed()) return cmd_prep(prep);
  if (b->parsed()) return cmd_train_baseline(baseline);
  if (t->parsed()) return cmd_train_ensemble(ens);
  if (c->parsed()) return cmd_score(sc);
  if (v->parsed()) return cmd_evaluate(ev);
  return cmd_explain(ex);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  try {
    return dispatch(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed artifact: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"logens"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace logens
