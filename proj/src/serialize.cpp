#include "logens/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "logens/errors.hpp"

namespace logens {
namespace {

// JSON has no NaN or infinity; encode them as null and "inf"/"-inf".
json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double read_number(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ConfigError("json: unexpected numeric string '" + s + "'");
  }
  return j.get<double>();
}

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::vector<double> read_numbers(const json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(read_number(x));
  return out;
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("json: missing field '") + key + "'");
  return j.at(key).get<T>();
}

void check_version(const json& j) {
  if (!j.contains("schema_version"))
    throw ConfigError("artifact has no schema_version field");
  const int found = j.at("schema_version").get<int>();
  if (found != kSchemaVersion)
    throw ConfigError("artifact schema version " + std::to_string(found) +
                      " does not match supported version " + std::to_string(kSchemaVersion));
}

const char* method_name(BinMethod m) {
  return m == BinMethod::equal_frequency ? "equal_frequency" : "explicit_cutpoints";
}

}  // namespace

void to_json(json& j, const FitInfo& v) {
  j = json{{"iterations", v.iterations},
           {"log_likelihood", number(v.log_likelihood)},
           {"converged", v.converged},
           {"separated", v.separated},
           {"intercept_std_error", number(v.intercept_std_error)},
           {"intercept_p_value", number(v.intercept_p_value)},
           {"std_errors", numbers(v.std_errors)},
           {"p_values", numbers(v.p_values)},
           {"aliased", v.aliased},
           {"eliminated", v.eliminated}};
}

void from_json(const json& j, FitInfo& v) {
  v.iterations = field<int>(j, "iterations");
  v.log_likelihood = read_number(j.at("log_likelihood"));
  v.converged = field<bool>(j, "converged");
  v.separated = field<bool>(j, "separated");
  v.intercept_std_error = read_number(j.at("intercept_std_error"));
  v.intercept_p_value = read_number(j.at("intercept_p_value"));
  v.std_errors = read_numbers(j.at("std_errors"));
  v.p_values = read_numbers(j.at("p_values"));
  v.aliased = field<std::vector<bool>>(j, "aliased");
  v.eliminated = field<std::vector<std::string>>(j, "eliminated");
}

void to_json(json& j, const LogitModel& v) {
  json coefs = json::object();
  for (std::size_t i = 0; i < v.features.size(); ++i) coefs[v.features[i]] = number(v.coefficients[i]);
  j = json{{"intercept", v.intercept}, {"features", v.features}, {"coefficients", coefs}, {"fit_info", v.info}};
}

void from_json(const json& j, LogitModel& v) {
  v.intercept = field<double>(j, "intercept");
  v.features = field<std::vector<std::string>>(j, "features");
  const auto& coefs = j.at("coefficients");
  v.coefficients.clear();
  for (const auto& f : v.features) {
    if (!coefs.contains(f)) throw ConfigError("json: no coefficient for feature '" + f + "'");
    v.coefficients.push_back(read_number(coefs.at(f)));
  }
  v.info = j.at("fit_info").get<FitInfo>();
}

void to_json(json& j, const ImputationStats& v) {
  json fill = json::object();
  for (std::size_t i = 0; i < v.features.size(); ++i) fill[v.features[i]] = v.fill_values[i];
  j = json{{"policy", v.policy.kind == ImputationPolicy::Kind::median ? "median" : "constant"},
           {"constant", v.policy.constant},
           {"features", v.features},
           {"fill", fill}};
}

void from_json(const json& j, ImputationStats& v) {
  const auto policy = field<std::string>(j, "policy");
  if (policy != "median" && policy != "constant")
    throw ConfigError("json: unknown imputation policy '" + policy + "'");
  v.policy.kind = policy == "median" ? ImputationPolicy::Kind::median : ImputationPolicy::Kind::constant;
  v.policy.constant = field<double>(j, "constant");
  v.features = field<std::vector<std::string>>(j, "features");
  v.fill_values.clear();
  for (const auto& f : v.features) v.fill_values.push_back(j.at("fill").at(f).get<double>());
}

void to_json(json& j, const SplitSpec& v) {
  j = json{{"train_fraction", v.train_fraction}, {"rng_seed", v.rng_seed}, {"stratify_by_label", v.stratify_by_label}};
}

void from_json(const json& j, SplitSpec& v) {
  v.train_fraction = field<double>(j, "train_fraction");
  v.rng_seed = field<std::uint64_t>(j, "rng_seed");
  v.stratify_by_label = field<bool>(j, "stratify_by_label");
}

void to_json(json& j, const BinEncoding& v) {
  json bins = json::array();
  for (const auto& b : v.bins)
    bins.push_back({{"events", b.events}, {"nonevents", b.nonevents}, {"odds", b.odds}, {"log_odds", b.log_odds}});
  j = json{{"feature", v.spec.feature},
           {"method", method_name(v.spec.method)},
           {"requested_bins", v.spec.requested_bins},
           {"edges", v.spec.edges},
           {"smoothing", v.smoothing},
           {"bins", bins}};
}

void from_json(const json& j, BinEncoding& v) {
  v.spec.feature = field<std::string>(j, "feature");
  v.spec.method = field<std::string>(j, "method") == "equal_frequency" ? BinMethod::equal_frequency
                                                                        : BinMethod::explicit_cutpoints;
  v.spec.requested_bins = field<int>(j, "requested_bins");
  v.spec.edges = field<std::vector<double>>(j, "edges");
  v.smoothing = field<double>(j, "smoothing");
  v.bins.clear();
  for (const auto& b : j.at("bins"))
    v.bins.push_back({b.at("events").get<double>(), b.at("nonevents").get<double>(),
                      b.at("odds").get<double>(), b.at("log_odds").get<double>()});
  if (v.bins.size() != v.spec.bin_count())
    throw ConfigError("json: bin count does not match edges for feature '" + v.spec.feature + "'");
}

void to_json(json& j, const FeatureTransform& v) {
  j = json{{"encoding", v.encoding}, {"log_odds_name", v.log_odds_name}};
  j["odds_name"] = v.odds_name ? json(*v.odds_name) : json(nullptr);
}

void from_json(const json& j, FeatureTransform& v) {
  v.encoding = j.at("encoding").get<BinEncoding>();
  v.log_odds_name = field<std::string>(j, "log_odds_name");
  if (j.contains("odds_name") && !j.at("odds_name").is_null()) v.odds_name = j.at("odds_name").get<std::string>();
}

void to_json(json& j, const PoolConfig& v) {
  j = json{{"samples_per_period", v.samples_per_period},
           {"feature_fraction", v.feature_fraction},
           {"alpha", v.alpha},
           {"rng_seed", v.rng_seed}};
}

void from_json(const json& j, PoolConfig& v) {
  v.samples_per_period = field<int>(j, "samples_per_period");
  v.feature_fraction = field<double>(j, "feature_fraction");
  v.alpha = field<double>(j, "alpha");
  v.rng_seed = field<std::uint64_t>(j, "rng_seed");
}

void to_json(json& j, const SolverOptions& v) {
  j = json{{"tol", v.tol}, {"max_iter", v.max_iter}, {"sparsity_tol", v.sparsity_tol}, {"polish_interval", v.polish_interval}};
}

void from_json(const json& j, SolverOptions& v) {
  v.tol = field<double>(j, "tol");
  v.max_iter = field<int>(j, "max_iter");
  v.sparsity_tol = field<double>(j, "sparsity_tol");
  v.polish_interval = field<int>(j, "polish_interval");
}

void to_json(json& j, const WeightSolution& v) {
  std::vector<double> weights;
  for (auto s : v.support) weights.push_back(v.lambda(static_cast<Eigen::Index>(s)));
  j = json{{"support", v.support},
           {"weights", weights},
           {"objective", number(v.objective)},
           {"kkt_residual", number(v.kkt_residual)},
           {"iterations", v.iterations},
           {"converged", v.converged}};
}

void to_json(json& j, const SolverReport& v) {
  j = json{{"objective", number(v.objective)},
           {"kkt_residual", number(v.kkt_residual)},
           {"iterations", v.iterations},
           {"converged", v.converged},
           {"pool_size", v.pool_size},
           {"support", v.support},
           {"options", v.options}};
}

void from_json(const json& j, SolverReport& v) {
  v.objective = read_number(j.at("objective"));
  v.kkt_residual = read_number(j.at("kkt_residual"));
  v.iterations = field<int>(j, "iterations");
  v.converged = field<bool>(j, "converged");
  v.pool_size = field<std::size_t>(j, "pool_size");
  v.support = field<std::vector<std::size_t>>(j, "support");
  v.options = j.at("options").get<SolverOptions>();
}

void to_json(json& j, const DecileRow& v) {
  j = json{{"decile", v.decile},
           {"n", v.n},
           {"events", v.events},
           {"event_rate", v.event_rate},
           {"cum_event_share", v.cum_event_share},
           {"cum_nonevent_share", v.cum_nonevent_share}};
}

void to_json(json& j, const EvaluationReport& v) {
  j = json{{"ks", v.ks * 100.0},
           {"ks_decile", v.ks_decile * 100.0},
           {"concordant_pct", v.concordant_pct},
           {"discordant_pct", v.discordant_pct},
           {"tied_pct", v.tied_pct},
           {"n_rows", v.n_rows},
           {"n_events", v.n_events},
           {"deciles", v.deciles}};
}

void to_json(json& j, const PeriodTruth& v) {
  j = json{{"period", v.period}, {"intercept", v.intercept}, {"linear", v.linear}, {"quadratic", v.quadratic}};
}

ModelKind model_kind(const json& j) {
  check_version(j);
  const auto kind = field<std::string>(j, "kind");
  if (kind == "baseline") return ModelKind::baseline;
  if (kind == "ensemble") return ModelKind::ensemble;
  throw ConfigError("artifact kind '" + kind + "' is not a model");
}

json base_model_to_json(const BaseModel& m) {
  json j{{"schema_version", kSchemaVersion},
         {"kind", "baseline"},
         {"model", m.model},
         {"transforms", m.transforms},
         {"passthrough", m.passthrough}};
  j["imputation"] = m.imputation ? json(*m.imputation) : json(nullptr);
  return j;
}

BaseModel base_model_from_json(const json& j) {
  if (model_kind(j) != ModelKind::baseline) throw ConfigError("artifact is not a base model");
  BaseModel m;
  m.model = j.at("model").get<LogitModel>();
  m.transforms = j.at("transforms").get<std::vector<FeatureTransform>>();
  m.passthrough = field<std::vector<std::string>>(j, "passthrough");
  if (j.contains("imputation") && !j.at("imputation").is_null())
    m.imputation = j.at("imputation").get<ImputationStats>();
  return m;
}

json ensemble_to_json(const EnsembleModel& e) {
  json members = json::array();
  for (const auto& m : e.members())
    members.push_back({{"weight", m.weight}, {"pool_index", m.pool_index}, {"model", m.model}});
  json summary = json::object();
  for (const auto& [f, s] : e.feature_summary)
    summary[f] = {{"mean", s.mean}, {"median", s.median}, {"stddev", s.stddev}};
  json j{{"schema_version", kSchemaVersion},
         {"kind", "ensemble"},
         {"members", members},
         {"required_features", e.required_features()},
         {"pool_config", e.pool_config},
         {"solver", e.solver},
         {"feature_summary", summary}};
  j["imputation"] = e.imputation ? json(*e.imputation) : json(nullptr);
  return j;
}

EnsembleModel ensemble_from_json(const json& j) {
  if (model_kind(j) != ModelKind::ensemble) throw ConfigError("artifact is not an ensemble model");
  std::vector<EnsembleMember> members;
  for (const auto& m : j.at("members"))
    members.push_back({field<double>(m, "weight"), field<std::size_t>(m, "pool_index"),
                       m.at("model").get<LogitModel>()});
  EnsembleModel e(std::move(members));
  e.pool_config = j.at("pool_config").get<PoolConfig>();
  e.solver = j.at("solver").get<SolverReport>();
  for (const auto& [f, s] : j.at("feature_summary").items())
    e.feature_summary.emplace(f, FeatureSummary{s.at("mean").get<double>(), s.at("median").get<double>(),
                                                s.at("stddev").get<double>()});
  if (j.contains("imputation") && !j.at("imputation").is_null())
    e.imputation = j.at("imputation").get<ImputationStats>();
  return e;
}

json pool_member_to_json(const PoolMember& m) {
  json j{{"period", m.draw.period},
         {"sample_index", m.draw.sample_index},
         {"seed", m.draw.seed},
         {"drawn_features", m.draw.features},
         {"status", m.status == MemberStatus::ok ? "ok" : "failed"},
         {"failure", m.failure}};
  j["model"] = m.model ? json(*m.model) : json(nullptr);
  return j;
}

PoolMember pool_member_from_json(const json& j) {
  PoolMember m;
  m.draw.period = field<int>(j, "period");
  m.draw.sample_index = field<int>(j, "sample_index");
  m.draw.seed = field<std::uint64_t>(j, "seed");
  m.draw.features = field<std::vector<std::string>>(j, "drawn_features");
  m.status = field<std::string>(j, "status") == "ok" ? MemberStatus::ok : MemberStatus::failed;
  m.failure = field<std::string>(j, "failure");
  if (!j.at("model").is_null()) m.model = j.at("model").get<LogitModel>();
  return m;
}

namespace {

std::string member_file(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "member_%03zu.json", i);
  return buf;
}

}  // namespace

void save_pool(const ModelPool& pool, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json entries = json::array();
  json failures = json::array();
  for (std::size_t i = 0; i < pool.members.size(); ++i) {
    const auto& m = pool.members[i];
    const auto file = member_file(i);
    save_json(pool_member_to_json(m), dir / file);
    entries.push_back({{"file", file},
                       {"period", m.draw.period},
                       {"sample_index", m.draw.sample_index},
                       {"seed", m.draw.seed},
                       {"status", m.status == MemberStatus::ok ? "ok" : "failed"}});
    if (!m.usable()) failures.push_back({{"member", i}, {"reason", m.failure}});
  }
  save_json(json{{"schema_version", kSchemaVersion},
                 {"kind", "pool"},
                 {"config", pool.config},
                 {"members", entries},
                 {"failures", failures}},
            dir / "manifest.json");
}

ModelPool load_pool(const std::filesystem::path& dir) {
  const json manifest = load_json(dir / "manifest.json");
  check_version(manifest);
  if (field<std::string>(manifest, "kind") != "pool") throw ConfigError("manifest is not a pool manifest");
  ModelPool pool;
  pool.config = manifest.at("config").get<PoolConfig>();
  for (const auto& entry : manifest.at("members"))
    pool.members.push_back(pool_member_from_json(load_json(dir / field<std::string>(entry, "file"))));
  return pool;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void save_json(const json& j, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << dump(j);
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

}  // namespace logens
