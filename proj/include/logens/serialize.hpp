#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "logens/baseline.hpp"
#include "logens/dataset.hpp"
#include "logens/ensemble.hpp"
#include "logens/interpret.hpp"
#include "logens/logit.hpp"
#include "logens/metrics.hpp"
#include "logens/simplex_qp.hpp"

namespace logens {

using json = nlohmann::json;

/// Bumped whenever a persisted artifact changes shape.
inline constexpr int kSchemaVersion = 1;

void to_json(json& j, const FitInfo& v);
void from_json(const json& j, FitInfo& v);
void to_json(json& j, const LogitModel& v);
void from_json(const json& j, LogitModel& v);
void to_json(json& j, const ImputationStats& v);
void from_json(const json& j, ImputationStats& v);
void to_json(json& j, const SplitSpec& v);
void from_json(const json& j, SplitSpec& v);
void to_json(json& j, const BinEncoding& v);
void from_json(const json& j, BinEncoding& v);
void to_json(json& j, const FeatureTransform& v);
void from_json(const json& j, FeatureTransform& v);
void to_json(json& j, const PoolConfig& v);
void from_json(const json& j, PoolConfig& v);
void to_json(json& j, const SolverOptions& v);
void from_json(const json& j, SolverOptions& v);
void to_json(json& j, const WeightSolution& v);
void to_json(json& j, const SolverReport& v);
void from_json(const json& j, SolverReport& v);
void to_json(json& j, const DecileRow& v);
void to_json(json& j, const EvaluationReport& v);
void to_json(json& j, const PeriodTruth& v);

enum class ModelKind { baseline, ensemble };

/// Reads the artifact kind after checking the schema version; a mismatch
/// raises ConfigError naming both versions.
ModelKind model_kind(const json& j);

json base_model_to_json(const BaseModel& m);
BaseModel base_model_from_json(const json& j);
json ensemble_to_json(const EnsembleModel& e);
EnsembleModel ensemble_from_json(const json& j);

json pool_member_to_json(const PoolMember& m);
PoolMember pool_member_from_json(const json& j);
/// Writes manifest.json plus one member_NNN.json per pool member into `dir`.
void save_pool(const ModelPool& pool, const std::filesystem::path& dir);
ModelPool load_pool(const std::filesystem::path& dir);

/// Pretty-printed, trailing newline; byte-stable for equal values.
std::string dump(const json& j);
void save_json(const json& j, const std::filesystem::path& path);
json load_json(const std::filesystem::path& path);

}  // namespace logens
