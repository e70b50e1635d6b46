#include "logens/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <thread>

#include "logens/errors.hpp"

namespace logens {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::size_t subset_size(std::size_t available, double feature_fraction) {
  const auto n = static_cast<std::size_t>(std::llround(feature_fraction * static_cast<double>(available)));
  return std::clamp<std::size_t>(n, 1, available);
}

std::uint64_t derive_seed(std::uint64_t base, int period, int sample_index) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(period)));
  h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(sample_index)));
  return h;
}

std::vector<SubsetDraw> sample_feature_subsets(std::span<const std::string> features,
                                               const PoolConfig& config,
                                               std::span<const int> periods) {
  if (features.empty()) throw ConfigError("subset sampling: empty feature list");
  if (!(config.feature_fraction > 0.0 && config.feature_fraction <= 1.0))
    throw ConfigError("subset sampling: feature_fraction must lie in (0, 1]");
  if (config.samples_per_period < 1)
    throw ConfigError("subset sampling: samples_per_period must be at least 1");

  const std::size_t take = subset_size(features.size(), config.feature_fraction);
  std::vector<SubsetDraw> draws;
  draws.reserve(periods.size() * static_cast<std::size_t>(config.samples_per_period));
  for (int period : periods) {
    for (int s = 0; s < config.samples_per_period; ++s) {
      SubsetDraw draw;
      draw.period = period;
      draw.sample_index = s;
      draw.seed = derive_seed(config.rng_seed, period, s);
      std::mt19937_64 rng(draw.seed);
      std::vector<std::size_t> idx(features.size());
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      // Partial Fisher-Yates: the first `take` slots are a uniform sample.
      for (std::size_t i = 0; i < take; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
        std::swap(idx[i], idx[pick(rng)]);
      }
      idx.resize(take);
      std::sort(idx.begin(), idx.end());
      for (auto i : idx) draw.features.push_back(features[i]);
      draws.push_back(std::move(draw));
    }
  }
  return draws;
}

std::size_t ModelPool::usable_count() const {
  return static_cast<std::size_t>(
      std::count_if(members.begin(), members.end(), [](const PoolMember& m) { return m.usable(); }));
}

ModelPool train_pool(const Dataset& d, std::span<const SubsetDraw> draws, const PoolConfig& config,
                     const TrainPoolOptions& options) {
  if (draws.empty()) throw ConfigError("pool: no feature subsets to train");
  std::map<int, Dataset> by_period;
  for (const auto& draw : draws) {
    if (by_period.count(draw.period)) continue;
    auto rows = d.rows_in_period(draw.period);
    if (rows.empty())
      throw ConfigError("pool: period " + std::to_string(draw.period) + " has no rows");
    by_period.emplace(draw.period, d.select_rows(rows));
  }

  ModelPool pool;
  pool.config = config;
  pool.members.resize(draws.size());
  EliminationOptions elimination = options.elimination;
  elimination.alpha = config.alpha;

  auto train_one = [&](std::size_t i) {
    PoolMember& member = pool.members[i];
    member.draw = draws[i];
    try {
      auto model = backward_eliminate(by_period.at(draws[i].period), draws[i].features, elimination);
      if (!model.info.converged && !model.info.separated) {
        member.failure = "fit did not converge";
        return;
      }
      member.model = std::move(model);
      member.status = MemberStatus::ok;
    } catch (const Error& e) {
      member.failure = e.what();
    }
  };

  unsigned workers = options.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.workers;
  workers = std::min<unsigned>(workers, static_cast<unsigned>(draws.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < draws.size(); ++i) train_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      threads.emplace_back([&] {
        for (std::size_t i = next++; i < draws.size(); i = next++) train_one(i);
      });
  }

  if (pool.usable_count() == 0) throw NumericalError("pool: every member failed to train");
  return pool;
}

PredictionMatrix build_prediction_matrix(const ModelPool& pool, const Dataset& rows) {
  PredictionMatrix pm;
  for (std::size_t i = 0; i < pool.members.size(); ++i)
    if (pool.members[i].usable()) pm.member_index.push_back(i);
  if (pm.member_index.empty()) throw ConfigError("prediction matrix: pool has no usable members");

  pm.columns.resize(static_cast<Eigen::Index>(rows.rows()),
                    static_cast<Eigen::Index>(pm.member_index.size()));
  for (std::size_t j = 0; j < pm.member_index.size(); ++j) {
    const auto& member = pool.members[pm.member_index[j]];
    for (const auto& f : member.model->features)
      if (!rows.has_feature(f))
        throw DataError("prediction matrix: member " + std::to_string(pm.member_index[j]) +
                        " needs feature '" + f + "' absent from the data");
    pm.columns.col(static_cast<Eigen::Index>(j)) = predict_proba(*member.model, rows);
  }
  pm.target = rows.label_vector();
  return pm;
}

}  // namespace logens
