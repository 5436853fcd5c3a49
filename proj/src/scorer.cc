/*
 * Copyright 2026 The xai-bench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "xaibench/scorer.h"

#include <cmath>
#include <mutex>
#include <string>
#include <unordered_map>

namespace xaibench {

std::size_t TokenIdsHash::operator()(const TokenIds& ids) const noexcept {
  // FNV-1a over the id values.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (TokenId id : ids) {
    h ^= static_cast<std::uint64_t>(id);
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

std::optional<Vector> PredictionCache::find(const TokenIds& ids) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(ids);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void PredictionCache::insert(const TokenIds& ids, Vector probabilities) {
  std::unique_lock lock(mutex_);
  entries_.insert_or_assign(ids, std::move(probabilities));
}

std::size_t PredictionCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void PredictionCache::clear() {
  std::unique_lock lock(mutex_);
  entries_.clear();
}

Matrix predict(const Model& model, std::span<const TokenIds> batch,
               PredictionCache* cache, PredictStats* stats) {
  const ModelInfo& info = model.info();
  if (batch.empty()) throw InvalidInputError("empty prediction batch");
  for (const auto& ids : batch) {
    if (static_cast<int>(ids.size()) > info.max_length) {
      throw TruncationError("sequence of " + std::to_string(ids.size()) +
                            " tokens exceeds max_length " +
                            std::to_string(info.max_length));
    }
  }

  const int num_labels = info.num_labels();
  Matrix out(static_cast<Eigen::Index>(batch.size()), num_labels);

  // Unique cache misses in first-seen order, and which rows they fill.
  std::vector<const TokenIds*> misses;
  std::unordered_map<const TokenIds*, std::vector<Eigen::Index>> miss_rows;
  std::unordered_map<TokenIds, const TokenIds*, TokenIdsHash> seen;
  for (std::size_t row = 0; row < batch.size(); ++row) {
    const TokenIds& ids = batch[row];
    if (cache) {
      if (auto hit = cache->find(ids)) {
        out.row(static_cast<Eigen::Index>(row)) = hit->transpose();
        continue;
      }
    }
    auto [it, inserted] = seen.try_emplace(ids, &ids);
    if (inserted) misses.push_back(&ids);
    miss_rows[it->second].push_back(static_cast<Eigen::Index>(row));
  }

  const std::size_t chunk = static_cast<std::size_t>(info.max_batch_size);
  for (std::size_t begin = 0; begin < misses.size(); begin += chunk) {
    const std::size_t end = std::min(misses.size(), begin + chunk);
    std::vector<TokenIds> sub;
    sub.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) sub.push_back(*misses[i]);
    const Matrix probs = model.predict_uncached(sub);
    if (probs.rows() != static_cast<Eigen::Index>(sub.size()) ||
        probs.cols() != num_labels) {
      throw ProtocolError("model returned a " + std::to_string(probs.rows()) +
                          "x" + std::to_string(probs.cols()) +
                          " probability matrix for " +
                          std::to_string(sub.size()) + " sequences and " +
                          std::to_string(num_labels) + " labels");
    }
    for (Eigen::Index r = 0; r < probs.rows(); ++r) {
      if (!probs.row(r).allFinite() ||
          std::abs(probs.row(r).sum() - 1.0) > 1e-6) {
        throw ProtocolError("probability row does not sum to 1");
      }
      const TokenIds* key = misses[begin + static_cast<std::size_t>(r)];
      for (Eigen::Index row : miss_rows[key]) out.row(row) = probs.row(r);
      if (cache) cache->insert(*key, probs.row(r).transpose());
    }
  }

  if (stats) {
    stats->requested += static_cast<long>(batch.size());
    stats->evaluated += static_cast<long>(misses.size());
  }
  return out;
}

Scorer::Scorer(ModelHandle model, std::shared_ptr<PredictionCache> cache,
               RemovalStrategy removal)
    : model_(std::move(model)),
      cache_(cache ? std::move(cache) : std::make_shared<PredictionCache>()),
      removal_(removal) {
  if (!model_) throw ConfigError("null model handle");
  if (removal_ == RemovalStrategy::kMask && !model_->info().mask_token_id) {
    throw ConfigError("mask removal requires a model with a mask token");
  }
}

Scorer::Scorer(const Scorer& other)
    : model_(other.model_), cache_(other.cache_), removal_(other.removal_) {}

Matrix Scorer::predict(std::span<const TokenIds> batch) const {
  PredictStats stats;
  Matrix out = xaibench::predict(*model_, batch, cache_.get(), &stats);
  requested_ += stats.requested;
  evaluated_ += stats.evaluated;
  return out;
}

Vector Scorer::target_probabilities(const TokenizedInput& x,
                                    std::span<const KeepMask> keeps,
                                    int target) const {
  if (target < 0 || target >= info().num_labels()) {
    throw ConfigError("target " + std::to_string(target) + " out of range");
  }
  if (keeps.empty()) return Vector(0);
  std::vector<TokenIds> batch;
  batch.reserve(keeps.size());
  for (const KeepMask& keep : keeps) {
    batch.push_back(apply_removal(x, keep, removal_, info().mask_token_id));
  }
  return predict(batch).col(target);
}

double Scorer::target_probability(const TokenizedInput& x,
                                  const KeepMask& keep, int target) const {
  return target_probabilities(x, std::span<const KeepMask>(&keep, 1),
                              target)(0);
}

double Scorer::full_probability(const TokenizedInput& x, int target) const {
  return target_probability(x, KeepMask(x.content_indices.size(), true),
                            target);
}

}  // namespace xaibench
