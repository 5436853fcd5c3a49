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

#ifndef XAIBENCH_SCORER_H_
#define XAIBENCH_SCORER_H_

#include <atomic>
#include <cstddef>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <unordered_map>

#include "xaibench/common.h"
#include "xaibench/model.h"

namespace xaibench {

struct TokenIdsHash {
  std::size_t operator()(const TokenIds& ids) const noexcept;
};

// Thread-safe map from exact token-id sequence to the full probability row.
// Concurrent writers of one key store identical values; the last one wins.
class PredictionCache {
 public:
  std::optional<Vector> find(const TokenIds& ids) const;
  void insert(const TokenIds& ids, Vector probabilities);
  std::size_t size() const;
  void clear();

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<TokenIds, Vector, TokenIdsHash> entries_;
};

struct PredictStats {
  // Sequences asked for, including cache hits and in-batch duplicates.
  long requested = 0;
  // Sequences actually sent to the model.
  long evaluated = 0;
};

// Probability matrix (one row per sequence). The cache, when given, is
// consulted first and filled afterwards; duplicates inside the batch are
// evaluated once. Model calls are chunked by info().max_batch_size.
Matrix predict(const Model& model, std::span<const TokenIds> batch,
               PredictionCache* cache, PredictStats* stats = nullptr);

// Everything an explainer or metric needs to query v(S) = f(x with only S
// kept)_target: the model, a shared cache, the removal strategy and
// evaluation counters. Copies share the cache but not the counters.
class Scorer {
 public:
  explicit Scorer(ModelHandle model,
                  std::shared_ptr<PredictionCache> cache = nullptr,
                  RemovalStrategy removal = RemovalStrategy::kDelete);

  Scorer(const Scorer& other);
  Scorer& operator=(const Scorer&) = delete;

  const Model& model() const { return *model_; }
  const ModelHandle& handle() const { return model_; }
  const ModelInfo& info() const { return model_->info(); }
  RemovalStrategy removal() const { return removal_; }
  const std::shared_ptr<PredictionCache>& cache() const { return cache_; }

  Matrix predict(std::span<const TokenIds> batch) const;

  // Probability of `target` for each keep mask applied to `x`.
  Vector target_probabilities(const TokenizedInput& x,
                              std::span<const KeepMask> keeps,
                              int target) const;
  double target_probability(const TokenizedInput& x, const KeepMask& keep,
                            int target) const;
  // Probability of `target` on the unperturbed input.
  double full_probability(const TokenizedInput& x, int target) const;

  long requested() const { return requested_.load(); }
  long evaluated() const { return evaluated_.load(); }

 private:
  ModelHandle model_;
  std::shared_ptr<PredictionCache> cache_;
  RemovalStrategy removal_;
  mutable std::atomic<long> requested_{0};
  mutable std::atomic<long> evaluated_{0};
};

}  // namespace xaibench

#endif  // XAIBENCH_SCORER_H_
