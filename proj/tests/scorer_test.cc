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


#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "test_support.h"
#include "xaibench/scorer.h"

namespace xaibench {
namespace {

using testing::WrappedModel;

std::shared_ptr<WrappedModel> wrapped(int max_batch = 32) {
  auto w = std::make_shared<WrappedModel>(
      testing::toy_model(default_sentiment_lexicon()));
  w->mutable_info().max_batch_size = max_batch;
  return w;
}

std::vector<TokenIds> random_batch(std::mt19937_64& gen, const Model& model,
                                   int size) {
  static const std::vector<std::string> vocab = {"great", "bad", "movie",
                                                 "fun", "zzz", "not"};
  std::vector<TokenIds> batch;
  for (int i = 0; i < size; ++i) {
    std::vector<std::string> words;
    const int n = 1 + static_cast<int>(gen() % 5);
    for (int k = 0; k < n; ++k) words.push_back(vocab[gen() % vocab.size()]);
    batch.push_back(tokenize_one(model, words).token_ids);
  }
  return batch;
}

TEST(Predict, RowsSumToOne) {
  auto model = wrapped();
  std::mt19937_64 gen(1);
  const Matrix p = predict(*model, random_batch(gen, *model, 50), nullptr);
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    EXPECT_NEAR(p.row(r).sum(), 1.0, 1e-12);
  }
}

TEST(Predict, DuplicatesEvaluatedOnce) {
  auto model = wrapped();
  const TokenIds ids = tokenize_one(*model, std::string("great movie")).token_ids;
  PredictionCache cache;
  PredictStats stats;
  const Matrix p =
      predict(*model, std::vector<TokenIds>{ids, ids, ids}, &cache, &stats);
  EXPECT_EQ(model->sequences.load(), 1);
  EXPECT_EQ(stats.requested, 3);
  EXPECT_EQ(stats.evaluated, 1);
  EXPECT_TRUE(p.row(0) == p.row(1));
  EXPECT_TRUE(p.row(1) == p.row(2));

  // Duplicates are collapsed even without a cache.
  PredictStats no_cache;
  predict(*model, std::vector<TokenIds>{ids, ids}, nullptr, &no_cache);
  EXPECT_EQ(no_cache.evaluated, 1);
}

TEST(Predict, CacheIsTransparent) {
  auto model = wrapped();
  std::mt19937_64 gen(2);
  const auto batch = random_batch(gen, *model, 64);
  PredictionCache cache;
  const Matrix first = predict(*model, batch, &cache);
  const long calls = model->sequences.load();
  const Matrix second = predict(*model, batch, &cache);
  const Matrix uncached = predict(*model, batch, nullptr);
  EXPECT_TRUE(first == second);
  EXPECT_TRUE(first == uncached);
  EXPECT_EQ(model->sequences.load(), calls + static_cast<long>(cache.size()));
  for (const auto& ids : batch) EXPECT_TRUE(cache.find(ids).has_value());
}

TEST(Predict, ChunksByAdvertisedBatchLimit) {
  auto model = wrapped(4);
  std::vector<TokenIds> batch;
  for (int i = 0; i < 10; ++i) batch.push_back(TokenIds(i + 1, 4));
  predict(*model, batch, nullptr);
  EXPECT_LE(model->largest_batch.load(), 4);
  EXPECT_EQ(model->predict_calls.load(), 3);
}

TEST(Predict, RejectsBadRows) {
  auto model = wrapped();
  model->corrupt_rows = true;
  const TokenIds ids = tokenize_one(*model, std::string("great")).token_ids;
  EXPECT_THROW(predict(*model, std::vector<TokenIds>{ids}, nullptr),
               ProtocolError);
  model->corrupt_rows = false;
  model->drop_row = true;
  EXPECT_THROW(predict(*model, std::vector<TokenIds>{ids}, nullptr),
               ProtocolError);
}

TEST(Predict, RejectsOverlongAndEmptyBatch) {
  auto model = wrapped();
  model->mutable_info().max_length = 3;
  EXPECT_THROW(predict(*model, std::vector<TokenIds>{TokenIds(4, 5)}, nullptr),
               TruncationError);
  EXPECT_THROW(predict(*model, std::vector<TokenIds>{}, nullptr),
               InvalidInputError);
}

TEST(Predict, ConcurrentWorkersShareOneCache) {
  auto model = wrapped();
  auto cache = std::make_shared<PredictionCache>();
  std::mt19937_64 gen(5);
  const auto batch = random_batch(gen, *model, 200);
  const Matrix reference = predict(*model, batch, nullptr);
  std::vector<Matrix> results(8);
  {
    std::vector<std::jthread> pool;
    for (int t = 0; t < 8; ++t) {
      pool.emplace_back([&, t] {
        Scorer scorer(model, cache);
        results[t] = scorer.predict(batch);
      });
    }
  }
  for (const auto& r : results) EXPECT_TRUE(r == reference);
}

TEST(Scorer, CopiesShareCacheNotCounters) {
  auto model = wrapped();
  Scorer a(model);
  const TokenizedInput x = tokenize_one(*model, std::string("great movie"));
  a.full_probability(x, 1);
  Scorer b(a);
  EXPECT_EQ(b.cache(), a.cache());
  EXPECT_EQ(b.requested(), 0);
  b.full_probability(x, 1);
  EXPECT_EQ(b.requested(), 1);
  EXPECT_EQ(b.evaluated(), 0);
  EXPECT_EQ(a.requested(), 1);
}

TEST(Scorer, TargetProbabilitiesUnderRemoval) {
  Scorer scorer(testing::toy_model());
  const TokenizedInput x =
      tokenize_one(scorer.model(), std::string("great movie"));
  const std::vector<KeepMask> keeps = {{true, true}, {false, true}, {false, false}};
  const Vector v = scorer.target_probabilities(x, keeps, 1);
  EXPECT_DOUBLE_EQ(v(0), testing::sigmoid(2.0));
  EXPECT_DOUBLE_EQ(v(1), 0.5);
  EXPECT_DOUBLE_EQ(v(2), 0.5);

  Scorer masked(testing::toy_model(), nullptr, RemovalStrategy::kMask);
  EXPECT_DOUBLE_EQ(masked.target_probability(x, {false, true}, 1), 0.5);
}

TEST(Scorer, MaskWithoutMaskIdIsConfigError) {
  auto model = wrapped();
  model->mutable_info().mask_token_id.reset();
  EXPECT_THROW(Scorer(model, nullptr, RemovalStrategy::kMask), ConfigError);
}

}  // namespace
}  // namespace xaibench
