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

// Deterministic two-class model: p(positive) = logistic(intercept + sum of
// per-token weights). It is realized as an embedding-bag linear classifier so
// that gradients with respect to token embeddings are exact.
//
// Embedding of a token with weight w: w / s on the first coordinate (s is the
// largest |weight| in the table) plus a fixed pseudo-random component on the
// remaining coordinates. The readout is s along the first coordinate, so the
// logit of a bag of embeddings reproduces the weight sum. Mask and pad tokens
// embed to zero.

#ifndef XAIBENCH_LEXICON_MODEL_H_
#define XAIBENCH_LEXICON_MODEL_H_

#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "xaibench/common.h"
#include "xaibench/model.h"

namespace xaibench {

struct LexiconModelConfig {
  std::map<std::string, double> weights;
  double intercept = 0.0;
  int embedding_dim = 8;
  // Wraps inputs in [CLS] ... [SEP] and splits words longer than six
  // characters into four-character pieces ("##" marks continuations).
  bool subword = false;
  int max_length = 512;
  int max_batch_size = 32;
};

// Small sentiment lexicon used by the CLI's builtin models.
LexiconModelConfig default_sentiment_lexicon();

// Reads {"weights": {word: real}, "intercept": real, "subword": bool}.
LexiconModelConfig load_lexicon_config(const std::string& path);

// Splits one word the way the subword variant does.
std::vector<std::string> lexicon_word_pieces(std::string_view word);

inline double logistic(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

class LexiconModel final : public Model {
 public:
  static constexpr TokenId kPadId = 0;
  static constexpr TokenId kMaskId = 1;
  static constexpr TokenId kClsId = 2;
  static constexpr TokenId kSepId = 3;

  explicit LexiconModel(LexiconModelConfig config);

  const ModelInfo& info() const override { return info_; }
  std::vector<TokenizedInput> tokenize_unchecked(
      std::span<const TextInput> inputs) const override;
  Matrix predict_uncached(std::span<const TokenIds> batch) const override;
  GradientBundle embedding_gradients_unchecked(
      const TokenIds& input_ids, const TokenIds& baseline_ids, int target,
      std::span<const double> alphas) const override;

  const LexiconModelConfig& config() const { return config_; }
  double weight_of(TokenId id) const;
  TokenId id_of(std::string_view piece) const;

  // The embedding-bag realization.
  Matrix embed(const TokenIds& ids) const;
  const Vector& readout() const { return readout_; }
  double logit_at(const Matrix& embeddings) const;
  double probability_at(const Matrix& embeddings, int target) const;
  Matrix gradient_at(const Matrix& embeddings, int target) const;

 private:
  LexiconModelConfig config_;
  ModelInfo info_;
  std::vector<std::string> vocabulary_;
  std::map<std::string, TokenId, std::less<>> ids_;
  double scale_ = 0.0;
  Vector readout_;
};

ModelHandle make_builtin_lexicon(LexiconModelConfig config);

}  // namespace xaibench

#endif  // XAIBENCH_LEXICON_MODEL_H_
