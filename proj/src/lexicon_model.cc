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

#include "xaibench/lexicon_model.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "xaibench/random.h"

namespace xaibench {
namespace {

constexpr TokenId kFirstVocabId = 4;
constexpr TokenId kUnknownBase = TokenId{1} << 40;
constexpr std::uint64_t kUnknownBuckets = std::uint64_t{1} << 32;
constexpr std::size_t kMaxWholeWord = 6;
constexpr std::size_t kPieceLength = 4;

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Byte offsets of UTF-8 code point starts, plus the end offset.
std::vector<std::size_t> code_point_offsets(std::string_view word) {
  std::vector<std::size_t> offsets;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if ((static_cast<unsigned char>(word[i]) & 0xC0) != 0x80) {
      offsets.push_back(i);
    }
  }
  offsets.push_back(word.size());
  return offsets;
}

std::vector<std::string> split_whitespace(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  std::string word;
  while (in >> word) words.push_back(word);
  return words;
}

}  // namespace

std::vector<std::string> lexicon_word_pieces(std::string_view word) {
  const auto offsets = code_point_offsets(word);
  const std::size_t length = offsets.size() - 1;
  if (length <= kMaxWholeWord) return {std::string(word)};
  std::vector<std::string> pieces;
  for (std::size_t start = 0; start < length; start += kPieceLength) {
    const std::size_t stop = std::min(length, start + kPieceLength);
    std::string piece(word.substr(offsets[start], offsets[stop] - offsets[start]));
    pieces.push_back(start == 0 ? piece : "##" + piece);
  }
  return pieces;
}

LexiconModelConfig default_sentiment_lexicon() {
  LexiconModelConfig config;
  config.weights = {
      {"great", 2.0},     {"good", 1.0},      {"excellent", 2.5},
      {"love", 1.5},      {"stunning", 2.0},  {"fun", 1.0},
      {"enjoyed", 1.5},   {"best", 1.5},      {"terrible", -2.0},
      {"bad", -1.0},      {"boring", -1.5},   {"awful", -2.5},
      {"hate", -2.0},     {"worst", -1.5},    {"nap", -0.5},
      {"dull", -1.0},     {"not", -0.5},      {"movie", 0.0},
  };
  return config;
}

LexiconModelConfig load_lexicon_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon file " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("lexicon file " + path + ": " + e.what());
  }
  LexiconModelConfig config;
  try {
    for (const auto& [word, weight] : doc.at("weights").items()) {
      config.weights[word] = weight.get<double>();
    }
    config.intercept = doc.value("intercept", 0.0);
    config.subword = doc.value("subword", false);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("lexicon file " + path + ": " + e.what());
  }
  return config;
}

LexiconModel::LexiconModel(LexiconModelConfig config)
    : config_(std::move(config)) {
  if (config_.weights.empty()) {
    throw ConfigError("lexicon weight table must not be empty");
  }
  if (config_.embedding_dim < 1) {
    throw ConfigError("embedding_dim must be positive");
  }
  for (const auto& [word, weight] : config_.weights) {
    if (!std::isfinite(weight)) {
      throw ConfigError("non-finite weight for '" + word + "'");
    }
    ids_.emplace(word, kFirstVocabId + static_cast<TokenId>(vocabulary_.size()));
    vocabulary_.push_back(word);
    scale_ = std::max(scale_, std::abs(weight));
  }
  readout_ = Vector::Zero(config_.embedding_dim);
  readout_(0) = scale_;

  info_.model_id = config_.subword ? "builtin:lexicon-subword" : "builtin:lexicon";
  info_.labels = {"negative", "positive"};
  info_.capabilities = {Capability::kPredict, Capability::kEmbeddingGradients};
  info_.pad_token_id = kPadId;
  info_.mask_token_id = kMaskId;
  if (config_.subword) info_.special_token_ids = {kClsId, kSepId};
  info_.max_length = config_.max_length;
  info_.max_batch_size = config_.max_batch_size;
  info_.validate();
}

TokenId LexiconModel::id_of(std::string_view piece) const {
  if (auto it = ids_.find(piece); it != ids_.end()) return it->second;
  return kUnknownBase + static_cast<TokenId>(fnv1a(piece) % kUnknownBuckets);
}

double LexiconModel::weight_of(TokenId id) const {
  const TokenId index = id - kFirstVocabId;
  if (index >= 0 && index < static_cast<TokenId>(vocabulary_.size())) {
    return config_.weights.at(vocabulary_[index]);
  }
  return 0.0;
}

std::vector<TokenizedInput> LexiconModel::tokenize_unchecked(
    std::span<const TextInput> inputs) const {
  std::vector<TokenizedInput> out;
  out.reserve(inputs.size());
  for (const TextInput& input : inputs) {
    const std::vector<std::string> words =
        std::holds_alternative<std::string>(input)
            ? split_whitespace(std::get<std::string>(input))
            : std::get<std::vector<std::string>>(input);
    TokenizedInput tokenized;
    tokenized.word_ids.emplace();
    auto push_special = [&](TokenId id, const char* text) {
      tokenized.token_ids.push_back(id);
      tokenized.token_strings.emplace_back(text);
      tokenized.word_ids->push_back(kNoWord);
    };
    if (config_.subword) push_special(kClsId, "[CLS]");
    for (std::size_t w = 0; w < words.size(); ++w) {
      const std::vector<std::string> pieces =
          config_.subword ? lexicon_word_pieces(words[w])
                          : std::vector<std::string>{words[w]};
      for (const std::string& piece : pieces) {
        tokenized.content_indices.push_back(tokenized.num_tokens());
        tokenized.token_ids.push_back(id_of(piece));
        tokenized.token_strings.push_back(piece);
        tokenized.word_ids->push_back(static_cast<int>(w));
      }
    }
    if (config_.subword) push_special(kSepId, "[SEP]");
    out.push_back(std::move(tokenized));
  }
  return out;
}

Matrix LexiconModel::predict_uncached(std::span<const TokenIds> batch) const {
  Matrix out(static_cast<Eigen::Index>(batch.size()), 2);
  for (std::size_t row = 0; row < batch.size(); ++row) {
    double logit = config_.intercept;
    for (TokenId id : batch[row]) logit += weight_of(id);
    const double positive = logistic(logit);
    out(static_cast<Eigen::Index>(row), 0) = 1.0 - positive;
    out(static_cast<Eigen::Index>(row), 1) = positive;
  }
  return out;
}

Matrix LexiconModel::embed(const TokenIds& ids) const {
  const int dim = config_.embedding_dim;
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(ids.size()), dim);
  for (std::size_t row = 0; row < ids.size(); ++row) {
    const TokenId id = ids[row];
    if (id == kPadId || id == kMaskId) continue;
    if (scale_ > 0) out(static_cast<Eigen::Index>(row), 0) = weight_of(id) / scale_;
    Rng noise(mix_seed(0x5eedULL, static_cast<std::uint64_t>(id)));
    for (int d = 1; d < dim; ++d) {
      out(static_cast<Eigen::Index>(row), d) = noise.uniform() - 0.5;
    }
  }
  return out;
}

double LexiconModel::logit_at(const Matrix& embeddings) const {
  return config_.intercept + (embeddings * readout_).sum();
}

double LexiconModel::probability_at(const Matrix& embeddings,
                                    int target) const {
  const double positive = logistic(logit_at(embeddings));
  return target == 1 ? positive : 1.0 - positive;
}

Matrix LexiconModel::gradient_at(const Matrix& embeddings, int target) const {
  const double positive = logistic(logit_at(embeddings));
  const double slope = positive * (1.0 - positive) * (target == 1 ? 1.0 : -1.0);
  return Vector::Ones(embeddings.rows()) * (slope * readout_).transpose();
}

GradientBundle LexiconModel::embedding_gradients_unchecked(
    const TokenIds& input_ids, const TokenIds& baseline_ids, int target,
    std::span<const double> alphas) const {
  GradientBundle bundle;
  bundle.target = target;
  bundle.alphas.assign(alphas.begin(), alphas.end());
  bundle.input_embeddings = embed(input_ids);
  bundle.baseline_embeddings = embed(baseline_ids);
  const Matrix delta = bundle.input_embeddings - bundle.baseline_embeddings;
  for (double alpha : alphas) {
    bundle.grads.push_back(
        gradient_at(bundle.baseline_embeddings + alpha * delta, target));
  }
  return bundle;
}

ModelHandle make_builtin_lexicon(LexiconModelConfig config) {
  return std::make_shared<const LexiconModel>(std::move(config));
}

}  // namespace xaibench
