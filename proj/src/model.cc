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

#include "xaibench/model.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace xaibench {
namespace {

bool is_blank(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

void check_not_empty(const TextInput& input, const std::string& id) {
  bool empty = true;
  if (const auto* text = std::get_if<std::string>(&input)) {
    empty = is_blank(*text);
  } else {
    const auto& words = std::get<std::vector<std::string>>(input);
    for (const auto& word : words) {
      if (is_blank(word)) {
        throw InvalidInputError("instance " + id + ": blank word");
      }
    }
    empty = words.empty();
  }
  if (empty) throw InvalidInputError("instance " + id + ": empty input");
}

// Drops trailing content tokens until the sequence fits.
void truncate_to(TokenizedInput& tokenized, int max_length,
                 const std::string& id) {
  const int excess = tokenized.num_tokens() - max_length;
  if (excess <= 0) return;
  if (excess > tokenized.num_content()) {
    throw TruncationError("instance " + id +
                          ": special tokens alone exceed max_length " +
                          std::to_string(max_length));
  }
  std::vector<bool> drop(tokenized.token_ids.size(), false);
  for (int i = 0; i < excess; ++i) {
    drop[tokenized.content_indices[tokenized.num_content() - 1 - i]] = true;
  }
  TokenizedInput out;
  out.truncated = true;
  if (tokenized.word_ids) out.word_ids.emplace();
  for (std::size_t pos = 0; pos < tokenized.token_ids.size(); ++pos) {
    if (drop[pos]) continue;
    const bool content = std::binary_search(tokenized.content_indices.begin(),
                                            tokenized.content_indices.end(),
                                            static_cast<int>(pos));
    if (content) out.content_indices.push_back(out.num_tokens());
    out.token_ids.push_back(tokenized.token_ids[pos]);
    out.token_strings.push_back(tokenized.token_strings[pos]);
    if (out.word_ids) out.word_ids->push_back((*tokenized.word_ids)[pos]);
  }
  tokenized = std::move(out);
}

}  // namespace

std::string_view capability_name(Capability capability) {
  switch (capability) {
    case Capability::kPredict:
      return "predict";
    case Capability::kEmbeddingGradients:
      return "embedding_gradients";
  }
  return "";
}

std::optional<Capability> parse_capability(std::string_view name) {
  if (name == "predict") return Capability::kPredict;
  if (name == "embedding_gradients") return Capability::kEmbeddingGradients;
  return std::nullopt;
}

std::optional<int> ModelInfo::label_index(std::string_view name) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

void ModelInfo::validate() const {
  if (labels.size() < 2) {
    throw ConfigError("model " + model_id + " must expose at least 2 labels");
  }
  if (max_length <= 0 || max_batch_size <= 0) {
    throw ConfigError("model " + model_id +
                      ": max_length and max_batch_size must be positive");
  }
  if (has(Capability::kEmbeddingGradients) && !pad_token_id &&
      !mask_token_id) {
    throw ConfigError("model " + model_id +
                      ": gradient capability requires a pad or mask token");
  }
}

std::vector<std::string> TokenizedInput::content_strings() const {
  std::vector<std::string> out;
  out.reserve(content_indices.size());
  for (int pos : content_indices) out.push_back(token_strings[pos]);
  return out;
}

void TokenizedInput::validate(int max_length) const {
  if (token_ids.size() != token_strings.size()) {
    throw DataError("token ids and token strings differ in length");
  }
  if (num_tokens() > max_length) {
    throw TruncationError("sequence of " + std::to_string(num_tokens()) +
                          " tokens exceeds max_length " +
                          std::to_string(max_length));
  }
  for (std::size_t i = 0; i < content_indices.size(); ++i) {
    const int pos = content_indices[i];
    if (pos < 0 || pos >= num_tokens() ||
        (i > 0 && pos <= content_indices[i - 1])) {
      throw DataError("content indices must be strictly increasing in range");
    }
  }
  if (word_ids) {
    if (word_ids->size() != token_ids.size()) {
      throw DataError("word_ids length differs from token count");
    }
    int last = kNoWord;
    for (int pos : content_indices) {
      const int word = (*word_ids)[pos];
      if (word < last) throw DataError("word_ids must be non-decreasing");
      last = word;
    }
  }
}

void GradientBundle::validate(int num_tokens) const {
  if (grads.size() != alphas.size()) {
    throw ProtocolError("gradient slices do not match the alpha count");
  }
  const Eigen::Index dim = input_embeddings.cols();
  if (input_embeddings.rows() != num_tokens ||
      baseline_embeddings.rows() != num_tokens ||
      baseline_embeddings.cols() != dim) {
    throw ProtocolError("embedding shapes disagree with the token count");
  }
  for (std::size_t a = 0; a < grads.size(); ++a) {
    if (grads[a].rows() != num_tokens || grads[a].cols() != dim) {
      throw ProtocolError("gradient slice " + std::to_string(a) +
                          " has the wrong shape");
    }
    if (!grads[a].allFinite()) {
      throw NumericError("non-finite gradient at alpha index " +
                         std::to_string(a));
    }
  }
  if (!input_embeddings.allFinite() || !baseline_embeddings.allFinite()) {
    throw NumericError("non-finite embeddings");
  }
}

GradientBundle Model::embedding_gradients_unchecked(
    const TokenIds&, const TokenIds&, int, std::span<const double>) const {
  throw UnsupportedCapabilityError("model " + info().model_id +
                                   " does not provide embedding gradients");
}

std::vector<TokenizedInput> tokenize(const Model& model,
                                     std::span<const TextInput> inputs,
                                     const TokenizeOptions& options) {
  auto id_of = [&](std::size_t i) {
    return i < options.instance_ids.size() ? options.instance_ids[i]
                                           : std::to_string(i);
  };
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    check_not_empty(inputs[i], id_of(i));
  }
  std::vector<TokenizedInput> out = model.tokenize_unchecked(inputs);
  if (out.size() != inputs.size()) {
    throw ProtocolError("tokenizer returned " + std::to_string(out.size()) +
                        " results for " + std::to_string(inputs.size()) +
                        " inputs");
  }
  const int max_length = model.info().max_length;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].num_tokens() > max_length) {
      if (!options.truncate) {
        throw TruncationError("instance " + id_of(i) + ": " +
                              std::to_string(out[i].num_tokens()) +
                              " tokens exceed max_length " +
                              std::to_string(max_length));
      }
      truncate_to(out[i], max_length, id_of(i));
    }
    const bool words = std::holds_alternative<std::vector<std::string>>(
        inputs[i]);
    if (!words) out[i].word_ids.reset();
    if (words && !out[i].word_ids) {
      throw ProtocolError("instance " + id_of(i) +
                          ": word-sequence tokenization returned no word_ids");
    }
    out[i].validate(max_length);
  }
  return out;
}

TokenizedInput tokenize_one(const Model& model, const TextInput& input,
                            const TokenizeOptions& options) {
  auto out = tokenize(model, std::span<const TextInput>(&input, 1), options);
  return std::move(out.front());
}

GradientBundle embedding_gradients(const Model& model,
                                   const TokenIds& input_ids,
                                   const TokenIds& baseline_ids, int target,
                                   std::span<const double> alphas) {
  const ModelInfo& info = model.info();
  if (!info.has(Capability::kEmbeddingGradients)) {
    throw UnsupportedCapabilityError("model " + info.model_id +
                                     " does not provide embedding gradients");
  }
  if (baseline_ids.size() != input_ids.size()) {
    throw InvalidInputError("baseline length differs from input length");
  }
  if (target < 0 || target >= info.num_labels()) {
    throw ConfigError("target " + std::to_string(target) + " out of range");
  }
  if (alphas.empty()) throw ConfigError("at least one alpha is required");
  for (double alpha : alphas) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
      throw ConfigError("alphas must lie in (0, 1]");
    }
  }
  GradientBundle bundle = model.embedding_gradients_unchecked(
      input_ids, baseline_ids, target, alphas);
  bundle.validate(static_cast<int>(input_ids.size()));
  return bundle;
}

std::string_view removal_name(RemovalStrategy strategy) {
  return strategy == RemovalStrategy::kDelete ? "delete" : "mask";
}

RemovalStrategy parse_removal(std::string_view name) {
  if (name == "delete") return RemovalStrategy::kDelete;
  if (name == "mask") return RemovalStrategy::kMask;
  throw ConfigError("unknown removal strategy '" + std::string(name) + "'");
}

TokenIds apply_removal(const TokenizedInput& tokenized, const KeepMask& keep,
                       RemovalStrategy strategy,
                       std::optional<TokenId> mask_token_id) {
  if (keep.size() != tokenized.content_indices.size()) {
    throw InvalidInputError("keep mask length differs from content tokens");
  }
  if (strategy == RemovalStrategy::kMask && !mask_token_id) {
    throw ConfigError("mask removal requires a mask token id");
  }
  TokenIds out;
  out.reserve(tokenized.token_ids.size());
  std::size_t next_content = 0;
  for (std::size_t pos = 0; pos < tokenized.token_ids.size(); ++pos) {
    const bool content =
        next_content < tokenized.content_indices.size() &&
        tokenized.content_indices[next_content] == static_cast<int>(pos);
    if (!content) {
      out.push_back(tokenized.token_ids[pos]);
      continue;
    }
    if (keep[next_content]) {
      out.push_back(tokenized.token_ids[pos]);
    } else if (strategy == RemovalStrategy::kMask) {
      out.push_back(*mask_token_id);
    }
    ++next_content;
  }
  return out;
}

TokenIds default_baseline_ids(const TokenizedInput& tokenized,
                              const ModelInfo& info) {
  const std::optional<TokenId> fill =
      info.mask_token_id ? info.mask_token_id : info.pad_token_id;
  if (!fill) {
    throw ConfigError("model " + info.model_id +
                      " has neither a mask nor a pad token for baselines");
  }
  TokenIds out = tokenized.token_ids;
  for (int pos : tokenized.content_indices) out[pos] = *fill;
  return out;
}

std::vector<double> midpoint_alphas(int steps) {
  if (steps < 1) throw ConfigError("steps must be at least 1");
  std::vector<double> alphas(steps);
  for (int k = 0; k < steps; ++k) {
    alphas[k] = (k + 0.5) / steps;
  }
  return alphas;
}

}  // namespace xaibench
