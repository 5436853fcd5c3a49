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

// The model contract: every classifier, local or remote, is reached through
// tokenization, batched probability scoring and (optionally) gradients of a
// class probability with respect to the input embeddings.

#ifndef XAIBENCH_MODEL_H_
#define XAIBENCH_MODEL_H_

#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xaibench/common.h"

namespace xaibench {

enum class Capability { kPredict, kEmbeddingGradients };

std::string_view capability_name(Capability capability);
std::optional<Capability> parse_capability(std::string_view name);

struct ModelInfo {
  std::string model_id;
  std::vector<std::string> labels;
  std::set<Capability> capabilities;
  std::optional<TokenId> pad_token_id;
  std::optional<TokenId> mask_token_id;
  std::set<TokenId> special_token_ids;
  int max_length = 512;
  int max_batch_size = 32;

  int num_labels() const { return static_cast<int>(labels.size()); }
  bool has(Capability capability) const {
    return capabilities.contains(capability);
  }
  // Index of a label by name, or nullopt.
  std::optional<int> label_index(std::string_view name) const;

  // Throws ConfigError when the invariants do not hold.
  void validate() const;
};

inline constexpr int kNoWord = -1;

struct TokenizedInput {
  TokenIds token_ids;
  std::vector<std::string> token_strings;
  // Strictly increasing positions of the non-special tokens. Every
  // attribution and rationale vector is indexed by position in this list.
  std::vector<int> content_indices;
  // Source word per token, kNoWord for special tokens. Only present when the
  // input was given as a word sequence.
  std::optional<std::vector<int>> word_ids;
  // Set when content tokens were dropped to fit max_length.
  bool truncated = false;

  int num_tokens() const { return static_cast<int>(token_ids.size()); }
  int num_content() const { return static_cast<int>(content_indices.size()); }
  std::vector<std::string> content_strings() const;

  // Throws DataError on shape violations.
  void validate(int max_length) const;
};

// Gradients of the target-class probability with respect to the embedding
// matrix evaluated at baseline + alpha * (input - baseline), one slice per
// alpha. Rows are tokens, columns are embedding dimensions.
struct GradientBundle {
  std::vector<double> alphas;
  std::vector<Matrix> grads;
  Matrix input_embeddings;
  Matrix baseline_embeddings;
  int target = 0;

  // Throws NumericError naming the first alpha with a non-finite value and
  // ProtocolError when shapes disagree.
  void validate(int num_tokens) const;
};

// A raw text or a pre-split word sequence.
using TextInput = std::variant<std::string, std::vector<std::string>>;

class Model {
 public:
  virtual ~Model() = default;

  virtual const ModelInfo& info() const = 0;

  // Tokenizes without length checks; see tokenize() for the checked entry.
  virtual std::vector<TokenizedInput> tokenize_unchecked(
      std::span<const TextInput> inputs) const = 0;

  // One probability row per sequence, uncached.
  virtual Matrix predict_uncached(std::span<const TokenIds> batch) const = 0;

  virtual GradientBundle embedding_gradients_unchecked(
      const TokenIds& input_ids, const TokenIds& baseline_ids, int target,
      std::span<const double> alphas) const;
};

// Model handles are immutable and shared between workers.
using ModelHandle = std::shared_ptr<const Model>;

struct TokenizeOptions {
  // Drop trailing content tokens instead of failing on overlong inputs.
  bool truncate = false;
  // Optional instance ids used in error messages, parallel to the inputs.
  std::vector<std::string> instance_ids;
};

std::vector<TokenizedInput> tokenize(const Model& model,
                                     std::span<const TextInput> inputs,
                                     const TokenizeOptions& options = {});
TokenizedInput tokenize_one(const Model& model, const TextInput& input,
                            const TokenizeOptions& options = {});

GradientBundle embedding_gradients(const Model& model,
                                   const TokenIds& input_ids,
                                   const TokenIds& baseline_ids, int target,
                                   std::span<const double> alphas);

enum class RemovalStrategy { kDelete, kMask };

std::string_view removal_name(RemovalStrategy strategy);
RemovalStrategy parse_removal(std::string_view name);

// Keep mask over content tokens: keep[i] refers to content_indices[i].
using KeepMask = std::vector<bool>;

// Builds the token sequence with the dropped content tokens deleted (or
// replaced by the mask token). Special tokens and token order are preserved.
TokenIds apply_removal(const TokenizedInput& tokenized, const KeepMask& keep,
                       RemovalStrategy strategy,
                       std::optional<TokenId> mask_token_id);

// Same-length baseline: content tokens replaced by the mask token, or the pad
// token when the model has no mask token. Special tokens are kept.
TokenIds default_baseline_ids(const TokenizedInput& tokenized,
                              const ModelInfo& info);

// (k - 1/2) / steps for k = 1..steps.
std::vector<double> midpoint_alphas(int steps);

}  // namespace xaibench

#endif  // XAIBENCH_MODEL_H_
