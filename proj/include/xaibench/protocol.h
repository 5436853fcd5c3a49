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

// JSON bodies of the model-inference wire protocol.
//
//   GET  /info       -> {model_id, labels, capabilities, pad_token_id,
//                        mask_token_id, special_token_ids, max_length,
//                        max_batch_size}
//   POST /tokenize   {texts:[str]} | {words:[[str]]}
//                    -> [{token_ids, tokens, content_indices, word_ids?}]
//   POST /predict    {batch:[[int]]} -> {probabilities:[[float]]}
//   POST /gradients  {input_ids, baseline_ids, target, alphas}
//                    -> {grads:[[[float]]], input_embeddings:[[float]],
//                        baseline_embeddings:[[float]]}
//
// Decoders throw ProtocolError on any schema violation.

#ifndef XAIBENCH_PROTOCOL_H_
#define XAIBENCH_PROTOCOL_H_

#include <span>
#include <vector>

#include "json.hpp"
#include "xaibench/common.h"
#include "xaibench/model.h"

namespace xaibench::protocol {

using Json = nlohmann::json;

inline constexpr int kDefaultMaxBatch = 32;

Json encode_info(const ModelInfo& info);
ModelInfo decode_info(const Json& body);

// All inputs must be of one kind (texts or word sequences).
Json encode_tokenize_request(std::span<const TextInput> inputs);
std::vector<TextInput> decode_tokenize_request(const Json& body);
Json encode_tokenize_response(std::span<const TokenizedInput> tokenized);
std::vector<TokenizedInput> decode_tokenize_response(const Json& body);

Json encode_predict_request(std::span<const TokenIds> batch);
std::vector<TokenIds> decode_predict_request(const Json& body);
Json encode_predict_response(const Matrix& probabilities);
Matrix decode_predict_response(const Json& body);

struct GradientRequest {
  TokenIds input_ids;
  TokenIds baseline_ids;
  int target = 0;
  std::vector<double> alphas;
};

Json encode_gradients_request(const GradientRequest& request);
GradientRequest decode_gradients_request(const Json& body);
Json encode_gradients_response(const GradientBundle& bundle);
// The response carries no alphas or target; they are copied from `request`.
GradientBundle decode_gradients_response(const Json& body,
                                         const GradientRequest& request);

Json encode_matrix(const Matrix& m);
Matrix decode_matrix(const Json& rows);

}  // namespace xaibench::protocol

#endif  // XAIBENCH_PROTOCOL_H_
