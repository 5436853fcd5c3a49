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

#include "xaibench/protocol.h"

#include <string>

namespace xaibench::protocol {
namespace {

// Runs a decoder, converting library exceptions into ProtocolError.
template <typename Fn>
auto decoding(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw ProtocolError(std::string("malformed ") + what + ": " + e.what());
  }
}

Json optional_id(const std::optional<TokenId>& id) {
  return id ? Json(*id) : Json(nullptr);
}

std::optional<TokenId> decode_optional_id(const Json& body, const char* key) {
  if (!body.contains(key) || body.at(key).is_null()) return std::nullopt;
  return body.at(key).get<TokenId>();
}

}  // namespace

Json encode_matrix(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix decode_matrix(const Json& rows) {
  if (!rows.is_array()) throw ProtocolError("expected an array of rows");
  if (rows.empty()) return Matrix(0, 0);
  const std::size_t cols = rows.front().size();
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || rows[r].size() != cols) {
      throw ProtocolError("ragged matrix at row " + std::to_string(r));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c].get<double>();
    }
  }
  return m;
}

Json encode_info(const ModelInfo& info) {
  Json capabilities = Json::array();
  for (Capability c : info.capabilities) {
    capabilities.push_back(std::string(capability_name(c)));
  }
  return Json{{"model_id", info.model_id},
              {"labels", info.labels},
              {"capabilities", capabilities},
              {"pad_token_id", optional_id(info.pad_token_id)},
              {"mask_token_id", optional_id(info.mask_token_id)},
              {"special_token_ids", info.special_token_ids},
              {"max_length", info.max_length},
              {"max_batch_size", info.max_batch_size}};
}

ModelInfo decode_info(const Json& body) {
  ModelInfo info = decoding("/info response", [&] {
    ModelInfo out;
    out.model_id = body.at("model_id").get<std::string>();
    out.labels = body.at("labels").get<std::vector<std::string>>();
    for (const auto& name : body.at("capabilities")) {
      // Unknown capabilities are ignored so servers can advertise extras.
      if (auto c = parse_capability(name.get<std::string>())) {
        out.capabilities.insert(*c);
      }
    }
    out.pad_token_id = decode_optional_id(body, "pad_token_id");
    out.mask_token_id = decode_optional_id(body, "mask_token_id");
    out.special_token_ids =
        body.value("special_token_ids", std::set<TokenId>{});
    out.max_length = body.at("max_length").get<int>();
    out.max_batch_size = body.value("max_batch_size", kDefaultMaxBatch);
    return out;
  });
  try {
    info.validate();
  } catch (const ConfigError& e) {
    throw ProtocolError(e.what());
  }
  return info;
}

Json encode_tokenize_request(std::span<const TextInput> inputs) {
  if (inputs.empty()) return Json{{"texts", Json::array()}};
  const bool words = std::holds_alternative<std::vector<std::string>>(inputs[0]);
  Json items = Json::array();
  for (const TextInput& input : inputs) {
    if (std::holds_alternative<std::vector<std::string>>(input) != words) {
      throw InvalidInputError("tokenize request mixes texts and word lists");
    }
    std::visit([&](const auto& value) { items.push_back(value); }, input);
  }
  return Json{{words ? "words" : "texts", std::move(items)}};
}

std::vector<TextInput> decode_tokenize_request(const Json& body) {
  return decoding("/tokenize request", [&] {
    std::vector<TextInput> out;
    if (body.contains("texts")) {
      for (const auto& t : body.at("texts")) out.emplace_back(t.get<std::string>());
    } else {
      for (const auto& w : body.at("words")) {
        out.emplace_back(w.get<std::vector<std::string>>());
      }
    }
    return out;
  });
}

Json encode_tokenize_response(std::span<const TokenizedInput> tokenized) {
  Json out = Json::array();
  for (const TokenizedInput& t : tokenized) {
    Json item{{"token_ids", t.token_ids},
              {"tokens", t.token_strings},
              {"content_indices", t.content_indices}};
    if (t.word_ids) {
      Json ids = Json::array();
      for (int w : *t.word_ids) {
        ids.push_back(w == kNoWord ? Json(nullptr) : Json(w));
      }
      item["word_ids"] = std::move(ids);
    }
    out.push_back(std::move(item));
  }
  return out;
}

std::vector<TokenizedInput> decode_tokenize_response(const Json& body) {
  return decoding("/tokenize response", [&] {
    std::vector<TokenizedInput> out;
    for (const auto& item : body) {
      TokenizedInput t;
      t.token_ids = item.at("token_ids").get<TokenIds>();
      t.token_strings = item.at("tokens").get<std::vector<std::string>>();
      t.content_indices = item.at("content_indices").get<std::vector<int>>();
      if (item.contains("word_ids") && !item.at("word_ids").is_null()) {
        t.word_ids.emplace();
        for (const auto& w : item.at("word_ids")) {
          t.word_ids->push_back(w.is_null() ? kNoWord : w.get<int>());
        }
      }
      out.push_back(std::move(t));
    }
    return out;
  });
}

Json encode_predict_request(std::span<const TokenIds> batch) {
  Json rows = Json::array();
  for (const TokenIds& ids : batch) rows.push_back(ids);
  return Json{{"batch", std::move(rows)}};
}

std::vector<TokenIds> decode_predict_request(const Json& body) {
  return decoding("/predict request", [&] {
    return body.at("batch").get<std::vector<TokenIds>>();
  });
}

Json encode_predict_response(const Matrix& probabilities) {
  return Json{{"probabilities", encode_matrix(probabilities)}};
}

Matrix decode_predict_response(const Json& body) {
  return decoding("/predict response",
                  [&] { return decode_matrix(body.at("probabilities")); });
}

Json encode_gradients_request(const GradientRequest& request) {
  return Json{{"input_ids", request.input_ids},
              {"baseline_ids", request.baseline_ids},
              {"target", request.target},
              {"alphas", request.alphas}};
}

GradientRequest decode_gradients_request(const Json& body) {
  return decoding("/gradients request", [&] {
    GradientRequest r;
    r.input_ids = body.at("input_ids").get<TokenIds>();
    r.baseline_ids = body.at("baseline_ids").get<TokenIds>();
    r.target = body.at("target").get<int>();
    r.alphas = body.at("alphas").get<std::vector<double>>();
    return r;
  });
}

Json encode_gradients_response(const GradientBundle& bundle) {
  Json grads = Json::array();
  for (const Matrix& g : bundle.grads) grads.push_back(encode_matrix(g));
  return Json{{"grads", std::move(grads)},
              {"input_embeddings", encode_matrix(bundle.input_embeddings)},
              {"baseline_embeddings", encode_matrix(bundle.baseline_embeddings)}};
}

GradientBundle decode_gradients_response(const Json& body,
                                         const GradientRequest& request) {
  return decoding("/gradients response", [&] {
    GradientBundle bundle;
    bundle.alphas = request.alphas;
    bundle.target = request.target;
    for (const auto& slice : body.at("grads")) {
      bundle.grads.push_back(decode_matrix(slice));
    }
    bundle.input_embeddings = decode_matrix(body.at("input_embeddings"));
    bundle.baseline_embeddings = decode_matrix(body.at("baseline_embeddings"));
    return bundle;
  });
}

}  // namespace xaibench::protocol
