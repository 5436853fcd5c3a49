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

#include "xaibench/remote_model.h"

#include <thread>

#include "httplib.h"
#include "xaibench/protocol.h"

namespace xaibench {
namespace {

// Splits "http://host:port/prefix" into origin and path prefix.
std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw ConfigError("model URL must include a scheme: " + url);
  }
  const auto path = url.find('/', scheme + 3);
  if (path == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path), prefix};
}

}  // namespace

RemoteModel::RemoteModel(std::string url, RemoteOptions options)
    : url_(std::move(url)), options_(options) {
  std::tie(origin_, prefix_) = split_url(url_);
  if (options_.attempts < 1) throw ConfigError("attempts must be positive");
}

std::shared_ptr<const RemoteModel> RemoteModel::connect(
    const std::string& url, RemoteOptions options) {
  auto model = std::make_shared<RemoteModel>(url, options);
  model->info_ = protocol::decode_info(model->call("/info", nullptr));
  return model;
}

nlohmann::json RemoteModel::call(const std::string& path,
                                 const nlohmann::json* body) const {
  const std::string target = prefix_ + path;
  const std::string payload = body ? body->dump() : std::string();
  std::chrono::milliseconds backoff = options_.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= options_.attempts; ++attempt) {
    // httplib clients are not shareable across threads; one per call.
    httplib::Client client(origin_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_write_timeout(options_.timeout);
    httplib::Result result =
        body ? client.Post(target, payload, "application/json")
             : client.Get(target);
    if (!result) {
      last_error = httplib::to_string(result.error());
    } else if (result->status >= 500) {
      last_error = "HTTP " + std::to_string(result->status) + ": " + result->body;
    } else if (result->status >= 400) {
      throw ProtocolError(url_ + path + " rejected the request (HTTP " +
                          std::to_string(result->status) + "): " +
                          result->body);
    } else {
      try {
        return nlohmann::json::parse(result->body);
      } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(url_ + path + " returned invalid JSON: " + e.what());
      }
    }
    if (attempt < options_.attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  throw TransportError(url_ + path + " failed after " +
                       std::to_string(options_.attempts) +
                       " attempts: " + last_error);
}

std::vector<TokenizedInput> RemoteModel::tokenize_unchecked(
    std::span<const TextInput> inputs) const {
  // Requests are homogeneous, so mixed inputs go out as consecutive runs.
  std::vector<TokenizedInput> out;
  std::size_t begin = 0;
  while (begin < inputs.size()) {
    const std::size_t kind = inputs[begin].index();
    std::size_t end = begin;
    while (end < inputs.size() && inputs[end].index() == kind) ++end;
    const auto run = inputs.subspan(begin, end - begin);
    const nlohmann::json request = protocol::encode_tokenize_request(run);
    auto decoded = protocol::decode_tokenize_response(call("/tokenize", &request));
    if (decoded.size() != run.size()) {
      throw ProtocolError("/tokenize returned " + std::to_string(decoded.size()) +
                          " results for " + std::to_string(run.size()) +
                          " inputs");
    }
    for (auto& t : decoded) out.push_back(std::move(t));
    begin = end;
  }
  return out;
}

Matrix RemoteModel::predict_uncached(std::span<const TokenIds> batch) const {
  const nlohmann::json request = protocol::encode_predict_request(batch);
  Matrix probs = protocol::decode_predict_response(call("/predict", &request));
  if (probs.rows() != static_cast<Eigen::Index>(batch.size()) ||
      (probs.rows() > 0 && probs.cols() != info_.num_labels())) {
    throw ProtocolError("/predict returned a " + std::to_string(probs.rows()) +
                        "x" + std::to_string(probs.cols()) + " matrix for a " +
                        std::to_string(batch.size()) + "-row batch");
  }
  return probs;
}

GradientBundle RemoteModel::embedding_gradients_unchecked(
    const TokenIds& input_ids, const TokenIds& baseline_ids, int target,
    std::span<const double> alphas) const {
  protocol::GradientRequest request{input_ids, baseline_ids, target,
                                    {alphas.begin(), alphas.end()}};
  const nlohmann::json body = protocol::encode_gradients_request(request);
  return protocol::decode_gradients_response(call("/gradients", &body),
                                             request);
}

}  // namespace xaibench
