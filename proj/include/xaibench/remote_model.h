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

#ifndef XAIBENCH_REMOTE_MODEL_H_
#define XAIBENCH_REMOTE_MODEL_H_

#include <chrono>
#include <memory>
#include <string>

#include "json.hpp"
#include "xaibench/model.h"

namespace xaibench {

inline constexpr const char* kModelUrlEnv = "XAI_BENCH_MODEL_URL";

struct RemoteOptions {
  int attempts = 3;
  // Doubled after every failed attempt.
  std::chrono::milliseconds initial_backoff{200};
  std::chrono::seconds timeout{120};
};

// Client side of the JSON-over-HTTP protocol. Transport failures and 5xx
// answers are retried; 4xx answers and schema violations are not.
class RemoteModel final : public Model {
 public:
  // Fetches /info. Throws TransportError when the server cannot be reached.
  static std::shared_ptr<const RemoteModel> connect(const std::string& url,
                                                    RemoteOptions options = {});

  const ModelInfo& info() const override { return info_; }
  std::vector<TokenizedInput> tokenize_unchecked(
      std::span<const TextInput> inputs) const override;
  Matrix predict_uncached(std::span<const TokenIds> batch) const override;
  GradientBundle embedding_gradients_unchecked(
      const TokenIds& input_ids, const TokenIds& baseline_ids, int target,
      std::span<const double> alphas) const override;

  const std::string& url() const { return url_; }

  RemoteModel(std::string url, RemoteOptions options);

 private:
  nlohmann::json call(const std::string& path,
                      const nlohmann::json* body) const;

  std::string url_;
  std::string origin_;
  std::string prefix_;
  RemoteOptions options_;
  ModelInfo info_;
};

}  // namespace xaibench

#endif  // XAIBENCH_REMOTE_MODEL_H_
