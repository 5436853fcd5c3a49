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

#include "xaibench/explanation.h"

#include <array>
#include <utility>

namespace xaibench {
namespace {

struct MethodNames {
  Method method;
  std::string_view name;
  std::string_view short_name;
};

constexpr std::array<MethodNames, 7> kMethods = {{
    {Method::kGradient, "gradient", "g"},
    {Method::kGradientXInput, "gradient_x_input", "gxi"},
    {Method::kIntegratedGradients, "integrated_gradients", "ig"},
    {Method::kIntegratedGradientsXInput, "integrated_gradients_x_input", "igxi"},
    {Method::kLime, "lime", "lime"},
    {Method::kPartitionShap, "partition_shap", "shap"},
    {Method::kLoo, "loo", "loo"},
}};

}  // namespace

std::string_view method_name(Method method) {
  for (const auto& m : kMethods) {
    if (m.method == method) return m.name;
  }
  return "";
}

Method parse_method(std::string_view name) {
  for (const auto& m : kMethods) {
    if (m.name == name || m.short_name == name) return m.method;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::vector<Method> parse_methods(std::string_view list) {
  std::vector<Method> out;
  std::size_t begin = 0;
  while (begin <= list.size()) {
    const std::size_t end = std::min(list.find(',', begin), list.size());
    const std::string_view item = list.substr(begin, end - begin);
    if (!item.empty()) {
      const Method m = parse_method(item);
      if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
    begin = end + 1;
  }
  if (out.empty()) throw ConfigError("no methods given");
  return out;
}

bool operator==(const Explanation& a, const Explanation& b) {
  if (a.method != b.method || a.target != b.target || a.tokens != b.tokens ||
      a.diagnostics != b.diagnostics || a.scores.size() != b.scores.size()) {
    return false;
  }
  for (Eigen::Index i = 0; i < a.scores.size(); ++i) {
    if (a.scores(i) != b.scores(i)) return false;
  }
  return true;
}

nlohmann::json to_json(const Explanation& explanation) {
  return nlohmann::json{
      {"method", method_name(explanation.method)},
      {"target", explanation.target},
      {"tokens", explanation.tokens},
      {"scores", std::vector<double>(explanation.scores.begin(),
                                     explanation.scores.end())},
      {"diagnostics", explanation.diagnostics}};
}

Explanation explanation_from_json(const nlohmann::json& body) {
  try {
    Explanation e;
    e.method = parse_method(body.at("method").get<std::string>());
    e.target = body.at("target").get<int>();
    e.tokens = body.at("tokens").get<std::vector<std::string>>();
    const auto scores = body.at("scores").get<std::vector<double>>();
    e.scores = Eigen::Map<const Vector>(scores.data(),
                                        static_cast<Eigen::Index>(scores.size()));
    e.diagnostics =
        body.value("diagnostics", std::map<std::string, double>{});
    if (e.tokens.size() != scores.size()) {
      throw ParseError("explanation tokens and scores differ in length");
    }
    return e;
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(std::string("malformed explanation: ") + err.what());
  }
}

}  // namespace xaibench
