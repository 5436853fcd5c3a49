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

#ifndef XAIBENCH_EXPLANATION_H_
#define XAIBENCH_EXPLANATION_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "xaibench/common.h"

namespace xaibench {

enum class Method {
  kGradient,
  kGradientXInput,
  kIntegratedGradients,
  kIntegratedGradientsXInput,
  kLime,
  kPartitionShap,
  kLoo,
};

// Canonical names: gradient, gradient_x_input, integrated_gradients,
// integrated_gradients_x_input, lime, partition_shap, loo.
std::string_view method_name(Method method);
// Accepts canonical names and the CLI short forms g, gxi, ig, igxi, lime,
// shap, loo. Throws ConfigError otherwise.
Method parse_method(std::string_view name);
// Parses a comma-separated list.
std::vector<Method> parse_methods(std::string_view list);

// Continuous per-content-token attribution for one (instance, target, method).
struct Explanation {
  Method method = Method::kLoo;
  int target = 0;
  std::vector<std::string> tokens;
  Vector scores;
  std::map<std::string, double> diagnostics;
};

// Exact equality, scores compared bitwise.
bool operator==(const Explanation& a, const Explanation& b);

nlohmann::json to_json(const Explanation& explanation);
Explanation explanation_from_json(const nlohmann::json& body);

}  // namespace xaibench

#endif  // XAIBENCH_EXPLANATION_H_
