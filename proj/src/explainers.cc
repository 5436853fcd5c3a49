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

#include "xaibench/explainers.h"

#include "explainer_internal.h"

namespace xaibench {

Explanation explain_loo(const Scorer& scorer, const TokenizedInput& x,
                        int target) {
  const int n = x.num_content();
  if (n < 1) throw InvalidInputError("LOO needs at least one content token");
  std::vector<KeepMask> keeps(n + 1, KeepMask(n, true));
  for (int i = 0; i < n; ++i) keeps[i + 1][i] = false;
  const Vector v = scorer.target_probabilities(x, keeps, target);
  Explanation e = internal::make_explanation(
      Method::kLoo, x, target, (v(0) - v.tail(n).array()).matrix());
  e.diagnostics["model_calls"] = n + 1;
  return e;
}

Explanation explain(Method method, const Scorer& scorer,
                    const TokenizedInput& x, int target,
                    const ExplainerOptions& options) {
  switch (method) {
    case Method::kGradient:
      return explain_gradient(scorer, x, target, false);
    case Method::kGradientXInput:
      return explain_gradient(scorer, x, target, true);
    case Method::kIntegratedGradients: {
      IntegratedGradientsOptions ig = options.integrated_gradients;
      ig.multiply_by_input = false;
      return explain_integrated_gradients(scorer, x, target, ig);
    }
    case Method::kIntegratedGradientsXInput: {
      IntegratedGradientsOptions ig = options.integrated_gradients;
      ig.multiply_by_input = true;
      return explain_integrated_gradients(scorer, x, target, ig);
    }
    case Method::kLime:
      return explain_lime(scorer, x, target, options.lime);
    case Method::kPartitionShap:
      return explain_partition_shap(scorer, x, target);
    case Method::kLoo:
      return explain_loo(scorer, x, target);
  }
  throw ConfigError("unhandled method");
}

}  // namespace xaibench
