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

// Post-hoc attribution methods. Every explainer returns one score per content
// token of the input and is a pure function of (model, input, target,
// options); stochastic methods take an explicit seed.

#ifndef XAIBENCH_EXPLAINERS_H_
#define XAIBENCH_EXPLAINERS_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "xaibench/explanation.h"
#include "xaibench/model.h"
#include "xaibench/scorer.h"

namespace xaibench {

// Saliency: gradient of the target probability at the input embeddings.
// Plain: L2 norm over embedding dimensions per token. With
// multiply_by_input: signed dot product of gradient and input embedding.
Explanation explain_gradient(const Scorer& scorer, const TokenizedInput& x,
                             int target, bool multiply_by_input);

struct IntegratedGradientsOptions {
  int steps = 50;
  bool multiply_by_input = true;
  // Defaults to default_baseline_ids(x, info).
  std::optional<TokenIds> baseline_ids;
};

// Midpoint Riemann approximation of the path integral from the baseline to
// the input. The x-input variant satisfies completeness: the scores sum to
// f(x) - f(baseline) as steps grows.
Explanation explain_integrated_gradients(
    const Scorer& scorer, const TokenizedInput& x, int target,
    const IntegratedGradientsOptions& options = {});

struct LimeOptions {
  int n_samples = 1000;
  double kernel_width = 25.0;
  double l2 = 1.0;
  std::uint64_t seed = 42;
};

// Local linear surrogate fit by weighted ridge regression on random token
// removals. Diagnostics carry the surrogate intercept and weighted R^2.
Explanation explain_lime(const Scorer& scorer, const TokenizedInput& x,
                         int target, const LimeOptions& options = {});

// Balanced binary hierarchy over contiguous content-token ranges. Node 0 is
// the root; a node's left child covers the first ceil(len/2) tokens.
class PartitionTree {
 public:
  struct Node {
    int begin = 0;
    int end = 0;
    int left = -1;
    int right = -1;
    bool leaf() const { return left < 0; }
  };

  static PartitionTree balanced(int num_tokens);

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int i) const { return nodes_[i]; }
  int num_leaves() const;

 private:
  int build(int begin, int end);
  std::vector<Node> nodes_;
};

// Exact Owen values of v(S) = f(x keeping only S)_target over the balanced
// PartitionTree. Additive: the scores sum to f(x) - v(empty).
Explanation explain_partition_shap(const Scorer& scorer,
                                   const TokenizedInput& x, int target);

// score_i = f(x) - f(x without token i).
Explanation explain_loo(const Scorer& scorer, const TokenizedInput& x,
                        int target);

struct ExplainerOptions {
  IntegratedGradientsOptions integrated_gradients;
  LimeOptions lime;
};

Explanation explain(Method method, const Scorer& scorer,
                    const TokenizedInput& x, int target,
                    const ExplainerOptions& options = {});

}  // namespace xaibench

#endif  // XAIBENCH_EXPLAINERS_H_
