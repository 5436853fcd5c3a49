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

#include <array>

#include "explainer_internal.h"
#include "xaibench/explainers.h"

namespace xaibench {
namespace {

// Rows of `m` at the content positions of `x`.
Matrix content_rows(const Matrix& m, const TokenizedInput& x) {
  Matrix out(x.num_content(), m.cols());
  for (int i = 0; i < x.num_content(); ++i) {
    out.row(i) = m.row(x.content_indices[i]);
  }
  return out;
}

using internal::make_explanation;

}  // namespace

Explanation explain_gradient(const Scorer& scorer, const TokenizedInput& x,
                             int target, bool multiply_by_input) {
  // A single alpha of 1 evaluates at the input; the baseline is unused.
  const std::array<double, 1> alphas = {1.0};
  const GradientBundle bundle = embedding_gradients(
      scorer.model(), x.token_ids, x.token_ids, target, alphas);
  const Matrix grads = content_rows(bundle.grads.front(), x);

  Vector scores;
  if (multiply_by_input) {
    scores = grads.cwiseProduct(content_rows(bundle.input_embeddings, x))
                 .rowwise()
                 .sum();
  } else {
    scores = grads.rowwise().norm();
  }
  Explanation e = make_explanation(
      multiply_by_input ? Method::kGradientXInput : Method::kGradient, x,
      target, std::move(scores));
  e.diagnostics["gradient_calls"] = 1;
  return e;
}

Explanation explain_integrated_gradients(
    const Scorer& scorer, const TokenizedInput& x, int target,
    const IntegratedGradientsOptions& options) {
  const TokenIds baseline = options.baseline_ids
                                ? *options.baseline_ids
                                : default_baseline_ids(x, scorer.info());
  if (baseline.size() != x.token_ids.size()) {
    throw InvalidInputError("baseline length differs from input length");
  }
  const std::vector<double> alphas = midpoint_alphas(options.steps);
  const GradientBundle bundle = embedding_gradients(
      scorer.model(), x.token_ids, baseline, target, alphas);

  Matrix mean_grad = Matrix::Zero(bundle.input_embeddings.rows(),
                                  bundle.input_embeddings.cols());
  for (const Matrix& g : bundle.grads) mean_grad += g;
  mean_grad /= static_cast<double>(bundle.grads.size());
  const Matrix grads = content_rows(mean_grad, x);

  Vector scores;
  if (options.multiply_by_input) {
    const Matrix delta = content_rows(
        bundle.input_embeddings - bundle.baseline_embeddings, x);
    scores = grads.cwiseProduct(delta).rowwise().sum();
  } else {
    scores = grads.rowwise().norm();
  }
  Explanation e = make_explanation(options.multiply_by_input
                                       ? Method::kIntegratedGradientsXInput
                                       : Method::kIntegratedGradients,
                                   x, target, std::move(scores));
  e.diagnostics["steps"] = options.steps;
  e.diagnostics["gradient_calls"] = 1;
  return e;
}

}  // namespace xaibench
