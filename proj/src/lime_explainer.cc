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

#include <cmath>
#include <numeric>

#include "explainer_internal.h"
#include "xaibench/explainers.h"
#include "xaibench/random.h"

namespace xaibench {
namespace {

// exp(-D^2 / width^2), D the cosine distance between a presence vector with
// `present` ones out of `n` and the all-ones vector.
double kernel_weight(int present, int n, double kernel_width) {
  const double distance =
      present == 0 ? 1.0 : 1.0 - std::sqrt(static_cast<double>(present) / n);
  return std::exp(-distance * distance / (kernel_width * kernel_width));
}

// One token: only two distinct inputs exist, x and the empty input. Half the
// samples (rounded up, the unperturbed one first) keep the token. With the
// intercept pinned at f(empty) the ridge slope has the closed form
// W * delta / (W + l2), W the total kernel weight of the kept samples.
Explanation single_token_lime(const Scorer& scorer, const TokenizedInput& x,
                              int target, const LimeOptions& options) {
  const std::vector<KeepMask> keeps = {KeepMask{true}, KeepMask{false}};
  const Vector probs = scorer.target_probabilities(x, keeps, target);
  const double delta = probs(0) - probs(1);
  const double kept_weight =
      static_cast<double>((options.n_samples + 1) / 2) *
      kernel_weight(1, 1, options.kernel_width);
  const double coefficient = kept_weight * delta / (kept_weight + options.l2);

  Explanation e = internal::make_explanation(Method::kLime, x, target,
                                             Vector::Constant(1, coefficient));
  e.diagnostics["samples"] = options.n_samples;
  e.diagnostics["seed"] = static_cast<double>(options.seed);
  e.diagnostics["intercept"] = probs(1);
  e.diagnostics["kept_weight"] = kept_weight;
  e.diagnostics["model_calls"] = 2;
  return e;
}

}  // namespace

Explanation explain_lime(const Scorer& scorer, const TokenizedInput& x,
                         int target, const LimeOptions& options) {
  const int n = x.num_content();
  if (n < 1) throw InvalidInputError("LIME needs at least one content token");
  if (options.n_samples < n + 2) {
    throw ConfigError("LIME needs at least " + std::to_string(n + 2) +
                      " samples for " + std::to_string(n) + " tokens");
  }
  if (!(options.kernel_width > 0) || !(options.l2 >= 0)) {
    throw ConfigError("LIME kernel width must be positive and l2 >= 0");
  }
  if (n == 1) return single_token_lime(scorer, x, target, options);

  const int num_samples = options.n_samples;
  Rng rng(options.seed);
  std::vector<KeepMask> keeps(num_samples, KeepMask(n, true));
  Matrix design = Matrix::Ones(num_samples, n);
  Vector weights(num_samples);
  weights(0) = 1.0;
  std::vector<int> order(n);
  for (int s = 1; s < num_samples; ++s) {
    const int removed = static_cast<int>(rng.between(1, n - 1));
    std::iota(order.begin(), order.end(), 0);
    // Partial Fisher-Yates picks `removed` distinct positions.
    for (int i = 0; i < removed; ++i) {
      const int j = i + static_cast<int>(rng.below(n - i));
      std::swap(order[i], order[j]);
      keeps[s][order[i]] = false;
      design(s, order[i]) = 0.0;
    }
    weights(s) = kernel_weight(n - removed, n, options.kernel_width);
  }
  const Vector y = scorer.target_probabilities(x, keeps, target);

  // Weighted ridge with an unpenalized intercept: center by weighted means.
  const double weight_sum = weights.sum();
  const Eigen::RowVectorXd design_mean =
      (weights.transpose() * design) / weight_sum;
  const double y_mean = weights.dot(y) / weight_sum;
  const Matrix centered = design.rowwise() - design_mean;
  const Vector y_centered = y.array() - y_mean;
  const Matrix weighted = weights.asDiagonal() * centered;

  Matrix normal = centered.transpose() * weighted;
  normal.diagonal().array() += options.l2;
  const Vector rhs = weighted.transpose() * y_centered;

  Eigen::LDLT<Matrix> solver(normal);
  const Vector pivots = solver.vectorD();
  const double largest = pivots.cwiseAbs().maxCoeff();
  if (solver.info() != Eigen::Success || !solver.isPositive() ||
      pivots.minCoeff() <= 1e-12 * std::max(largest, 1.0)) {
    throw NumericError("LIME normal equations are singular; increase l2");
  }
  const Vector coefficients = solver.solve(rhs);
  const double intercept = y_mean - design_mean.dot(coefficients);

  const Vector residual = y - ((design * coefficients).array() + intercept).matrix();
  const double ss_res = weights.dot(residual.cwiseAbs2());
  const double ss_tot = weights.dot(y_centered.cwiseAbs2());
  const double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;

  Explanation e =
      internal::make_explanation(Method::kLime, x, target, coefficients);
  e.diagnostics["samples"] = num_samples;
  e.diagnostics["seed"] = static_cast<double>(options.seed);
  e.diagnostics["intercept"] = intercept;
  e.diagnostics["r2"] = r2;
  e.diagnostics["model_calls"] = num_samples;
  return e;
}

}  // namespace xaibench
