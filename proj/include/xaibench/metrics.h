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

// Faithfulness (comprehensiveness, sufficiency, correlation with
// leave-one-out) and plausibility (token IOU, token F1, AUPRC) of a single
// explanation. Continuous scores are discretized over positive-score tokens
// only; ties always go to the lower token index.

#ifndef XAIBENCH_METRICS_H_
#define XAIBENCH_METRICS_H_

#include <optional>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "xaibench/explanation.h"
#include "xaibench/model.h"
#include "xaibench/scorer.h"

namespace xaibench {

enum class RationaleSource { kPredicted, kHuman };

// Discrete set of content-token indices, kept sorted ascending.
struct Rationale {
  std::vector<int> indices;
  RationaleSource source = RationaleSource::kPredicted;
  std::optional<int> origin_k;

  int size() const { return static_cast<int>(indices.size()); }
};

// Binary mask over content tokens.
struct HumanRationale {
  std::vector<bool> mask;

  int count() const;
  bool empty() const { return count() == 0; }
  Rationale as_rationale() const;
};

enum class Metric {
  kAopcCompr,
  kAopcSuff,
  kTaucorrLoo,
  kTokenIou,
  kTokenF1,
  kAuprc,
};

enum class Direction { kHigherBetter, kLowerBetter };

inline constexpr Metric kAllMetrics[] = {
    Metric::kAopcCompr, Metric::kAopcSuff, Metric::kTaucorrLoo,
    Metric::kTokenIou,  Metric::kTokenF1,  Metric::kAuprc};

std::string_view metric_name(Metric metric);
Metric parse_metric(std::string_view name);
Direction metric_direction(Metric metric);
bool is_plausibility(Metric metric);

// A missing value encodes not-applicable or undefined.
struct EvaluationScore {
  Metric metric = Metric::kAopcCompr;
  std::optional<double> value;
  Direction direction = Direction::kHigherBetter;

  friend bool operator==(const EvaluationScore&,
                         const EvaluationScore&) = default;
};

EvaluationScore make_score(Metric metric, std::optional<double> value);
nlohmann::json to_json(const EvaluationScore& score);
EvaluationScore score_from_json(const nlohmann::json& body);

// Top ceil(k_percent/100 * |P|) of the positive-score tokens P.
Rationale positive_topk_fraction(const Vector& scores, int k_percent);
// Top min(K, |P|) positive-score tokens.
Rationale discretize_topk(const Vector& scores, int top_k);

// Mean over k = 10..100% of f(x)_j - f(x without r_k)_j.
EvaluationScore aopc_comprehensiveness(const Scorer& scorer,
                                       const TokenizedInput& x,
                                       const Explanation& explanation,
                                       int target);
// Mean over k = 10..100% of f(x)_j - f(r_k only)_j.
EvaluationScore aopc_sufficiency(const Scorer& scorer, const TokenizedInput& x,
                                 const Explanation& explanation, int target);
// Kendall tau-b between the explanation and leave-one-out scores. Pass `loo`
// to reuse an existing leave-one-out explanation.
EvaluationScore taucorr_loo(const Scorer& scorer, const TokenizedInput& x,
                            const Explanation& explanation, int target,
                            const Explanation* loo = nullptr);

EvaluationScore token_iou(const Rationale& predicted,
                          const HumanRationale& human);
EvaluationScore token_f1(const Rationale& predicted,
                         const HumanRationale& human);
EvaluationScore auprc(const Vector& scores, const HumanRationale& human);

struct EvaluationRequest {
  std::vector<Metric> metrics{std::begin(kAllMetrics), std::end(kAllMetrics)};
  // Plausibility metrics are skipped without a human rationale and
  // not-applicable when it is empty.
  const HumanRationale* human = nullptr;
  // K for IOU/F1 discretization.
  int top_k = 1;
  const Explanation* loo = nullptr;
};

std::vector<EvaluationScore> evaluate(const Scorer& scorer,
                                      const TokenizedInput& x,
                                      const Explanation& explanation,
                                      int target,
                                      const EvaluationRequest& request);

}  // namespace xaibench

#endif  // XAIBENCH_METRICS_H_
