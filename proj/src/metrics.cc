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

#include "xaibench/metrics.h"

#include <algorithm>
#include <array>
#include <string>

#include "xaibench/explainers.h"
#include "xaibench/ranking.h"

namespace xaibench {
namespace {

struct MetricInfo {
  Metric metric;
  std::string_view name;
  Direction direction;
  bool plausibility;
};

constexpr std::array<MetricInfo, 6> kMetricInfo = {{
    {Metric::kAopcCompr, "aopc_compr", Direction::kHigherBetter, false},
    {Metric::kAopcSuff, "aopc_suff", Direction::kLowerBetter, false},
    {Metric::kTaucorrLoo, "taucorr_loo", Direction::kHigherBetter, false},
    {Metric::kTokenIou, "token_iou", Direction::kHigherBetter, true},
    {Metric::kTokenF1, "token_f1", Direction::kHigherBetter, true},
    {Metric::kAuprc, "auprc", Direction::kHigherBetter, true},
}};

const MetricInfo& lookup(Metric metric) {
  for (const auto& m : kMetricInfo) {
    if (m.metric == metric) return m;
  }
  throw ConfigError("unknown metric");
}

// Positive-score tokens in ranking order.
std::vector<int> positive_ranking(const Vector& scores) {
  std::vector<int> order = rank_descending(scores);
  order.erase(std::remove_if(order.begin(), order.end(),
                             [&](int i) { return !(scores(i) > 0.0); }),
              order.end());
  return order;
}

Rationale take_top(const std::vector<int>& ranking, std::size_t count,
                   std::optional<int> origin_k) {
  Rationale r;
  r.indices.assign(ranking.begin(),
                   ranking.begin() + std::min(count, ranking.size()));
  std::sort(r.indices.begin(), r.indices.end());
  r.origin_k = origin_k;
  return r;
}

void check_alignment(const TokenizedInput& x, const Explanation& e) {
  if (e.scores.size() != x.num_content()) {
    throw InvalidInputError("explanation has " +
                            std::to_string(e.scores.size()) +
                            " scores for " + std::to_string(x.num_content()) +
                            " content tokens");
  }
}

int intersection_size(const Rationale& predicted, const HumanRationale& human) {
  int count = 0;
  for (int i : predicted.indices) {
    if (i < 0 || i >= static_cast<int>(human.mask.size())) {
      throw InvalidInputError("rationale index out of range");
    }
    if (human.mask[i]) ++count;
  }
  return count;
}

constexpr int kAopcSteps = 10;

// f(x) and f for each of the ten rationales, kept (sufficiency) or removed
// (comprehensiveness). Returns the mean drop.
double aopc(const Scorer& scorer, const TokenizedInput& x,
            const Explanation& e, int target, bool keep_rationale) {
  check_alignment(x, e);
  const int n = x.num_content();
  std::vector<KeepMask> keeps;
  keeps.emplace_back(n, true);
  for (int step = 1; step <= kAopcSteps; ++step) {
    const Rationale r = positive_topk_fraction(e.scores, step * 10);
    KeepMask keep(n, !keep_rationale);
    for (int i : r.indices) keep[i] = keep_rationale;
    keeps.push_back(std::move(keep));
  }
  const Vector v = scorer.target_probabilities(x, keeps, target);
  return (v(0) - v.tail(kAopcSteps).array()).mean();
}

}  // namespace

int HumanRationale::count() const {
  return static_cast<int>(std::count(mask.begin(), mask.end(), true));
}

Rationale HumanRationale::as_rationale() const {
  Rationale r;
  r.source = RationaleSource::kHuman;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) r.indices.push_back(static_cast<int>(i));
  }
  return r;
}

std::string_view metric_name(Metric metric) { return lookup(metric).name; }

Metric parse_metric(std::string_view name) {
  for (const auto& m : kMetricInfo) {
    if (m.name == name) return m.metric;
  }
  throw ConfigError("unknown metric '" + std::string(name) + "'");
}

Direction metric_direction(Metric metric) { return lookup(metric).direction; }

bool is_plausibility(Metric metric) { return lookup(metric).plausibility; }

EvaluationScore make_score(Metric metric, std::optional<double> value) {
  return EvaluationScore{metric, value, metric_direction(metric)};
}

nlohmann::json to_json(const EvaluationScore& score) {
  return nlohmann::json{
      {"metric", metric_name(score.metric)},
      {"value", score.value ? nlohmann::json(*score.value) : nlohmann::json()},
      {"direction", score.direction == Direction::kHigherBetter
                        ? "higher_better"
                        : "lower_better"}};
}

EvaluationScore score_from_json(const nlohmann::json& body) {
  try {
    const Metric metric = parse_metric(body.at("metric").get<std::string>());
    std::optional<double> value;
    if (!body.at("value").is_null()) value = body.at("value").get<double>();
    EvaluationScore score = make_score(metric, value);
    const std::string direction = body.at("direction").get<std::string>();
    if (direction != (score.direction == Direction::kHigherBetter
                          ? "higher_better"
                          : "lower_better")) {
      throw ParseError("direction does not match metric " +
                       std::string(metric_name(metric)));
    }
    return score;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed evaluation score: ") + e.what());
  }
}

Rationale positive_topk_fraction(const Vector& scores, int k_percent) {
  if (k_percent < 1 || k_percent > 100) {
    throw ConfigError("k_percent must lie in [1, 100]");
  }
  const std::vector<int> ranking = positive_ranking(scores);
  const std::size_t count =
      (static_cast<std::size_t>(k_percent) * ranking.size() + 99) / 100;
  return take_top(ranking, count, k_percent);
}

Rationale discretize_topk(const Vector& scores, int top_k) {
  if (top_k < 1) throw ConfigError("K must be at least 1");
  return take_top(positive_ranking(scores), static_cast<std::size_t>(top_k),
                  top_k);
}

EvaluationScore aopc_comprehensiveness(const Scorer& scorer,
                                       const TokenizedInput& x,
                                       const Explanation& explanation,
                                       int target) {
  return make_score(Metric::kAopcCompr,
                    aopc(scorer, x, explanation, target, false));
}

EvaluationScore aopc_sufficiency(const Scorer& scorer, const TokenizedInput& x,
                                 const Explanation& explanation, int target) {
  return make_score(Metric::kAopcSuff,
                    aopc(scorer, x, explanation, target, true));
}

EvaluationScore taucorr_loo(const Scorer& scorer, const TokenizedInput& x,
                            const Explanation& explanation, int target,
                            const Explanation* loo) {
  check_alignment(x, explanation);
  if (x.num_content() < 2) return make_score(Metric::kTaucorrLoo, std::nullopt);
  Explanation computed;
  if (!loo || loo->target != target) {
    computed = explain_loo(scorer, x, target);
    loo = &computed;
  }
  check_alignment(x, *loo);
  return make_score(Metric::kTaucorrLoo,
                    kendall_tau_b(explanation.scores, loo->scores));
}

EvaluationScore token_iou(const Rationale& predicted,
                          const HumanRationale& human) {
  if (human.empty()) return make_score(Metric::kTokenIou, std::nullopt);
  const int shared = intersection_size(predicted, human);
  const int united = predicted.size() + human.count() - shared;
  return make_score(Metric::kTokenIou, static_cast<double>(shared) / united);
}

EvaluationScore token_f1(const Rationale& predicted,
                         const HumanRationale& human) {
  if (human.empty()) return make_score(Metric::kTokenF1, std::nullopt);
  const int shared = intersection_size(predicted, human);
  const double precision =
      predicted.size() == 0 ? 0.0 : static_cast<double>(shared) / predicted.size();
  const double recall = static_cast<double>(shared) / human.count();
  const double f1 = precision + recall == 0.0
                        ? 0.0
                        : 2.0 * precision * recall / (precision + recall);
  return make_score(Metric::kTokenF1, f1);
}

EvaluationScore auprc(const Vector& scores, const HumanRationale& human) {
  if (static_cast<std::size_t>(scores.size()) != human.mask.size()) {
    throw InvalidInputError("human rationale length differs from scores");
  }
  return make_score(Metric::kAuprc, average_precision(scores, human.mask));
}

std::vector<EvaluationScore> evaluate(const Scorer& scorer,
                                      const TokenizedInput& x,
                                      const Explanation& explanation,
                                      int target,
                                      const EvaluationRequest& request) {
  std::vector<EvaluationScore> out;
  std::optional<Rationale> discrete;
  for (Metric metric : request.metrics) {
    if (is_plausibility(metric)) {
      if (!request.human) continue;
      if (request.human->mask.size() !=
          static_cast<std::size_t>(x.num_content())) {
        throw InvalidInputError("human rationale length differs from tokens");
      }
      if (!discrete) discrete = discretize_topk(explanation.scores, request.top_k);
    }
    switch (metric) {
      case Metric::kAopcCompr:
        out.push_back(aopc_comprehensiveness(scorer, x, explanation, target));
        break;
      case Metric::kAopcSuff:
        out.push_back(aopc_sufficiency(scorer, x, explanation, target));
        break;
      case Metric::kTaucorrLoo:
        out.push_back(taucorr_loo(scorer, x, explanation, target, request.loo));
        break;
      case Metric::kTokenIou:
        out.push_back(token_iou(*discrete, *request.human));
        break;
      case Metric::kTokenF1:
        out.push_back(token_f1(*discrete, *request.human));
        break;
      case Metric::kAuprc:
        out.push_back(auprc(explanation.scores, *request.human));
        break;
    }
  }
  return out;
}

}  // namespace xaibench
