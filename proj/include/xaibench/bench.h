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

// Explain-then-evaluate workflows over single inputs and corpora.

#ifndef XAIBENCH_BENCH_H_
#define XAIBENCH_BENCH_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "xaibench/datasets.h"
#include "xaibench/explainers.h"
#include "xaibench/metrics.h"
#include "xaibench/remote_model.h"
#include "xaibench/scorer.h"

namespace xaibench {

// "builtin:lexicon", "builtin:lexicon-subword" or "remote:<url>". An empty
// spec falls back to the XAI_BENCH_MODEL_URL environment variable.
struct ModelSpec {
  enum class Kind { kBuiltin, kRemote };
  Kind kind = Kind::kBuiltin;
  std::string name;  // builtin name or URL
  // Optional lexicon weights file for builtin models.
  std::optional<std::string> lexicon_path;

  std::string to_string() const;
};

ModelSpec parse_model_spec(const std::string& spec);
ModelHandle open_model(const ModelSpec& spec, RemoteOptions options = {});

struct TargetPolicy {
  // Gold label for corpus instances; ignored for ad-hoc text.
  bool gold = true;
  int fixed = 0;

  std::string to_string() const;
};

// "gold" or a class index.
TargetPolicy parse_target_policy(const std::string& text);

struct SampleSpec {
  std::optional<int> count;
  std::optional<std::string> label;
  std::optional<Split> split;
  std::uint64_t seed = 0;
};

struct RunConfig {
  std::string model;
  std::vector<Method> methods;
  std::vector<Metric> metrics{std::begin(kAllMetrics), std::end(kAllMetrics)};
  TargetPolicy target;
  RemovalStrategy removal = RemovalStrategy::kDelete;
  // Base seed for stochastic explainers.
  std::uint64_t seed = 42;
  ExplainerOptions explainer;
  SampleSpec sample;
  int workers = 1;
  // Drop trailing tokens of overlong corpus instances instead of failing.
  bool truncate = true;
  bool record_timing = false;

  // Throws ConfigError.
  void validate(const ModelInfo& info) const;
};

struct MethodResult {
  Method method = Method::kLoo;
  std::optional<Explanation> explanation;
  std::optional<std::string> error;
  std::vector<EvaluationScore> scores;
  // Sequences requested while explaining and evaluating (cache hits
  // included, so the count does not depend on scheduling), plus gradient
  // requests.
  long model_calls = 0;

  std::optional<double> value(Metric metric) const;
};

struct InstanceReport {
  std::string id;
  std::string text;
  std::vector<std::string> tokens;
  int target = 0;
  std::string target_label;
  std::vector<double> probabilities;
  std::optional<std::vector<bool>> human_rationale;
  int top_k = 1;
  std::vector<MethodResult> methods;
  std::vector<std::string> warnings;
  std::optional<double> elapsed_seconds;

  const MethodResult* find(Method method) const;
};

struct InstanceInput {
  std::string id = "input";
  // Raw text, or a word sequence when a rationale must be aligned.
  TextInput input;
  // Word-level human rationale; requires `input` to be a word sequence.
  std::optional<std::vector<bool>> word_rationale;
};

// Explains with every configured method and evaluates each explanation.
// Failures of one method are recorded in its MethodResult; transport
// failures abort the whole run. `target` nullopt means the predicted class.
InstanceReport run_instance(const Scorer& scorer, const RunConfig& config,
                            const InstanceInput& input,
                            std::optional<int> target, int top_k,
                            std::uint64_t seed, bool evaluate_metrics = true);

struct MetricSummary {
  std::optional<double> mean;
  int count = 0;
  Direction direction = Direction::kHigherBetter;

  friend bool operator==(const MetricSummary&, const MetricSummary&) = default;
};

struct DatasetReport {
  std::string corpus;
  std::string model;
  SampleSpec sample;
  std::vector<std::string> selected_ids;
  std::string target_policy;
  int top_k = 1;
  std::vector<Method> methods;
  std::vector<Metric> metrics;
  std::map<Method, std::map<Metric, MetricSummary>> summary;
  std::vector<InstanceReport> instances;
};

// Indices of the selected instances: filter by label and split, then (when
// a count is given) a seeded shuffle and the first `count`.
std::vector<std::size_t> select_instances(const Corpus& corpus,
                                          const SampleSpec& sample);

DatasetReport run_dataset(const Scorer& scorer, const RunConfig& config,
                          const Corpus& corpus);

// Means over non-missing values, with counts.
std::map<Method, std::map<Metric, MetricSummary>> summarize(
    const std::vector<InstanceReport>& instances,
    const std::vector<Method>& methods, const std::vector<Metric>& metrics);

nlohmann::json to_json(const InstanceReport& report);
InstanceReport instance_report_from_json(const nlohmann::json& body);
nlohmann::json to_json(const DatasetReport& report);
DatasetReport dataset_report_from_json(const nlohmann::json& body);

bool operator==(const MethodResult& a, const MethodResult& b);
bool operator==(const InstanceReport& a, const InstanceReport& b);
bool operator==(const DatasetReport& a, const DatasetReport& b);

}  // namespace xaibench

#endif  // XAIBENCH_BENCH_H_
