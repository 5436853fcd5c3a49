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

#include "xaibench/bench.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "xaibench/lexicon_model.h"
#include "xaibench/random.h"

namespace xaibench {
namespace {

using Json = nlohmann::json;

bool contains(const std::vector<Metric>& metrics, Metric m) {
  return std::find(metrics.begin(), metrics.end(), m) != metrics.end();
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

int argmax(const Eigen::RowVectorXd& row) {
  int best = 0;
  for (Eigen::Index i = 1; i < row.size(); ++i) {
    if (row(i) > row(best)) best = static_cast<int>(i);
  }
  return best;
}

Json optional_json(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::optional<double> optional_double(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

template <typename T>
std::vector<T> parse_names(const Json& names, T (*parse)(std::string_view)) {
  std::vector<T> out;
  for (const auto& n : names) out.push_back(parse(n.get<std::string>()));
  return out;
}

}  // namespace

std::string ModelSpec::to_string() const {
  return (kind == Kind::kBuiltin ? "builtin:" : "remote:") + name;
}

ModelSpec parse_model_spec(const std::string& spec) {
  std::string text = spec;
  if (text.empty()) {
    const char* env = std::getenv(kModelUrlEnv);
    if (!env || !*env) {
      throw ConfigError(std::string("no --model given and ") + kModelUrlEnv +
                        " is not set");
    }
    text = std::string("remote:") + env;
  }
  ModelSpec out;
  if (text.rfind("builtin:", 0) == 0) {
    out.kind = ModelSpec::Kind::kBuiltin;
    out.name = text.substr(8);
    if (out.name != "lexicon" && out.name != "lexicon-subword") {
      throw ConfigError("unknown builtin model '" + out.name + "'");
    }
  } else if (text.rfind("remote:", 0) == 0) {
    out.kind = ModelSpec::Kind::kRemote;
    out.name = text.substr(7);
    if (out.name.empty()) throw ConfigError("remote model needs a URL");
  } else {
    throw ConfigError("model spec must start with builtin: or remote:");
  }
  return out;
}

ModelHandle open_model(const ModelSpec& spec, RemoteOptions options) {
  if (spec.kind == ModelSpec::Kind::kRemote) {
    return RemoteModel::connect(spec.name, options);
  }
  LexiconModelConfig config = spec.lexicon_path
                                  ? load_lexicon_config(*spec.lexicon_path)
                                  : default_sentiment_lexicon();
  config.subword = spec.name == "lexicon-subword";
  return make_builtin_lexicon(std::move(config));
}

std::string TargetPolicy::to_string() const {
  return gold ? "gold" : std::to_string(fixed);
}

TargetPolicy parse_target_policy(const std::string& text) {
  if (text == "gold") return TargetPolicy{};
  try {
    std::size_t used = 0;
    const int value = std::stoi(text, &used);
    if (used != text.size() || value < 0) throw std::invalid_argument(text);
    return TargetPolicy{false, value};
  } catch (const std::exception&) {
    throw ConfigError("target must be 'gold' or a class index, got '" + text +
                      "'");
  }
}

void RunConfig::validate(const ModelInfo& info) const {
  if (methods.empty()) throw ConfigError("no explanation methods configured");
  if (metrics.empty()) throw ConfigError("no metrics configured");
  if (!target.gold && target.fixed >= info.num_labels()) {
    throw ConfigError("target " + std::to_string(target.fixed) +
                      " out of range for " + std::to_string(info.num_labels()) +
                      " labels");
  }
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (removal == RemovalStrategy::kMask && !info.mask_token_id) {
    throw ConfigError("mask removal requires a model with a mask token");
  }
  if (sample.count && *sample.count < 1) {
    throw ConfigError("sample count must be positive");
  }
}

std::optional<double> MethodResult::value(Metric metric) const {
  for (const auto& s : scores) {
    if (s.metric == metric) return s.value;
  }
  return std::nullopt;
}

const MethodResult* InstanceReport::find(Method method) const {
  for (const auto& m : methods) {
    if (m.method == method) return &m;
  }
  return nullptr;
}

InstanceReport run_instance(const Scorer& scorer, const RunConfig& config,
                            const InstanceInput& input,
                            std::optional<int> target, int top_k,
                            std::uint64_t seed, bool evaluate_metrics) {
  const auto started = std::chrono::steady_clock::now();
  const ModelInfo& info = scorer.info();

  TokenizeOptions tokenize_options;
  tokenize_options.truncate = config.truncate;
  tokenize_options.instance_ids = {input.id};
  const TokenizedInput x = tokenize_one(scorer.model(), input.input,
                                        tokenize_options);

  InstanceReport report;
  report.id = input.id;
  report.text = std::holds_alternative<std::string>(input.input)
                    ? std::get<std::string>(input.input)
                    : join_words(std::get<std::vector<std::string>>(input.input));
  report.tokens = x.content_strings();
  report.top_k = top_k;
  if (x.truncated) report.warnings.push_back("input truncated to max_length");

  const Matrix full = scorer.predict(std::vector<TokenIds>{x.token_ids});
  report.probabilities.assign(full.row(0).begin(), full.row(0).end());
  report.target = target ? *target : argmax(full.row(0));
  if (report.target < 0 || report.target >= info.num_labels()) {
    throw ConfigError("target " + std::to_string(report.target) +
                      " out of range for " + std::to_string(info.num_labels()) +
                      " labels");
  }
  report.target_label = info.labels[report.target];

  std::optional<HumanRationale> human;
  if (input.word_rationale) {
    if (!std::holds_alternative<std::vector<std::string>>(input.input)) {
      throw ConfigError("a human rationale needs word-sequence input");
    }
    const auto& words = std::get<std::vector<std::string>>(input.input);
    if (input.word_rationale->size() != words.size()) {
      throw ValidationError("instance " + input.id + ": rationale has " +
                            std::to_string(input.word_rationale->size()) +
                            " entries for " + std::to_string(words.size()) +
                            " words");
    }
    RationaleInstance inst;
    inst.id = input.id;
    inst.words = words;
    inst.word_rationale = *input.word_rationale;
    AlignedRationale aligned = align_rationale(inst, x);
    if (aligned.dropped_words > 0) {
      report.warnings.push_back(std::to_string(aligned.dropped_words) +
                                " rationale words lost to truncation");
    }
    human = std::move(aligned.rationale);
    report.human_rationale = human->mask;
  }

  ExplainerOptions options = config.explainer;
  options.lime.seed = seed;
  const bool needs_loo =
      evaluate_metrics && contains(config.metrics, Metric::kTaucorrLoo);
  std::optional<Explanation> loo;

  for (Method method : config.methods) {
    MethodResult result;
    result.method = method;
    const Scorer local(scorer);
    try {
      Explanation e = explain(method, local, x, report.target, options);
      if (method == Method::kLoo && !loo) loo = e;
      if (evaluate_metrics) {
        if (needs_loo && !loo && x.num_content() >= 2) {
          loo = explain_loo(local, x, report.target);
        }
        EvaluationRequest request;
        request.metrics = config.metrics;
        request.human = human ? &*human : nullptr;
        request.top_k = top_k;
        request.loo = loo ? &*loo : nullptr;
        result.scores = evaluate(local, x, e, report.target, request);
      }
      result.explanation = std::move(e);
    } catch (const TransportError&) {
      throw;
    } catch (const std::exception& err) {
      result.explanation.reset();
      result.scores.clear();
      result.error = err.what();
    }
    // Gradient requests count as model calls too.
    result.model_calls = local.requested();
    if (result.explanation) {
      auto g = result.explanation->diagnostics.find("gradient_calls");
      if (g != result.explanation->diagnostics.end()) {
        result.model_calls += static_cast<long>(g->second);
      }
    }
    report.methods.push_back(std::move(result));
  }

  if (config.record_timing) {
    report.elapsed_seconds = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
  }
  return report;
}

std::vector<std::size_t> select_instances(const Corpus& corpus,
                                          const SampleSpec& sample) {
  std::vector<std::size_t> picked;
  for (std::size_t i = 0; i < corpus.instances.size(); ++i) {
    const auto& inst = corpus.instances[i];
    if (sample.label && inst.label_name != *sample.label) continue;
    if (sample.split && inst.split != *sample.split) continue;
    picked.push_back(i);
  }
  if (sample.count) {
    Rng rng(sample.seed);
    rng.shuffle(picked);
    if (picked.size() > static_cast<std::size_t>(*sample.count)) {
      picked.resize(static_cast<std::size_t>(*sample.count));
    }
  }
  return picked;
}

std::map<Method, std::map<Metric, MetricSummary>> summarize(
    const std::vector<InstanceReport>& instances,
    const std::vector<Method>& methods, const std::vector<Metric>& metrics) {
  std::map<Method, std::map<Metric, MetricSummary>> out;
  for (Method method : methods) {
    for (Metric metric : metrics) {
      double sum = 0.0;
      int count = 0;
      for (const auto& inst : instances) {
        const MethodResult* r = inst.find(method);
        if (!r) continue;
        if (auto v = r->value(metric)) {
          sum += *v;
          ++count;
        }
      }
      MetricSummary s;
      s.count = count;
      s.direction = metric_direction(metric);
      if (count > 0) s.mean = sum / count;
      out[method][metric] = s;
    }
  }
  return out;
}

DatasetReport run_dataset(const Scorer& scorer, const RunConfig& config,
                          const Corpus& corpus) {
  config.validate(scorer.info());
  const std::vector<std::size_t> picked = select_instances(corpus, config.sample);
  if (picked.empty()) throw ConfigError("sample selection is empty");

  DatasetReport report;
  report.corpus = corpus.name;
  report.model = config.model;
  report.sample = config.sample;
  report.target_policy = config.target.to_string();
  report.top_k = corpus.avg_rationale_len;
  report.methods = config.methods;
  report.metrics = config.metrics;
  for (std::size_t i : picked) report.selected_ids.push_back(corpus.instances[i].id);

  // Gold labels are checked up front, before any model call.
  if (config.target.gold) {
    for (std::size_t i : picked) {
      const RationaleInstance& inst = corpus.instances[i];
      if (inst.label_index < 0 ||
          inst.label_index >= scorer.info().num_labels()) {
        throw ConfigError("instance " + inst.id + ": gold label " +
                          std::to_string(inst.label_index) +
                          " out of range for " +
                          std::to_string(scorer.info().num_labels()) +
                          " model labels");
      }
    }
  }

  std::vector<std::optional<InstanceReport>> results(picked.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<bool> stop{false};

  auto work = [&] {
    while (!stop) {
      const std::size_t k = next++;
      if (k >= picked.size()) return;
      const RationaleInstance& inst = corpus.instances[picked[k]];
      try {
        const int target =
            config.target.gold ? inst.label_index : config.target.fixed;
        InstanceInput input{inst.id, inst.words, inst.word_rationale};
        results[k] = run_instance(scorer, config, input, target,
                                  corpus.avg_rationale_len, config.seed + k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        stop = true;
      }
    }
  };

  const int workers =
      std::min<int>(config.workers, static_cast<int>(picked.size()));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  for (auto& r : results) report.instances.push_back(std::move(*r));
  report.summary = summarize(report.instances, report.methods, report.metrics);
  return report;
}

Json to_json(const InstanceReport& report) {
  Json methods = Json::array();
  for (const auto& m : report.methods) {
    Json scores = Json::array();
    for (const auto& s : m.scores) scores.push_back(to_json(s));
    methods.push_back(Json{
        {"method", method_name(m.method)},
        {"explanation", m.explanation ? to_json(*m.explanation) : Json(nullptr)},
        {"error", m.error ? Json(*m.error) : Json(nullptr)},
        {"scores", std::move(scores)},
        {"model_calls", m.model_calls}});
  }
  Json human = nullptr;
  if (report.human_rationale) {
    human = std::vector<int>(report.human_rationale->begin(),
                             report.human_rationale->end());
  }
  Json out{{"id", report.id},
           {"text", report.text},
           {"tokens", report.tokens},
           {"target", report.target},
           {"target_label", report.target_label},
           {"probabilities", report.probabilities},
           {"human_rationale", human},
           {"top_k", report.top_k},
           {"methods", std::move(methods)},
           {"warnings", report.warnings}};
  if (report.elapsed_seconds) out["elapsed_seconds"] = *report.elapsed_seconds;
  return out;
}

InstanceReport instance_report_from_json(const Json& body) {
  try {
    InstanceReport r;
    r.id = body.at("id").get<std::string>();
    r.text = body.at("text").get<std::string>();
    r.tokens = body.at("tokens").get<std::vector<std::string>>();
    r.target = body.at("target").get<int>();
    r.target_label = body.at("target_label").get<std::string>();
    r.probabilities = body.at("probabilities").get<std::vector<double>>();
    if (!body.at("human_rationale").is_null()) {
      const auto bits = body.at("human_rationale").get<std::vector<int>>();
      r.human_rationale.emplace(bits.begin(), bits.end());
    }
    r.top_k = body.at("top_k").get<int>();
    r.warnings = body.at("warnings").get<std::vector<std::string>>();
    if (body.contains("elapsed_seconds")) {
      r.elapsed_seconds = body.at("elapsed_seconds").get<double>();
    }
    for (const auto& m : body.at("methods")) {
      MethodResult result;
      result.method = parse_method(m.at("method").get<std::string>());
      if (!m.at("explanation").is_null()) {
        result.explanation = explanation_from_json(m.at("explanation"));
      }
      if (!m.at("error").is_null()) result.error = m.at("error").get<std::string>();
      for (const auto& s : m.at("scores")) {
        result.scores.push_back(score_from_json(s));
      }
      result.model_calls = m.at("model_calls").get<long>();
      r.methods.push_back(std::move(result));
    }
    return r;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed instance report: ") + e.what());
  }
}

Json to_json(const DatasetReport& report) {
  Json methods = Json::array();
  for (Method m : report.methods) methods.push_back(method_name(m));
  Json metrics = Json::array();
  for (Metric m : report.metrics) metrics.push_back(metric_name(m));
  Json summary = Json::object();
  for (const auto& [method, row] : report.summary) {
    Json cells = Json::object();
    for (const auto& [metric, s] : row) {
      cells[std::string(metric_name(metric))] =
          Json{{"mean", optional_json(s.mean)},
               {"count", s.count},
               {"direction", s.direction == Direction::kHigherBetter
                                 ? "higher_better"
                                 : "lower_better"}};
    }
    summary[std::string(method_name(method))] = std::move(cells);
  }
  Json instances = Json::array();
  for (const auto& inst : report.instances) instances.push_back(to_json(inst));
  const SampleSpec& s = report.sample;
  return Json{
      {"corpus", report.corpus},
      {"model", report.model},
      {"sample",
       Json{{"count", s.count ? Json(*s.count) : Json(nullptr)},
            {"label", s.label ? Json(*s.label) : Json(nullptr)},
            {"split", s.split ? Json(split_name(*s.split)) : Json(nullptr)},
            {"seed", s.seed}}},
      {"selected_ids", report.selected_ids},
      {"target_policy", report.target_policy},
      {"top_k", report.top_k},
      {"methods", std::move(methods)},
      {"metrics", std::move(metrics)},
      {"summary", std::move(summary)},
      {"instances", std::move(instances)}};
}

DatasetReport dataset_report_from_json(const Json& body) {
  try {
    DatasetReport r;
    r.corpus = body.at("corpus").get<std::string>();
    r.model = body.at("model").get<std::string>();
    const Json& s = body.at("sample");
    if (!s.at("count").is_null()) r.sample.count = s.at("count").get<int>();
    if (!s.at("label").is_null()) r.sample.label = s.at("label").get<std::string>();
    if (!s.at("split").is_null()) {
      r.sample.split = parse_split(s.at("split").get<std::string>());
    }
    r.sample.seed = s.at("seed").get<std::uint64_t>();
    r.selected_ids = body.at("selected_ids").get<std::vector<std::string>>();
    r.target_policy = body.at("target_policy").get<std::string>();
    r.top_k = body.at("top_k").get<int>();
    r.methods = parse_names(body.at("methods"), &parse_method);
    r.metrics = parse_names(body.at("metrics"), &parse_metric);
    for (const auto& [method, row] : body.at("summary").items()) {
      for (const auto& [metric, cell] : row.items()) {
        MetricSummary summary;
        summary.mean = optional_double(cell.at("mean"));
        summary.count = cell.at("count").get<int>();
        summary.direction = metric_direction(parse_metric(metric));
        r.summary[parse_method(method)][parse_metric(metric)] = summary;
      }
    }
    for (const auto& inst : body.at("instances")) {
      r.instances.push_back(instance_report_from_json(inst));
    }
    return r;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed dataset report: ") + e.what());
  }
}

bool operator==(const MethodResult& a, const MethodResult& b) {
  return a.method == b.method && a.explanation == b.explanation &&
         a.error == b.error && a.scores == b.scores &&
         a.model_calls == b.model_calls;
}

bool operator==(const InstanceReport& a, const InstanceReport& b) {
  return a.id == b.id && a.text == b.text && a.tokens == b.tokens &&
         a.target == b.target && a.target_label == b.target_label &&
         a.probabilities == b.probabilities &&
         a.human_rationale == b.human_rationale && a.top_k == b.top_k &&
         a.methods == b.methods && a.warnings == b.warnings &&
         a.elapsed_seconds == b.elapsed_seconds;
}

bool operator==(const DatasetReport& a, const DatasetReport& b) {
  return a.corpus == b.corpus && a.model == b.model &&
         a.sample.count == b.sample.count && a.sample.label == b.sample.label &&
         a.sample.split == b.sample.split && a.sample.seed == b.sample.seed &&
         a.selected_ids == b.selected_ids &&
         a.target_policy == b.target_policy && a.top_k == b.top_k &&
         a.methods == b.methods && a.metrics == b.metrics &&
         a.summary == b.summary && a.instances == b.instances;
}

}  // namespace xaibench
