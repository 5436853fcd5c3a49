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


#include <gtest/gtest.h>

#include <cmath>

#include "test_support.h"
#include "xaibench/bench.h"
#include "xaibench/report.h"

namespace xaibench {
namespace {

using nlohmann::json;
using testing::data_path;
using testing::sigmoid;

RunConfig config_for(std::vector<Method> methods) {
  RunConfig config;
  config.model = "builtin:lexicon";
  config.methods = std::move(methods);
  config.explainer.lime.n_samples = 200;
  config.explainer.integrated_gradients.steps = 20;
  return config;
}

TEST(RunInstance, GreatMovieWithLooAndShap) {
  const Scorer scorer(testing::toy_model());
  const RunConfig config = config_for({Method::kLoo, Method::kPartitionShap});
  InstanceInput input;
  input.input = std::string("great movie");
  const InstanceReport r = run_instance(scorer, config, input, std::nullopt, 1, 7);
  EXPECT_EQ(r.target, 1);
  EXPECT_EQ(r.tokens, (std::vector<std::string>{"great", "movie"}));
  ASSERT_EQ(r.methods.size(), 2u);
  for (const auto& m : r.methods) {
    ASSERT_TRUE(m.explanation) << *m.error;
    const Vector& s = m.explanation->scores;
    EXPECT_NEAR(s.sum(), sigmoid(2) - 0.5, 1e-12);
    EXPECT_NEAR(*m.value(Metric::kAopcCompr), sigmoid(2) - 0.5, 1e-12);
    EXPECT_NEAR(*m.value(Metric::kTaucorrLoo), 1.0, 1e-12);
    // No human rationale: plausibility is skipped.
    EXPECT_FALSE(m.value(Metric::kTokenIou));
    EXPECT_EQ(m.scores.size(), 3u);
    EXPECT_GT(m.model_calls, 0);
  }
}

TEST(RunInstance, FailingMethodIsIsolated) {
  auto wrapped = std::make_shared<testing::WrappedModel>(testing::toy_model());
  wrapped->mutable_info().capabilities.erase(Capability::kEmbeddingGradients);
  const Scorer scorer(wrapped);
  const RunConfig config = config_for({Method::kGradient, Method::kLoo});
  InstanceInput input;
  input.input = std::string("great terrible movie");
  const InstanceReport r = run_instance(scorer, config, input, 1, 1, 0);
  ASSERT_EQ(r.methods.size(), 2u);
  EXPECT_FALSE(r.methods[0].explanation);
  ASSERT_TRUE(r.methods[0].error);
  EXPECT_TRUE(r.methods[0].scores.empty());
  EXPECT_TRUE(r.methods[1].explanation);
  EXPECT_FALSE(r.methods[1].error);
  EXPECT_EQ(r.methods[1].scores.size(), 3u);
}

TEST(RunInstance, TransportFailuresAbort) {
  class Down : public testing::WrappedModel {
   public:
    using WrappedModel::WrappedModel;
    Matrix predict_uncached(std::span<const TokenIds>) const override {
      throw TransportError("connection refused");
    }
  };
  const Scorer scorer(std::make_shared<Down>(testing::toy_model()));
  InstanceInput input;
  input.input = std::string("great movie");
  EXPECT_THROW(run_instance(scorer, config_for({Method::kLoo}), input, 1, 1, 0),
               TransportError);
}

TEST(RunInstance, RationaleNeedsWords) {
  const Scorer scorer(testing::toy_model());
  InstanceInput input;
  input.input = std::string("great movie");
  input.word_rationale = std::vector<bool>{true, false};
  EXPECT_THROW(run_instance(scorer, config_for({Method::kLoo}), input, 1, 1, 0),
               ConfigError);
  input.input = std::vector<std::string>{"great", "movie"};
  const InstanceReport r =
      run_instance(scorer, config_for({Method::kLoo}), input, 1, 1, 0);
  EXPECT_EQ(*r.methods[0].value(Metric::kTokenIou), 1.0);
  EXPECT_EQ(*r.methods[0].value(Metric::kTokenF1), 1.0);
  EXPECT_EQ(*r.methods[0].value(Metric::kAuprc), 1.0);
  EXPECT_EQ(r.methods[0].scores.size(), 6u);
}

TEST(RunInstance, TargetOutOfRange) {
  const Scorer scorer(testing::toy_model());
  InstanceInput input;
  input.input = std::string("great movie");
  EXPECT_THROW(run_instance(scorer, config_for({Method::kLoo}), input, 5, 1, 0),
               ConfigError);
}

TEST(Config, Validation) {
  const ModelInfo info = testing::toy_model()->info();
  EXPECT_THROW(parse_method("attention"), ConfigError);
  EXPECT_THROW(parse_metric("accuracy"), ConfigError);
  RunConfig c = config_for({});
  EXPECT_THROW(c.validate(info), ConfigError);
  c = config_for({Method::kLoo});
  c.validate(info);
  c.metrics.clear();
  EXPECT_THROW(c.validate(info), ConfigError);
  c = config_for({Method::kLoo});
  c.workers = 0;
  EXPECT_THROW(c.validate(info), ConfigError);
  c = config_for({Method::kLoo});
  c.target = parse_target_policy("2");
  EXPECT_THROW(c.validate(info), ConfigError);
  EXPECT_THROW(parse_target_policy("-1"), ConfigError);
  EXPECT_THROW(parse_target_policy("gold!"), ConfigError);
  EXPECT_TRUE(parse_target_policy("gold").gold);
}

TEST(ModelSpecs, Parsing) {
  EXPECT_EQ(parse_model_spec("builtin:lexicon").kind, ModelSpec::Kind::kBuiltin);
  const ModelSpec remote = parse_model_spec("remote:http://127.0.0.1:9/v1");
  EXPECT_EQ(remote.kind, ModelSpec::Kind::kRemote);
  EXPECT_EQ(remote.name, "http://127.0.0.1:9/v1");
  EXPECT_THROW(parse_model_spec("builtin:bert"), ConfigError);
  EXPECT_THROW(parse_model_spec("ftp://x"), ConfigError);
}

Corpus sentiment() { return load_corpus_jsonl(data_path("sentiment.jsonl")); }

TEST(Select, FiltersThenSamples) {
  const Corpus c = sentiment();
  SampleSpec all;
  EXPECT_EQ(select_instances(c, all).size(), c.instances.size());
  SampleSpec test_only;
  test_only.split = Split::kTest;
  for (std::size_t i : select_instances(c, test_only)) {
    EXPECT_EQ(c.instances[i].split, Split::kTest);
  }
  SampleSpec sample;
  sample.count = 4;
  sample.label = "positive";
  sample.seed = 3;
  const auto a = select_instances(c, sample);
  EXPECT_EQ(a.size(), 4u);
  for (std::size_t i : a) EXPECT_EQ(c.instances[i].label_name, "positive");
  EXPECT_EQ(select_instances(c, sample), a);
  sample.count = 1000;
  EXPECT_LT(select_instances(c, sample).size(), c.instances.size());
}

TEST(RunDataset, DeterministicAcrossWorkers) {
  const Corpus c = sentiment();
  RunConfig config = config_for({Method::kLime, Method::kPartitionShap,
                                 Method::kIntegratedGradientsXInput});
  config.model = "builtin:lexicon";
  const ModelHandle model = make_builtin_lexicon(default_sentiment_lexicon());
  const Scorer one(model);
  const DatasetReport a = run_dataset(one, config, c);
  config.workers = 4;
  const Scorer fresh(model);
  const DatasetReport b = run_dataset(fresh, config, c);
  EXPECT_EQ(a, b);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  ASSERT_EQ(a.instances.size(), c.instances.size());
  for (std::size_t i = 0; i < c.instances.size(); ++i) {
    EXPECT_EQ(a.instances[i].id, c.instances[i].id);
    EXPECT_EQ(a.instances[i].target, c.instances[i].label_index);
  }
  EXPECT_EQ(a.top_k, c.avg_rationale_len);
}

TEST(RunDataset, EmptySelectionAndBadGoldLabels) {
  const Corpus c = sentiment();
  RunConfig config = config_for({Method::kLoo});
  config.sample.label = "neutral";
  const Scorer scorer(make_builtin_lexicon(default_sentiment_lexicon()));
  EXPECT_THROW(run_dataset(scorer, config, c), ConfigError);

  Corpus bad = c;
  bad.instances[5].label_index = 2;
  auto wrapped = std::make_shared<testing::WrappedModel>(
      make_builtin_lexicon(default_sentiment_lexicon()));
  const Scorer counted(wrapped);
  EXPECT_THROW(run_dataset(counted, config_for({Method::kLoo}), bad), ConfigError);
  EXPECT_EQ(wrapped->predict_calls, 0);
}

TEST(RunDataset, EmptyRationalesGiveMissingPlausibility) {
  Corpus c = sentiment();
  for (auto& inst : c.instances) inst.word_rationale.assign(inst.words.size(), false);
  c.avg_rationale_len = average_rationale_length(c.instances);
  const Scorer scorer(make_builtin_lexicon(default_sentiment_lexicon()));
  const DatasetReport r = run_dataset(scorer, config_for({Method::kLoo}), c);
  const MetricSummary& iou = r.summary.at(Method::kLoo).at(Metric::kTokenIou);
  EXPECT_EQ(iou.count, 0);
  EXPECT_FALSE(iou.mean);
  const json j = to_json(r);
  EXPECT_TRUE(j["summary"]["loo"]["token_iou"]["mean"].is_null());
  EXPECT_EQ(r.summary.at(Method::kLoo).at(Metric::kAopcCompr).count,
            static_cast<int>(c.instances.size()));
}

TEST(Summary, MeansOverPresentValues) {
  const Corpus c = sentiment();
  RunConfig config = config_for({Method::kLoo});
  config.sample.count = 1;
  const Scorer scorer(make_builtin_lexicon(default_sentiment_lexicon()));
  const DatasetReport r = run_dataset(scorer, config, c);
  ASSERT_EQ(r.instances.size(), 1u);
  for (Metric metric : kAllMetrics) {
    const auto v = r.instances[0].methods[0].value(metric);
    const MetricSummary& s = r.summary.at(Method::kLoo).at(metric);
    EXPECT_EQ(s.mean, v);
    EXPECT_EQ(s.count, v ? 1 : 0);
    EXPECT_EQ(s.direction, metric_direction(metric));
  }

  // Hand-built: missing values are excluded from mean and count.
  auto make = [](std::optional<double> v) {
    InstanceReport r;
    MethodResult m;
    m.method = Method::kLime;
    m.scores = {make_score(Metric::kAopcSuff, v)};
    r.methods = {m};
    return r;
  };
  const auto s = summarize({make(0.25), make(std::nullopt), make(0.75)},
                           {Method::kLime}, {Metric::kAopcSuff});
  EXPECT_EQ(s.at(Method::kLime).at(Metric::kAopcSuff).mean, 0.5);
  EXPECT_EQ(s.at(Method::kLime).at(Metric::kAopcSuff).count, 2);
}

TEST(Reports, JsonRoundTrip) {
  const Corpus c = sentiment();
  RunConfig config = config_for({Method::kLime, Method::kLoo, Method::kGradient});
  config.sample.count = 5;
  config.sample.seed = 9;
  const Scorer scorer(make_builtin_lexicon(default_sentiment_lexicon()));
  const DatasetReport r = run_dataset(scorer, config, c);
  const json j = to_json(r);
  const DatasetReport back = dataset_report_from_json(json::parse(j.dump()));
  EXPECT_EQ(back, r);
  EXPECT_EQ(to_json(back).dump(), j.dump());
  for (const auto& inst : r.instances) {
    EXPECT_EQ(instance_report_from_json(to_json(inst)), inst);
  }
  EXPECT_THROW(dataset_report_from_json(json{{"corpus", 1}}), ParseError);
}

TEST(Render, HeatColors) {
  EXPECT_EQ(heat_color(0.0, 1.0), Rgb{});
  EXPECT_EQ(heat_color(0.7, 0.0), Rgb{});
  EXPECT_EQ(heat_color(-0.3, 0.0), Rgb{});
  const Rgb red = heat_color(1.0, 1.0);
  const Rgb blue = heat_color(-1.0, 1.0);
  EXPECT_GT(red.r, red.b);
  EXPECT_GT(blue.b, blue.r);
  EXPECT_EQ(Rgb{}.hex(), "#ffffff");
  // Intensity grows with |score|.
  EXPECT_LT(heat_color(0.9, 1.0).g, heat_color(0.2, 1.0).g);
}

TEST(Render, MetricShadeDirection) {
  EXPECT_EQ(metric_shade(0.9, 0.1, 0.9, Direction::kHigherBetter), 1.0);
  EXPECT_EQ(metric_shade(0.1, 0.1, 0.9, Direction::kHigherBetter), 0.0);
  EXPECT_EQ(metric_shade(0.1, 0.1, 0.9, Direction::kLowerBetter), 1.0);
  EXPECT_EQ(metric_shade(0.9, 0.1, 0.9, Direction::kLowerBetter), 0.0);
  EXPECT_EQ(metric_shade(std::nullopt, 0.1, 0.9, Direction::kLowerBetter), 0.0);
  EXPECT_EQ(metric_shade(0.4, 0.4, 0.4, Direction::kHigherBetter), 0.5);
}

TEST(Render, Formats) {
  const Scorer scorer(testing::toy_model());
  InstanceInput input;
  input.input = std::string("great movie");
  const InstanceReport r = run_instance(
      scorer, config_for({Method::kLoo, Method::kLime}), input, std::nullopt, 1, 1);
  const std::string text = render(r, ReportFormat::kJson);
  EXPECT_EQ(json::parse(text), to_json(r));
  // Scores survive serialization bit for bit.
  const InstanceReport back = instance_report_from_json(json::parse(text));
  for (std::size_t m = 0; m < r.methods.size(); ++m) {
    const Vector& a = r.methods[m].explanation->scores;
    const Vector& b = back.methods[m].explanation->scores;
    for (Eigen::Index i = 0; i < a.size(); ++i) EXPECT_EQ(a(i), b(i));
  }
  const std::string table = render(r, ReportFormat::kTable);
  EXPECT_NE(table.find("aopc_compr"), std::string::npos);
  const std::string html = render(r, ReportFormat::kHtml);
  EXPECT_NE(html.find("<html"), std::string::npos);
  EXPECT_NE(html.find("great"), std::string::npos);
  input.input = std::string("great");
  const InstanceReport single = run_instance(
      scorer, config_for({Method::kLoo}), input, std::nullopt, 1, 1);
  EXPECT_FALSE(single.methods[0].value(Metric::kTaucorrLoo));
  EXPECT_NE(render(single, ReportFormat::kTable).find("n/a"), std::string::npos);
  EXPECT_EQ(parse_report_format("html"), ReportFormat::kHtml);
  EXPECT_THROW(parse_report_format("pdf"), ConfigError);
}

}  // namespace
}  // namespace xaibench
