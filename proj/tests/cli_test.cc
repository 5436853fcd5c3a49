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

#include <cstdlib>
#include <sstream>

#include "cli.h"
#include "test_support.h"
#include "xaibench/bench.h"
#include "xaibench/wire_server.h"

namespace xaibench {
namespace {

using nlohmann::json;
using testing::TempDir;
using testing::data_path;
using testing::read_file;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "xai-bench");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

TEST(Cli, ExplainBuiltin) {
  const CliRun r = cli({"explain", "--model", "builtin:lexicon", "--text",
                     "great movie", "--methods", "loo,partition_shap",
                     "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["tokens"], json::parse(R"(["great", "movie"])"));
  ASSERT_EQ(j["methods"].size(), 2u);
  for (const auto& m : j["methods"]) {
    EXPECT_TRUE(m["error"].is_null());
    // explain does not evaluate.
    EXPECT_TRUE(m["scores"].empty());
  }
}

TEST(Cli, EvaluateWithRationale) {
  const CliRun r = cli({"evaluate", "--model", "builtin:lexicon", "--text",
                     "great movie", "--methods", "loo", "--rationale", "[1, 0]",
                     "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["top_k"], 1);
  std::map<std::string, double> scores;
  for (const auto& s : j["methods"][0]["scores"]) {
    scores[s["metric"]] = s["value"].get<double>();
  }
  EXPECT_NEAR(scores.at("aopc_compr"), testing::sigmoid(2) - 0.5, 1e-12);
  EXPECT_EQ(scores.at("token_iou"), 1.0);
}

TEST(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(cli({"explain", "--model", "builtin:lexicon", "--text", "x",
                 "--methods", "attention"}).code,
            kExitConfig);
  EXPECT_EQ(cli({"explain", "--model", "builtin:nope", "--text", "x"}).code,
            kExitConfig);
  EXPECT_EQ(cli({"explain", "--model", "builtin:lexicon"}).code, kExitConfig);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitConfig);
  EXPECT_EQ(cli({"evaluate", "--model", "builtin:lexicon", "--text",
                 "great movie", "--rationale", "[1]"}).code,
            kExitData);
  EXPECT_EQ(cli({"explain", "--model", "builtin:lexicon", "--text", "x",
                 "--target", "7"}).code,
            kExitConfig);
}

TEST(Cli, MissingModelUsesEnvironment) {
  ::unsetenv("XAI_BENCH_MODEL_URL");
  EXPECT_EQ(cli({"explain", "--text", "great movie"}).code, kExitConfig);

  WireServer server(make_builtin_lexicon(default_sentiment_lexicon()));
  const int port = server.bind("127.0.0.1", 0);
  server.start();
  ::setenv("XAI_BENCH_MODEL_URL",
           ("http://127.0.0.1:" + std::to_string(port)).c_str(), 1);
  const CliRun remote = cli({"explain", "--text", "great movie", "--methods",
                          "loo", "--format", "json"});
  ::unsetenv("XAI_BENCH_MODEL_URL");
  ASSERT_EQ(remote.code, kExitOk) << remote.err;
  const CliRun local = cli({"explain", "--model", "builtin:lexicon", "--text",
                         "great movie", "--methods", "loo", "--format", "json"});
  EXPECT_EQ(json::parse(remote.out)["methods"], json::parse(local.out)["methods"]);
}

TEST(Cli, UnreachableModelExitsThree) {
  const CliRun r = cli({"explain", "--model", "remote:http://127.0.0.1:1",
                     "--text", "great movie"});
  EXPECT_EQ(r.code, kExitTransport);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, DataErrorsExitFour) {
  TempDir dir;
  dir.write("bad.jsonl", "{\"id\": \"x\"}\n");
  EXPECT_EQ(cli({"benchmark", "--model", "builtin:lexicon", "--corpus",
                 dir.file("bad.jsonl"), "--out", dir.file("r.json")}).code,
            kExitData);
  EXPECT_EQ(cli({"benchmark", "--model", "builtin:lexicon", "--corpus",
                 dir.file("missing.jsonl"), "--out", dir.file("r.json")}).code,
            kExitData);
}

TEST(Cli, DatasetConvert) {
  TempDir dir;
  CliRun r = cli({"dataset", "convert", "hatexplain", "--in",
               data_path("hatexplain_sample.json"), "--out", dir.file("hx.jsonl"),
               "--divisions", data_path("hatexplain_divisions.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Corpus hx = load_corpus_jsonl(dir.file("hx.jsonl"));
  EXPECT_EQ(hx.instances.size(), 16u);
  EXPECT_EQ(hx.labels, kHateXplainLabels);

  r = cli({"dataset", "convert", "movies", "--in", data_path("movies/test.jsonl"),
           "--out", dir.file("m.jsonl")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(load_corpus_jsonl(dir.file("m.jsonl")).instances.size(), 4u);

  EXPECT_EQ(cli({"dataset", "convert", "imdb", "--in", "x", "--out",
                 dir.file("o.jsonl")}).code,
            kExitConfig);
}

TEST(Cli, BenchmarkWritesReports) {
  TempDir dir;
  const std::vector<std::string> args = {
      "benchmark",  "--model",   "builtin:lexicon",
      "--corpus",   data_path("sentiment.jsonl"),
      "--methods",  "lime,partition_shap,gradient_x_input",
      "--sample",   "6",         "--seed", "11",
      "--workers",  "3",         "--lime-samples", "300"};
  auto with_out = [&](const std::string& name) {
    auto a = args;
    a.insert(a.end(), {"--out", dir.file(name), "--html", dir.file(name + ".html")});
    return a;
  };
  const CliRun first = cli(with_out("a.json"));
  ASSERT_EQ(first.code, kExitOk) << first.err;
  EXPECT_NE(first.out.find("partition_shap"), std::string::npos);
  ASSERT_EQ(cli(with_out("b.json")).code, kExitOk);
  EXPECT_EQ(read_file(dir.file("a.json")), read_file(dir.file("b.json")));
  const DatasetReport report =
      dataset_report_from_json(json::parse(read_file(dir.file("a.json"))));
  EXPECT_EQ(report.instances.size(), 6u);
  EXPECT_EQ(report.sample.seed, 11u);
  EXPECT_EQ(report.target_policy, "gold");
  EXPECT_NE(read_file(dir.file("a.json.html")).find("<table"), std::string::npos);
}

TEST(Cli, BenchmarkGoldLabelsOutOfRange) {
  TempDir dir;
  ASSERT_EQ(cli({"dataset", "convert", "hatexplain", "--in",
                 data_path("hatexplain_sample.json"), "--out",
                 dir.file("hx.jsonl")}).code,
            kExitOk);
  EXPECT_EQ(cli({"benchmark", "--model", "builtin:lexicon", "--corpus",
                 dir.file("hx.jsonl"), "--out", dir.file("r.json")}).code,
            kExitConfig);
}

}  // namespace
}  // namespace xaibench
