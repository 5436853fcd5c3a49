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

#include <fstream>
#include <map>

#include "test_support.h"
#include "xaibench/datasets.h"

namespace xaibench {
namespace {

using nlohmann::json;
using testing::TempDir;
using testing::data_path;

std::string record(const std::string& id, std::vector<std::string> words,
                   std::vector<int> rationale, int label = 1,
                   const std::string& split = "test") {
  return json{{"id", id},
              {"words", words},
              {"label_name", label ? "positive" : "negative"},
              {"label_index", label},
              {"rationale", rationale},
              {"split", split}}
             .dump();
}

TEST(Corpus, AverageRationaleLength) {
  TempDir dir;
  dir.write("a.jsonl", record("x", {"a", "b", "c", "d"}, {1, 1, 0, 0}) + "\n" +
                           record("y", {"a", "b", "c", "d"}, {1, 1, 1, 1}) + "\n");
  EXPECT_EQ(load_corpus_jsonl(dir.file("a.jsonl")).avg_rationale_len, 3);

  dir.write("b.jsonl", record("x", {"a", "b"}, {0, 0}) + "\n" +
                           record("y", {"c"}, {0}) + "\n");
  EXPECT_EQ(load_corpus_jsonl(dir.file("b.jsonl")).avg_rationale_len, 1);

  // 1.5 rounds half up; empty rationales do not count.
  dir.write("c.jsonl", record("x", {"a", "b"}, {1, 0}) + "\n" +
                           record("y", {"a", "b"}, {1, 1}) + "\n" +
                           record("z", {"a", "b"}, {0, 0}) + "\n");
  EXPECT_EQ(load_corpus_jsonl(dir.file("c.jsonl")).avg_rationale_len, 2);
}

TEST(Corpus, LoadSaveRoundTrip) {
  const Corpus c = load_corpus_jsonl(data_path("sentiment.jsonl"));
  EXPECT_EQ(c.name, "sentiment");
  EXPECT_EQ(c.instances.size(), 12u);
  EXPECT_EQ(c.labels, (std::vector<std::string>{"negative", "positive"}));
  TempDir dir;
  save_corpus_jsonl(c, dir.file("copy.jsonl"));
  const Corpus back = load_corpus_jsonl(dir.file("copy.jsonl"));
  EXPECT_EQ(back.instances, c.instances);
  EXPECT_EQ(back.avg_rationale_len, c.avg_rationale_len);
  // Saving is a fixed point.
  save_corpus_jsonl(back, dir.file("again.jsonl"));
  EXPECT_EQ(testing::read_file(dir.file("again.jsonl")),
            testing::read_file(dir.file("copy.jsonl")));
}

TEST(Corpus, ParseErrorCarriesLineNumber) {
  TempDir dir;
  dir.write("bad.jsonl", record("x", {"a"}, {1}) + "\n\n{\"id\": 3}\n");
  try {
    load_corpus_jsonl(dir.file("bad.jsonl"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
  }
  dir.write("garbage.jsonl", "not json\n");
  EXPECT_THROW(load_corpus_jsonl(dir.file("garbage.jsonl")), ParseError);
  EXPECT_THROW(load_corpus_jsonl(dir.file("missing.jsonl")), DataError);
}

TEST(Corpus, RationaleLengthMismatchNamesInstance) {
  TempDir dir;
  dir.write("bad.jsonl", record("doc-42", {"a", "b"}, {1}) + "\n");
  try {
    load_corpus_jsonl(dir.file("bad.jsonl"));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("doc-42"), std::string::npos);
  }
}

TEST(Corpus, DuplicateIdsAndBadSplitsRejected) {
  TempDir dir;
  dir.write("dup.jsonl", record("x", {"a"}, {1}) + "\n" + record("x", {"b"}, {0}) + "\n");
  EXPECT_THROW(load_corpus_jsonl(dir.file("dup.jsonl")), DataError);
  dir.write("split.jsonl", record("x", {"a"}, {1}, 1, "holdout") + "\n");
  EXPECT_THROW(load_corpus_jsonl(dir.file("split.jsonl")), DataError);
  EXPECT_EQ(parse_split("val"), Split::kValidation);
  EXPECT_EQ(parse_split("dev"), Split::kValidation);
  EXPECT_EQ(split_name(Split::kValidation), "validation");
}

// Majority label and rationale threshold recomputed from the raw fixture.
struct HateXplainOracle {
  std::map<std::string, std::string> label;
  std::map<std::string, std::vector<bool>> mask;
  int skipped = 0;
};

HateXplainOracle hatexplain_oracle(const json& raw, bool union_rule) {
  HateXplainOracle o;
  for (const auto& [id, post] : raw.items()) {
    std::map<std::string, int> votes;
    for (const auto& a : post["annotators"]) {
      std::string l = a["label"];
      if (l == "hatespeech") l = "hateful";
      ++votes[l];
    }
    std::string winner;
    for (const auto& [l, c] : votes) {
      if (2 * c > static_cast<int>(post["annotators"].size())) winner = l;
    }
    if (winner.empty()) {
      ++o.skipped;
      continue;
    }
    o.label[id] = winner;
    const auto words = post["post_tokens"].size();
    std::vector<bool> m(words, false);
    const auto& rs = post["rationales"];
    if (winner != "normal" && !rs.empty()) {
      const int a = static_cast<int>(rs.size());
      const int need = union_rule ? 1 : (a % 2 ? a / 2 + 1 : a / 2);
      for (std::size_t w = 0; w < words; ++w) {
        int marks = 0;
        for (const auto& r : rs) marks += r[w].get<int>();
        m[w] = marks >= need;
      }
    }
    o.mask[id] = m;
  }
  return o;
}

TEST(HateXplain, FixtureMatchesOracle) {
  std::ifstream in(data_path("hatexplain_sample.json"));
  const json raw = json::parse(in);
  ASSERT_EQ(raw.size(), 20u);
  TempDir dir;
  for (bool union_rule : {false, true}) {
    HateXplainOptions options;
    options.aggregation =
        union_rule ? RationaleAggregation::kUnion : RationaleAggregation::kMajority;
    const Corpus c = convert_hatexplain(data_path("hatexplain_sample.json"),
                                        dir.file("hx.jsonl"), options);
    const HateXplainOracle o = hatexplain_oracle(raw, union_rule);
    EXPECT_GT(o.skipped, 0);
    EXPECT_EQ(c.instances.size(), o.label.size());
    EXPECT_EQ(c.labels, kHateXplainLabels);
    for (const auto& inst : c.instances) {
      EXPECT_EQ(inst.label_name, o.label.at(inst.id)) << inst.id;
      EXPECT_EQ(kHateXplainLabels[inst.label_index], inst.label_name);
      EXPECT_EQ(inst.word_rationale, o.mask.at(inst.id)) << inst.id;
      if (inst.label_name == "normal") {
        EXPECT_EQ(inst.rationale_length(), 0);
      }
      EXPECT_EQ(inst.split, Split::kTest);
    }
    const Corpus back = load_corpus_jsonl(dir.file("hx.jsonl"));
    EXPECT_EQ(back.instances, c.instances);
  }
}

TEST(HateXplain, DivisionsAssignSplits) {
  TempDir dir;
  HateXplainOptions options;
  options.divisions_path = data_path("hatexplain_divisions.json");
  const Corpus c = convert_hatexplain(data_path("hatexplain_sample.json"),
                                      dir.file("hx.jsonl"), options);
  std::map<std::string, Split> split;
  for (const auto& inst : c.instances) split[inst.id] = inst.split;
  EXPECT_EQ(split.at("post_00"), Split::kTrain);
  EXPECT_EQ(split.at("post_03"), Split::kValidation);
  EXPECT_EQ(split.at("post_10"), Split::kTest);
}

TEST(HateXplain, DecisionRules) {
  const json raw = json::parse(R"({
    "a": {"post_id": "a", "post_tokens": ["x", "y", "z", "w"],
          "annotators": [{"label": "hatespeech"}, {"label": "hatespeech"},
                         {"label": "normal"}],
          "rationales": [[0, 0, 0, 1], [0, 1, 0, 0]]},
    "b": {"post_id": "b", "post_tokens": ["x"],
          "annotators": [{"label": "hatespeech"}, {"label": "offensive"},
                         {"label": "normal"}],
          "rationales": [[1]]},
    "c": {"post_id": "c", "post_tokens": ["x", "y"],
          "annotators": [{"label": "normal"}, {"label": "normal"},
                         {"label": "offensive"}],
          "rationales": [[1, 1]]}
  })");
  TempDir dir;
  dir.write("raw.json", raw.dump());
  const Corpus c = convert_hatexplain(dir.file("raw.json"), dir.file("out.jsonl"));
  ASSERT_EQ(c.instances.size(), 2u);
  EXPECT_EQ(c.instances[0].id, "a");
  EXPECT_EQ(c.instances[0].label_name, "hateful");
  // Two rationale annotators: one mark reaches ceil(2/2) = 1.
  EXPECT_EQ(c.instances[0].word_rationale,
            (std::vector<bool>{false, true, false, true}));
  EXPECT_EQ(c.instances[1].label_name, "normal");
  EXPECT_EQ(c.instances[1].rationale_length(), 0);
}

TEST(HateXplain, MissingFieldsAreParseErrors) {
  TempDir dir;
  dir.write("raw.json", R"({"a": {"post_id": "a", "annotators": []}})");
  EXPECT_THROW(convert_hatexplain(dir.file("raw.json"), dir.file("o.jsonl")),
               ParseError);
  dir.write("raw2.json", R"({"a": {"post_id": "a", "post_tokens": ["x"],
      "annotators": [{"label": "spam"}]}})");
  EXPECT_THROW(convert_hatexplain(dir.file("raw2.json"), dir.file("o.jsonl")),
               ParseError);
}

TEST(Movies, FixtureSpans) {
  TempDir dir;
  const Corpus c = convert_movies_eraser(data_path("movies/docs"),
                                         data_path("movies/test.jsonl"),
                                         dir.file("movies.jsonl"));
  ASSERT_EQ(c.instances.size(), 4u);
  const auto& neg = c.instances[0];
  EXPECT_EQ(neg.label_index, 0);
  EXPECT_EQ(neg.label_name, "negative");
  EXPECT_EQ(neg.split, Split::kTest);
  EXPECT_EQ(neg.words[3], "dull");
  EXPECT_TRUE(neg.word_rationale[3]);
  EXPECT_EQ(neg.rationale_length(), 3);
  EXPECT_EQ(c.instances[3].label_index, 1);
  EXPECT_EQ(c.avg_rationale_len, 3);  // (3 + 2 + 3 + 4) / 4
  EXPECT_EQ(load_corpus_jsonl(dir.file("movies.jsonl")).instances, c.instances);
}

TEST(Movies, SpanFillOverlapAndBounds) {
  TempDir dir;
  std::filesystem::create_directories(dir.file("docs"));
  dir.write("docs/d1", "w0 w1 w2 w3 w4 w5 w6 w7 w8 w9");
  auto ev = [](int s, int e) {
    return json::array({json{{"docid", "d1"}, {"start_token", s}, {"end_token", e}}});
  };
  auto write_ann = [&](const json& evidences) {
    dir.write("train.jsonl", json{{"annotation_id", "d1"},
                                  {"classification", "POS"},
                                  {"evidences", evidences}}
                                     .dump() +
                                 "\n");
  };
  write_ann(json::array({ev(2, 5)}));
  Corpus c = convert_movies_eraser(dir.file("docs"), dir.file("train.jsonl"),
                                   dir.file("o.jsonl"));
  EXPECT_EQ(c.instances[0].word_rationale,
            (std::vector<bool>{0, 0, 1, 1, 1, 0, 0, 0, 0, 0}));
  EXPECT_EQ(c.instances[0].split, Split::kTrain);

  write_ann(json::array({ev(2, 5), ev(4, 7)}));
  c = convert_movies_eraser(dir.file("docs"), dir.file("train.jsonl"),
                            dir.file("o.jsonl"));
  EXPECT_EQ(c.instances[0].rationale_length(), 5);

  write_ann(json::array());
  c = convert_movies_eraser(dir.file("docs"), dir.file("train.jsonl"),
                            dir.file("o.jsonl"));
  EXPECT_EQ(c.instances[0].rationale_length(), 0);

  write_ann(json::array({ev(8, 11)}));
  EXPECT_THROW(convert_movies_eraser(dir.file("docs"), dir.file("train.jsonl"),
                                     dir.file("o.jsonl")),
               ValidationError);
}

ModelHandle subword_model(int max_length = 512) {
  LexiconModelConfig config = default_sentiment_lexicon();
  config.subword = true;
  config.max_length = max_length;
  return make_builtin_lexicon(config);
}

RationaleInstance instance(std::vector<std::string> words,
                           std::vector<bool> mask) {
  RationaleInstance inst;
  inst.id = "i";
  inst.words = std::move(words);
  inst.word_rationale = std::move(mask);
  return inst;
}

TEST(Align, SubwordPiecesAllMarked) {
  const ModelHandle model = subword_model();
  const RationaleInstance inst = instance({"so", "unbelievable"}, {false, true});
  const TokenizedInput x = tokenize_one(*model, inst.words);
  const AlignedRationale a = align_rationale(inst, x);
  EXPECT_EQ(a.rationale.mask, (std::vector<bool>{false, true, true, true}));
  EXPECT_EQ(a.dropped_words, 0);
}

TEST(Align, IdentityWithoutSplitting) {
  const ModelHandle model = make_builtin_lexicon(default_sentiment_lexicon());
  const RationaleInstance inst =
      instance({"a", "great", "movie"}, {false, true, true});
  const TokenizedInput x = tokenize_one(*model, inst.words);
  EXPECT_EQ(align_rationale(inst, x).rationale.mask, inst.word_rationale);
}

TEST(Align, TruncationDropsWordsWithCount) {
  const ModelHandle model = subword_model(5);
  TokenizeOptions options;
  options.truncate = true;
  const RationaleInstance inst =
      instance({"fine", "unbelievable", "great"}, {false, false, true});
  const TokenizedInput x = tokenize_one(*model, inst.words, options);
  ASSERT_TRUE(x.truncated);
  const AlignedRationale a = align_rationale(inst, x);
  EXPECT_EQ(a.dropped_words, 1);
  EXPECT_EQ(a.rationale.mask.size(), static_cast<std::size_t>(x.num_content()));
  EXPECT_EQ(a.rationale.count(), 0);
}

TEST(Align, RequiresWordIds) {
  const ModelHandle model = subword_model();
  const RationaleInstance inst = instance({"great", "movie"}, {true, false});
  const TokenizedInput x = tokenize_one(*model, std::string("great movie"));
  EXPECT_THROW(align_rationale(inst, x), AlignmentError);
}

TEST(Align, NeverMarksSpecialsAndNeverShrinks) {
  const ModelHandle model = subword_model();
  const Corpus c = load_corpus_jsonl(data_path("sentiment.jsonl"));
  for (const auto& inst : c.instances) {
    const TokenizedInput x = tokenize_one(*model, inst.words);
    const AlignedRationale a = align_rationale(inst, x);
    EXPECT_EQ(a.rationale.mask.size(), static_cast<std::size_t>(x.num_content()));
    EXPECT_GE(a.rationale.count(), inst.rationale_length());
  }
}

}  // namespace
}  // namespace xaibench
