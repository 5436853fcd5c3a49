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

// Rationale-annotated corpora in one normalized JSONL form:
//
//   {"id": str, "words": [str], "label_name": str, "label_index": int,
//    "rationale": [0|1], "split": "train"|"validation"|"test"}
//
// Public releases enter only through the converters.

#ifndef XAIBENCH_DATASETS_H_
#define XAIBENCH_DATASETS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "xaibench/metrics.h"
#include "xaibench/model.h"

namespace xaibench {

enum class Split { kTrain, kValidation, kTest };

std::string_view split_name(Split split);
Split parse_split(std::string_view name);

struct RationaleInstance {
  std::string id;
  std::vector<std::string> words;
  std::string label_name;
  int label_index = 0;
  std::vector<bool> word_rationale;
  Split split = Split::kTest;

  int rationale_length() const;
  friend bool operator==(const RationaleInstance&,
                         const RationaleInstance&) = default;
};

struct Corpus {
  std::string name;
  // Label names in index order.
  std::vector<std::string> labels;
  std::vector<RationaleInstance> instances;
  // Round-half-up mean rationale length over non-empty rationales, min 1.
  int avg_rationale_len = 1;
};

int average_rationale_length(const std::vector<RationaleInstance>& instances);

nlohmann::json to_json(const RationaleInstance& instance);
// Throws ParseError on schema violations and ValidationError when the
// rationale and word lengths differ.
RationaleInstance instance_from_json(const nlohmann::json& record);

// Labels are collected from (label_index, label_name) pairs; the corpus name
// defaults to the file stem.
Corpus load_corpus_jsonl(const std::string& path);
void save_corpus_jsonl(const Corpus& corpus, const std::string& path);

// Label order of the converted HateXplain corpus.
inline const std::vector<std::string> kHateXplainLabels = {"hateful", "normal",
                                                           "offensive"};

enum class RationaleAggregation { kMajority, kUnion };

struct HateXplainOptions {
  RationaleAggregation aggregation = RationaleAggregation::kMajority;
  // Optional post_id_divisions.json ({"train": [...], "val": [...],
  // "test": [...]}). Posts not listed there default to the test split.
  std::optional<std::string> divisions_path;
};

// Majority label over annotators (posts without a strict majority are
// skipped); a word is in the rationale when at least ceil(A/2) of the A
// rationale annotators marked it (any annotator with kUnion).
Corpus convert_hatexplain(const std::string& raw_json_path,
                          const std::string& out_path,
                          const HateXplainOptions& options = {});

// ERASER movie reviews: `docs_dir` holds one whitespace-tokenized document
// per docid, `annotations_path` is a {train,val,test}.jsonl file of evidence
// spans [start_token, end_token). NEG/POS map to 0/1.
Corpus convert_movies_eraser(const std::string& docs_dir,
                             const std::string& annotations_path,
                             const std::string& out_path);

struct AlignedRationale {
  HumanRationale rationale;
  // Rationale words lost to truncation.
  int dropped_words = 0;
};

// Marks every sub-word piece of a rationale word. Requires word_ids.
AlignedRationale align_rationale(const RationaleInstance& instance,
                                 const TokenizedInput& tokenized);

}  // namespace xaibench

#endif  // XAIBENCH_DATASETS_H_
