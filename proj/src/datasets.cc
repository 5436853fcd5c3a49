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

#include "xaibench/datasets.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace xaibench {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

// Builds the label list from the instances, checking index/name agreement.
std::vector<std::string> collect_labels(
    const std::vector<RationaleInstance>& instances) {
  std::map<int, std::string> names;
  for (const auto& inst : instances) {
    auto [it, inserted] = names.emplace(inst.label_index, inst.label_name);
    if (!inserted && it->second != inst.label_name) {
      throw ValidationError("instance " + inst.id + ": label index " +
                            std::to_string(inst.label_index) + " is named '" +
                            it->second + "' elsewhere");
    }
  }
  const int count = names.empty() ? 0 : names.rbegin()->first + 1;
  std::vector<std::string> labels(std::max(count, 0));
  for (int i = 0; i < count; ++i) {
    auto it = names.find(i);
    labels[i] = it == names.end() ? "label_" + std::to_string(i) : it->second;
  }
  return labels;
}

Corpus finish_corpus(std::string name, std::vector<std::string> labels,
                     std::vector<RationaleInstance> instances) {
  Corpus corpus;
  corpus.name = std::move(name);
  corpus.labels = std::move(labels);
  corpus.avg_rationale_len = average_rationale_length(instances);
  corpus.instances = std::move(instances);
  return corpus;
}

std::string canonical_hatexplain_label(const std::string& raw) {
  if (raw == "hatespeech" || raw == "hate speech" || raw == "hateful") {
    return "hateful";
  }
  if (raw == "offensive" || raw == "normal") return raw;
  throw ParseError("unknown HateXplain label '" + raw + "'");
}

}  // namespace

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValidation:
      return "validation";
    case Split::kTest:
      return "test";
  }
  return "";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "validation" || name == "val" || name == "dev") {
    return Split::kValidation;
  }
  if (name == "test") return Split::kTest;
  throw ConfigError("unknown split '" + std::string(name) + "'");
}

int RationaleInstance::rationale_length() const {
  return static_cast<int>(
      std::count(word_rationale.begin(), word_rationale.end(), true));
}

int average_rationale_length(const std::vector<RationaleInstance>& instances) {
  long total = 0;
  long annotated = 0;
  for (const auto& inst : instances) {
    const int len = inst.rationale_length();
    if (len == 0) continue;
    total += len;
    ++annotated;
  }
  if (annotated == 0) return 1;
  // Round half up on total / annotated with integers.
  const long rounded = (2 * total + annotated) / (2 * annotated);
  return static_cast<int>(std::max(rounded, 1L));
}

Json to_json(const RationaleInstance& instance) {
  std::vector<int> rationale(instance.word_rationale.begin(),
                             instance.word_rationale.end());
  return Json{{"id", instance.id},
              {"words", instance.words},
              {"label_name", instance.label_name},
              {"label_index", instance.label_index},
              {"rationale", rationale},
              {"split", split_name(instance.split)}};
}

RationaleInstance instance_from_json(const Json& record) {
  RationaleInstance inst;
  try {
    inst.id = record.at("id").get<std::string>();
    inst.words = record.at("words").get<std::vector<std::string>>();
    inst.label_name = record.at("label_name").get<std::string>();
    inst.label_index = record.at("label_index").get<int>();
    for (const auto& bit : record.at("rationale")) {
      const int v = bit.get<int>();
      if (v != 0 && v != 1) throw ParseError("rationale bits must be 0 or 1");
      inst.word_rationale.push_back(v == 1);
    }
    inst.split = parse_split(record.value("split", std::string("test")));
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  } catch (const ConfigError& e) {
    throw ParseError(e.what());
  }
  if (inst.word_rationale.size() != inst.words.size()) {
    throw ValidationError("instance " + inst.id + ": rationale has " +
                          std::to_string(inst.word_rationale.size()) +
                          " entries for " + std::to_string(inst.words.size()) +
                          " words");
  }
  if (inst.label_index < 0) {
    throw ValidationError("instance " + inst.id + ": negative label index");
  }
  return inst;
}

Corpus load_corpus_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus " + path);
  std::vector<RationaleInstance> instances;
  std::set<std::string> ids;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json record;
    try {
      record = Json::parse(line);
    } catch (const Json::exception& e) {
      throw ParseError(path + ":" + std::to_string(line_number) + ": " +
                       e.what());
    }
    try {
      instances.push_back(instance_from_json(record));
    } catch (const ParseError& e) {
      throw ParseError(path + ":" + std::to_string(line_number) + ": " +
                       e.what());
    }
    if (!ids.insert(instances.back().id).second) {
      throw ValidationError("duplicate instance id " + instances.back().id);
    }
  }
  auto labels = collect_labels(instances);
  return finish_corpus(fs::path(path).stem().string(), std::move(labels),
                       std::move(instances));
}

void save_corpus_jsonl(const Corpus& corpus, const std::string& path) {
  std::ofstream out = open_output(path);
  for (const auto& inst : corpus.instances) out << to_json(inst).dump() << '\n';
  if (!out) throw DataError("failed writing " + path);
}

Corpus convert_hatexplain(const std::string& raw_json_path,
                          const std::string& out_path,
                          const HateXplainOptions& options) {
  const Json raw = read_json_file(raw_json_path);
  if (!raw.is_object()) throw ParseError("HateXplain release must be an object");

  std::map<std::string, Split> divisions;
  if (options.divisions_path) {
    const Json div = read_json_file(*options.divisions_path);
    for (const auto& [name, ids] : div.items()) {
      const Split split = parse_split(name);
      for (const auto& id : ids) divisions[id.get<std::string>()] = split;
    }
  }

  std::vector<RationaleInstance> instances;
  for (const auto& [key, post] : raw.items()) {
    RationaleInstance inst;
    std::vector<std::string> votes;
    std::vector<std::vector<int>> rationales;
    try {
      inst.id = post.value("post_id", key);
      inst.words = post.at("post_tokens").get<std::vector<std::string>>();
      for (const auto& annotator : post.at("annotators")) {
        votes.push_back(
            canonical_hatexplain_label(annotator.at("label").get<std::string>()));
      }
      if (post.contains("rationales")) {
        rationales = post.at("rationales").get<std::vector<std::vector<int>>>();
      }
    } catch (const Json::exception& e) {
      throw ParseError("HateXplain post " + key + ": " + e.what());
    }

    std::map<std::string, int> tally;
    for (const auto& v : votes) ++tally[v];
    const auto best = std::max_element(
        tally.begin(), tally.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    // Undecided posts (no strict majority) are skipped.
    if (best == tally.end() || 2 * best->second <= static_cast<int>(votes.size())) {
      continue;
    }
    inst.label_name = best->first;
    inst.label_index = static_cast<int>(
        std::find(kHateXplainLabels.begin(), kHateXplainLabels.end(),
                  inst.label_name) -
        kHateXplainLabels.begin());

    inst.word_rationale.assign(inst.words.size(), false);
    if (inst.label_name != "normal" && !rationales.empty()) {
      const int annotators = static_cast<int>(rationales.size());
      const int threshold = options.aggregation == RationaleAggregation::kUnion
                                ? 1
                                : (annotators + 1) / 2;
      for (std::size_t w = 0; w < inst.words.size(); ++w) {
        int marks = 0;
        for (const auto& r : rationales) {
          if (r.size() != inst.words.size()) {
            throw ValidationError("instance " + inst.id + ": rationale has " +
                                  std::to_string(r.size()) + " entries for " +
                                  std::to_string(inst.words.size()) +
                                  " tokens");
          }
          marks += r[w] != 0;
        }
        inst.word_rationale[w] = marks >= threshold;
      }
    }
    auto div = divisions.find(inst.id);
    inst.split = div == divisions.end() ? Split::kTest : div->second;
    instances.push_back(std::move(inst));
  }

  Corpus corpus = finish_corpus("hatexplain", kHateXplainLabels,
                                std::move(instances));
  save_corpus_jsonl(corpus, out_path);
  return corpus;
}

Corpus convert_movies_eraser(const std::string& docs_dir,
                             const std::string& annotations_path,
                             const std::string& out_path) {
  std::ifstream in(annotations_path);
  if (!in) throw DataError("cannot open " + annotations_path);
  const std::string stem = fs::path(annotations_path).stem().string();
  Split split = Split::kTest;
  try {
    split = parse_split(stem);
  } catch (const ConfigError&) {
    // Unrecognized file names fall back to the test split.
  }

  std::vector<RationaleInstance> instances;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where =
        annotations_path + ":" + std::to_string(line_number);
    RationaleInstance inst;
    std::vector<std::pair<int, int>> spans;
    std::string docid;
    try {
      const Json record = Json::parse(line);
      inst.id = record.at("annotation_id").get<std::string>();
      const std::string label = record.at("classification").get<std::string>();
      if (label == "NEG") {
        inst.label_index = 0;
        inst.label_name = "negative";
      } else if (label == "POS") {
        inst.label_index = 1;
        inst.label_name = "positive";
      } else {
        throw ParseError(where + ": unknown classification '" + label + "'");
      }
      docid = inst.id;
      for (const auto& group : record.value("evidences", Json::array())) {
        for (const auto& evidence : group) {
          docid = evidence.value("docid", docid);
          spans.emplace_back(evidence.at("start_token").get<int>(),
                             evidence.at("end_token").get<int>());
        }
      }
    } catch (const Json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }

    std::ifstream doc(fs::path(docs_dir) / docid);
    if (!doc) throw DataError("cannot open document " + docid + " in " + docs_dir);
    std::string word;
    while (doc >> word) inst.words.push_back(word);

    inst.word_rationale.assign(inst.words.size(), false);
    for (const auto& [start, end] : spans) {
      if (start < 0 || end > static_cast<int>(inst.words.size()) || start > end) {
        throw ValidationError("instance " + inst.id + ": evidence span [" +
                              std::to_string(start) + ", " +
                              std::to_string(end) + ") outside " +
                              std::to_string(inst.words.size()) + " tokens");
      }
      std::fill(inst.word_rationale.begin() + start,
                inst.word_rationale.begin() + end, true);
    }
    inst.split = split;
    instances.push_back(std::move(inst));
  }

  Corpus corpus =
      finish_corpus("movies", {"negative", "positive"}, std::move(instances));
  save_corpus_jsonl(corpus, out_path);
  return corpus;
}

AlignedRationale align_rationale(const RationaleInstance& instance,
                                 const TokenizedInput& tokenized) {
  if (!tokenized.word_ids) {
    throw AlignmentError("instance " + instance.id +
                         ": tokenization has no word_ids; tokenize the word "
                         "sequence instead of raw text");
  }
  AlignedRationale out;
  out.rationale.mask.assign(tokenized.content_indices.size(), false);
  std::vector<bool> seen(instance.words.size(), false);
  for (std::size_t i = 0; i < tokenized.content_indices.size(); ++i) {
    const int word = (*tokenized.word_ids)[tokenized.content_indices[i]];
    if (word < 0 || word >= static_cast<int>(instance.words.size())) {
      throw AlignmentError("instance " + instance.id + ": token maps to word " +
                           std::to_string(word) + " of " +
                           std::to_string(instance.words.size()));
    }
    seen[word] = true;
    out.rationale.mask[i] = instance.word_rationale[word];
  }
  for (std::size_t w = 0; w < instance.words.size(); ++w) {
    if (instance.word_rationale[w] && !seen[w]) ++out.dropped_words;
  }
  return out;
}

}  // namespace xaibench
