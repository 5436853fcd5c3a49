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


#include "cli.h"

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "xaibench/bench.h"
#include "xaibench/datasets.h"
#include "xaibench/report.h"
#include "xaibench/wire_server.h"

namespace xaibench {
namespace {

constexpr const char* kAllMethodList = "g,gxi,ig,igxi,lime,shap,loo";

struct ModelFlags {
  std::string model;
  std::string lexicon;
};

struct RunFlags {
  std::string methods = kAllMethodList;
  std::string metrics;
  std::string removal = "delete";
  std::uint64_t seed = 42;
  int ig_steps = 50;
  int lime_samples = 1000;
  bool timing = false;
};

void add_model_flags(CLI::App* app, ModelFlags& flags) {
  app->add_option("--model", flags.model,
                  "builtin:lexicon, builtin:lexicon-subword or remote:URL "
                  "(default: remote:$XAI_BENCH_MODEL_URL)");
  app->add_option("--lexicon", flags.lexicon,
                  "JSON weights file for builtin lexicon models");
}

void add_run_flags(CLI::App* app, RunFlags& flags) {
  app->add_option("--methods", flags.methods, "comma-separated methods")
      ->capture_default_str();
  app->add_option("--metrics", flags.metrics,
                  "comma-separated metrics (default: all)");
  app->add_option("--removal", flags.removal, "delete or mask")
      ->capture_default_str();
  app->add_option("--seed", flags.seed, "seed for sampling explainers")
      ->capture_default_str();
  app->add_option("--ig-steps", flags.ig_steps, "integrated gradients steps")
      ->capture_default_str();
  app->add_option("--lime-samples", flags.lime_samples, "LIME samples")
      ->capture_default_str();
  app->add_flag("--timing", flags.timing, "record wall-clock time per instance");
}

ModelSpec model_spec(const ModelFlags& flags) {
  ModelSpec spec = parse_model_spec(flags.model);
  if (!flags.lexicon.empty()) {
    if (spec.kind != ModelSpec::Kind::kBuiltin) {
      throw ConfigError("--lexicon applies to builtin models only");
    }
    spec.lexicon_path = flags.lexicon;
  }
  return spec;
}

std::vector<Metric> parse_metric_list(const std::string& list) {
  if (list.empty()) return {std::begin(kAllMetrics), std::end(kAllMetrics)};
  std::vector<Metric> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(parse_metric(item));
  }
  return out;
}

RunConfig run_config(const ModelSpec& spec, const RunFlags& flags) {
  RunConfig config;
  config.model = spec.to_string();
  config.methods = parse_methods(flags.methods);
  config.metrics = parse_metric_list(flags.metrics);
  config.removal = parse_removal(flags.removal);
  config.seed = flags.seed;
  config.explainer.integrated_gradients.steps = flags.ig_steps;
  config.explainer.lime.n_samples = flags.lime_samples;
  config.record_timing = flags.timing;
  return config;
}

void write_output(const std::string& path, const std::string& text,
                  std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write " + path);
  file << text;
  if (!file.flush()) throw ConfigError("failed writing " + path);
}

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> words;
  std::istringstream in(text);
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

std::vector<bool> parse_mask(const std::string& text) {
  nlohmann::json body;
  try {
    body = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("--rationale is not JSON: ") + e.what());
  }
  if (!body.is_array()) throw ParseError("--rationale must be a JSON array");
  std::vector<bool> mask;
  for (const auto& v : body) {
    if (v.is_boolean()) {
      mask.push_back(v.get<bool>());
    } else if (v.is_number_integer() && (v == 0 || v == 1)) {
      mask.push_back(v == 1);
    } else {
      throw ParseError("--rationale entries must be 0/1 or booleans");
    }
  }
  return mask;
}

struct Cli {
  CLI::App app{"Explain and evaluate text classifiers"};

  ModelFlags model_flags;
  RunFlags run_flags;
  std::string text;
  std::optional<int> target;
  std::string rationale;
  std::string out_path;
  std::string format = "table";

  std::string corpus;
  std::string label;
  std::string split;
  std::optional<int> sample;
  std::string target_policy = "gold";
  int workers = 1;
  std::string html_path;
  bool include_truncated = true;

  std::string source;
  std::string in_path;
  std::string docs_dir;
  std::string divisions;
  std::string aggregation = "majority";

  std::string host = "127.0.0.1";
  int port = 8080;
  int max_batch = 0;

  CLI::App* explain = nullptr;
  CLI::App* evaluate = nullptr;
  CLI::App* benchmark = nullptr;
  CLI::App* convert = nullptr;
  CLI::App* serve = nullptr;

  Cli() {
    app.require_subcommand(1);
    for (auto** sub : {&explain, &evaluate}) {
      const bool is_eval = sub == &evaluate;
      *sub = app.add_subcommand(
          is_eval ? "evaluate" : "explain",
          is_eval ? "explain ad-hoc text and score the explanations"
                  : "explain ad-hoc text");
      add_model_flags(*sub, model_flags);
      add_run_flags(*sub, run_flags);
      (*sub)->add_option("--text", text, "input text")->required();
      (*sub)->add_option("--target", target,
                         "class index (default: predicted class)");
      (*sub)->add_option("--out", out_path, "output path (default: stdout)");
      (*sub)
          ->add_option("--format", format, "table, json or html")
          ->capture_default_str();
      if (is_eval) {
        (*sub)->add_option("--rationale", rationale,
                           "JSON 0/1 mask over whitespace-separated words");
      }
    }

    benchmark = app.add_subcommand("benchmark", "evaluate over a corpus");
    add_model_flags(benchmark, model_flags);
    add_run_flags(benchmark, run_flags);
    benchmark->add_option("--corpus", corpus, "normalized JSONL corpus")
        ->required();
    benchmark->add_option("--label", label, "keep instances with this label");
    benchmark->add_option("--split", split, "train, validation or test");
    benchmark->add_option("--sample", sample, "number of instances to draw");
    benchmark->add_option("--target", target_policy, "gold or a class index")
        ->capture_default_str();
    benchmark->add_option("--workers", workers, "concurrent instances")
        ->capture_default_str();
    benchmark->add_option("--out", out_path, "JSON report path")->required();
    benchmark->add_option("--html", html_path, "HTML report path");

    CLI::App* dataset = app.add_subcommand("dataset", "corpus tools");
    dataset->require_subcommand(1);
    convert = dataset->add_subcommand("convert", "normalize a public release");
    convert->add_option("source", source, "hatexplain or movies")
        ->required()
        ->check(CLI::IsMember({"hatexplain", "movies"}));
    convert->add_option("--in", in_path,
                        "hatexplain: dataset.json; movies: annotation JSONL")
        ->required();
    convert->add_option("--out", out_path, "output JSONL")->required();
    convert->add_option("--docs", docs_dir,
                        "movies: document directory (default: <in>/../docs)");
    convert->add_option("--divisions", divisions,
                        "hatexplain: post_id_divisions.json");
    convert->add_option("--aggregation", aggregation, "majority or union")
        ->capture_default_str()
        ->check(CLI::IsMember({"majority", "union"}));

    serve = app.add_subcommand("serve", "serve a builtin model over HTTP");
    add_model_flags(serve, model_flags);
    serve->add_option("--host", host)->capture_default_str();
    serve->add_option("--port", port)->capture_default_str();
    serve->add_option("--max-batch", max_batch, "advertised batch limit");
  }

  int run_adhoc(std::ostream& out, bool with_metrics) {
    const ReportFormat fmt = parse_report_format(format);
    const ModelSpec spec = model_spec(model_flags);
    RunConfig config = run_config(spec, run_flags);
    config.truncate = false;
    const ModelHandle model = open_model(spec);
    config.validate(model->info());
    const Scorer scorer(model, nullptr, config.removal);

    InstanceInput input;
    if (!rationale.empty()) {
      if (!with_metrics) throw ConfigError("--rationale needs evaluate");
      input.input = split_words(text);
      input.word_rationale = parse_mask(rationale);
    } else {
      input.input = text;
    }
    // K for ad-hoc text: the human rationale length when known.
    int top_k = 1;
    if (input.word_rationale) {
      top_k = std::max<int>(1, std::count(input.word_rationale->begin(),
                                          input.word_rationale->end(), true));
    }
    const InstanceReport report = run_instance(
        scorer, config, input, target, top_k, config.seed, with_metrics);
    write_output(out_path, render(report, fmt), out);
    return kExitOk;
  }

  int run_benchmark(std::ostream& out) {
    const ModelSpec spec = model_spec(model_flags);
    RunConfig config = run_config(spec, run_flags);
    config.target = parse_target_policy(target_policy);
    config.workers = workers;
    config.sample.count = sample;
    config.sample.seed = run_flags.seed;
    if (!label.empty()) config.sample.label = label;
    if (!split.empty()) config.sample.split = parse_split(split);

    const Corpus data = load_corpus_jsonl(corpus);
    const ModelHandle model = open_model(spec);
    const Scorer scorer(model, nullptr, config.removal);
    const DatasetReport report = run_dataset(scorer, config, data);
    write_output(out_path, render(report, ReportFormat::kJson), out);
    if (!html_path.empty()) {
      write_output(html_path, render(report, ReportFormat::kHtml), out);
    }
    out << render(report, ReportFormat::kTable);
    return kExitOk;
  }

  int run_convert(std::ostream& out) {
    Corpus result;
    if (source == "hatexplain") {
      HateXplainOptions options;
      options.aggregation = aggregation == "union"
                                ? RationaleAggregation::kUnion
                                : RationaleAggregation::kMajority;
      if (!divisions.empty()) options.divisions_path = divisions;
      result = convert_hatexplain(in_path, out_path, options);
    } else {
      std::string docs = docs_dir;
      if (docs.empty()) {
        docs = (std::filesystem::path(in_path).parent_path() / "docs").string();
      }
      result = convert_movies_eraser(docs, in_path, out_path);
    }
    out << "wrote " << result.instances.size() << " instances to " << out_path
        << " (avg rationale length " << result.avg_rationale_len << ")\n";
    return kExitOk;
  }

  int run_serve(std::ostream& out) {
    const ModelSpec spec = model_spec(model_flags);
    if (spec.kind != ModelSpec::Kind::kBuiltin) {
      throw ConfigError("serve wraps builtin models only");
    }
    WireServer server(open_model(spec), max_batch);
    const int bound = server.bind(host, port);
    out << "serving " << spec.to_string() << " on http://" << host << ":"
        << bound << std::endl;
    server.serve();
    return kExitOk;
  }

  int dispatch(std::ostream& out) {
    if (*explain) return run_adhoc(out, false);
    if (*evaluate) return run_adhoc(out, true);
    if (*benchmark) return run_benchmark(out);
    if (*convert) return run_convert(out);
    if (*serve) return run_serve(out);
    return kExitConfig;
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  Cli cli;
  try {
    cli.app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << cli.app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << cli.app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    return cli.dispatch(out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const TransportError& e) {
    err << "transport error: " << e.what() << "\n";
    return kExitTransport;
  } catch (const ProtocolError& e) {
    err << "protocol error: " << e.what() << "\n";
    return kExitTransport;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace xaibench
