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


#include "xaibench/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

namespace xaibench {
namespace {

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string cell(std::optional<double> v) { return v ? fixed4(*v) : "n/a"; }

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Rows of text cells; first row is the header. Columns padded to the
// widest cell.
std::string aligned(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += c + 1 < row.size() ? pad(row[c], width[c] + 2) : row[c];
    }
    out += line + "\n";
  }
  return out;
}

// Column of values for one metric -> min/max over present values.
std::pair<double, double> range_of(const std::vector<std::optional<double>>& v) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& x : v) {
    if (!x) continue;
    lo = std::min(lo, *x);
    hi = std::max(hi, *x);
  }
  return {lo, hi};
}

std::string shaded_cell(std::optional<double> v, double lo, double hi,
                        Direction d) {
  const double s = metric_shade(v, lo, hi, d);
  // Gray ramp; text turns white on the darkest cells.
  const int level = static_cast<int>(std::lround(255 - 175 * s));
  Rgb bg{level, level, level};
  std::string style = "background:" + bg.hex();
  if (s > 0.6) style += ";color:#fff";
  return "<td style=\"" + style + "\">" + cell(v) + "</td>";
}

std::string html_metric_table(const std::vector<Method>& methods,
                              const std::vector<Metric>& metrics,
                              const std::function<std::optional<double>(
                                  Method, Metric)>& value,
                              const std::function<std::string(Method)>& extra) {
  std::ostringstream out;
  out << "<table class=\"metrics\">\n<tr><th>method</th>";
  for (Metric m : metrics) {
    out << "<th>" << metric_name(m)
        << (metric_direction(m) == Direction::kHigherBetter ? " &uarr;"
                                                             : " &darr;")
        << "</th>";
  }
  out << "</tr>\n";
  std::map<Metric, std::pair<double, double>> ranges;
  for (Metric m : metrics) {
    std::vector<std::optional<double>> column;
    for (Method method : methods) column.push_back(value(method, m));
    ranges[m] = range_of(column);
  }
  for (Method method : methods) {
    out << "<tr><td>" << method_name(method) << extra(method) << "</td>";
    for (Metric m : metrics) {
      out << shaded_cell(value(method, m), ranges[m].first, ranges[m].second,
                         metric_direction(m));
    }
    out << "</tr>\n";
  }
  out << "</table>\n";
  return out.str();
}

const char* kStyle =
    "<style>body{font-family:sans-serif}table{border-collapse:collapse;"
    "margin:8px 0}td,th{border:1px solid #ccc;padding:3px 8px}"
    ".tok{padding:2px 4px;margin:1px;border-radius:3px;display:inline-block}"
    "</style>\n";

std::string heatmap(const InstanceReport& report) {
  std::ostringstream out;
  out << "<table class=\"heatmap\">\n";
  for (const auto& m : report.methods) {
    out << "<tr><td>" << method_name(m.method) << "</td><td>";
    if (!m.explanation) {
      out << "error: " << escape(m.error.value_or("unknown")) << "</td></tr>\n";
      continue;
    }
    const Vector& s = m.explanation->scores;
    const double max_abs = s.size() ? s.cwiseAbs().maxCoeff() : 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      out << "<span class=\"tok\" style=\"background:"
          << heat_color(s(i), max_abs).hex() << "\" title=\"" << fixed4(s(i))
          << "\">" << escape(m.explanation->tokens[i]) << "</span>";
    }
    out << "</td></tr>\n";
  }
  out << "</table>\n";
  return out.str();
}

std::string instance_header(const InstanceReport& r) {
  return "instance " + r.id + ": target " + r.target_label + " (" +
         std::to_string(r.target) + "), top_k " + std::to_string(r.top_k);
}

std::vector<Metric> reported_metrics(const InstanceReport& r) {
  std::vector<Metric> out;
  for (const auto& m : r.methods) {
    for (const auto& s : m.scores) {
      if (std::find(out.begin(), out.end(), s.metric) == out.end()) {
        out.push_back(s.metric);
      }
    }
  }
  return out;
}

std::string instance_table(const InstanceReport& r) {
  std::string out = instance_header(r) + "\n";
  out += "text: " + r.text + "\n";
  const std::vector<Metric> metrics = reported_metrics(r);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{"method"};
  for (Metric m : metrics) head.emplace_back(metric_name(m));
  head.push_back("model_calls");
  rows.push_back(head);
  for (const auto& m : r.methods) {
    std::vector<std::string> row{std::string(method_name(m.method))};
    for (Metric metric : metrics) row.push_back(cell(m.value(metric)));
    row.push_back(std::to_string(m.model_calls));
    rows.push_back(std::move(row));
  }
  out += "\n" + aligned(rows);

  rows.clear();
  std::vector<std::string> tokens{"scores"};
  tokens.insert(tokens.end(), r.tokens.begin(), r.tokens.end());
  rows.push_back(tokens);
  for (const auto& m : r.methods) {
    std::vector<std::string> row{std::string(method_name(m.method))};
    if (m.explanation) {
      for (double s : m.explanation->scores) row.push_back(fixed4(s));
    } else {
      row.push_back("error: " + m.error.value_or("unknown"));
    }
    rows.push_back(std::move(row));
  }
  out += "\n" + aligned(rows);
  for (const auto& w : r.warnings) out += "warning: " + w + "\n";
  return out;
}

std::string instance_html_body(const InstanceReport& r) {
  std::ostringstream out;
  out << "<h2>" << escape(instance_header(r)) << "</h2>\n";
  out << heatmap(r);
  auto value = [&](Method method, Metric metric) -> std::optional<double> {
    const MethodResult* m = r.find(method);
    return m ? m->value(metric) : std::nullopt;
  };
  std::vector<Method> methods;
  for (const auto& m : r.methods) methods.push_back(m.method);
  out << html_metric_table(methods, reported_metrics(r), value,
                           [](Method) { return std::string(); });
  for (const auto& w : r.warnings) out << "<p>warning: " << escape(w) << "</p>\n";
  return out.str();
}

std::string html_page(const std::string& title, const std::string& body) {
  return "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>" +
         escape(title) + "</title>\n" + kStyle + "</head><body>\n" + body +
         "</body></html>\n";
}

std::optional<double> summary_mean(const DatasetReport& r, Method method,
                                   Metric metric) {
  auto row = r.summary.find(method);
  if (row == r.summary.end()) return std::nullopt;
  auto c = row->second.find(metric);
  return c == row->second.end() ? std::nullopt : c->second.mean;
}

int summary_count(const DatasetReport& r, Method method, Metric metric) {
  auto row = r.summary.find(method);
  if (row == r.summary.end()) return 0;
  auto c = row->second.find(metric);
  return c == row->second.end() ? 0 : c->second.count;
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "table") return ReportFormat::kTable;
  if (name == "json") return ReportFormat::kJson;
  if (name == "html") return ReportFormat::kHtml;
  throw ConfigError("unknown report format '" + std::string(name) + "'");
}

std::string Rgb::hex() const {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

Rgb heat_color(double score, double max_abs) {
  if (!(max_abs > 0.0) || !std::isfinite(score)) return Rgb{};
  const double t = std::clamp(std::abs(score) / max_abs, 0.0, 1.0);
  // Fade from white to a saturated red (or blue).
  const int fade = static_cast<int>(std::lround(255 * (1.0 - 0.8 * t)));
  const int deep = static_cast<int>(std::lround(255 * (1.0 - 0.55 * t)));
  if (score > 0) return Rgb{deep, fade, fade};
  if (score < 0) return Rgb{fade, fade, deep};
  return Rgb{};
}

double metric_shade(std::optional<double> value, double lo, double hi,
                    Direction direction) {
  if (!value || !std::isfinite(*value)) return 0.0;
  if (!(hi > lo)) return 0.5;
  const double t = std::clamp((*value - lo) / (hi - lo), 0.0, 1.0);
  return direction == Direction::kHigherBetter ? t : 1.0 - t;
}

std::string render(const InstanceReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson:
      return to_json(report).dump(2) + "\n";
    case ReportFormat::kTable:
      return instance_table(report);
    case ReportFormat::kHtml:
      return html_page("xai-bench: " + report.id, instance_html_body(report));
  }
  return {};
}

std::string render(const DatasetReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) return to_json(report).dump(2) + "\n";

  const std::string title = "corpus " + report.corpus + ", model " +
                            report.model + ", " +
                            std::to_string(report.instances.size()) +
                            " instances, target " + report.target_policy +
                            ", top_k " + std::to_string(report.top_k);
  if (format == ReportFormat::kTable) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> head{"method"};
    for (Metric m : report.metrics) head.emplace_back(metric_name(m));
    rows.push_back(head);
    for (Method method : report.methods) {
      std::vector<std::string> row{std::string(method_name(method))};
      for (Metric m : report.metrics) {
        row.push_back(cell(summary_mean(report, method, m)) + " (" +
                      std::to_string(summary_count(report, method, m)) + ")");
      }
      rows.push_back(std::move(row));
    }
    return title + "\nmean (count)\n\n" + aligned(rows);
  }

  std::ostringstream body;
  body << "<h1>" << escape(title) << "</h1>\n";
  body << html_metric_table(
      report.methods, report.metrics,
      [&](Method method, Metric m) { return summary_mean(report, method, m); },
      [](Method) { return std::string(); });
  for (const auto& inst : report.instances) body << instance_html_body(inst);
  return html_page("xai-bench: " + report.corpus, body.str());
}

}  // namespace xaibench
