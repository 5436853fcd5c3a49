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


// Table, JSON and HTML renderings of benchmark reports.

#ifndef XAIBENCH_REPORT_H_
#define XAIBENCH_REPORT_H_

#include <optional>
#include <string>
#include <string_view>

#include "xaibench/bench.h"

namespace xaibench {

enum class ReportFormat { kTable, kJson, kHtml };

ReportFormat parse_report_format(std::string_view name);

struct Rgb {
  int r = 255, g = 255, b = 255;
  std::string hex() const;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Diverging scale centered at 0: red for positive, blue for negative,
// white at 0. `max_abs` is the per-explanation normalizer; a zero
// normalizer yields white.
Rgb heat_color(double score, double max_abs);

// Shade intensity in [0, 1], darker is better: 1 for the best value in
// [lo, hi] given the metric direction. Missing values get 0.
double metric_shade(std::optional<double> value, double lo, double hi,
                    Direction direction);

std::string render(const InstanceReport& report, ReportFormat format);
std::string render(const DatasetReport& report, ReportFormat format);

}  // namespace xaibench

#endif  // XAIBENCH_REPORT_H_
