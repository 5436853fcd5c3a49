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

#ifndef XAIBENCH_SRC_EXPLAINER_INTERNAL_H_
#define XAIBENCH_SRC_EXPLAINER_INTERNAL_H_

#include <string>

#include "xaibench/explanation.h"
#include "xaibench/model.h"

namespace xaibench::internal {

inline Explanation make_explanation(Method method, const TokenizedInput& x,
                                    int target, Vector scores) {
  if (!scores.allFinite()) {
    throw NumericError(std::string(method_name(method)) +
                       " produced non-finite scores");
  }
  Explanation e;
  e.method = method;
  e.target = target;
  e.tokens = x.content_strings();
  e.scores = std::move(scores);
  return e;
}

}  // namespace xaibench::internal

#endif  // XAIBENCH_SRC_EXPLAINER_INTERNAL_H_
