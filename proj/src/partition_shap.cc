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

// Owen values over a balanced binary partition of the content tokens.
//
// At an internal node with children L and R, evaluated in context C (the
// tokens outside the node that are switched on), the Owen share of L is
//
//   m_L = 1/2 [(v(C+L) - v(C)) + (v(C+L+R) - v(C+R))]
//
// and symmetrically for R. The exact values below a child average over both
// states of its sibling, so each child inherits the two contexts C and C+R,
// each with half the parent's weight. A leaf's score is the weighted sum of
// its shares. Summing shares over the children of any node reproduces
// v(C+node) - v(C), so the root yields f(x) - v(empty).

#include <algorithm>

#include "explainer_internal.h"
#include "xaibench/explainers.h"

namespace xaibench {
namespace {

struct Context {
  KeepMask on;
  double weight;
};

struct Pending {
  int node;
  std::vector<Context> contexts;
};

KeepMask with_range(KeepMask mask, int begin, int end) {
  std::fill(mask.begin() + begin, mask.begin() + end, true);
  return mask;
}

}  // namespace

int PartitionTree::build(int begin, int end) {
  const int index = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin > 1) {
    const int mid = begin + (end - begin + 1) / 2;
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[index].left = left;
    nodes_[index].right = right;
  }
  return index;
}

PartitionTree PartitionTree::balanced(int num_tokens) {
  if (num_tokens < 1) throw InvalidInputError("partition needs >= 1 token");
  PartitionTree tree;
  tree.nodes_.reserve(2 * static_cast<std::size_t>(num_tokens) - 1);
  tree.build(0, num_tokens);
  return tree;
}

int PartitionTree::num_leaves() const {
  return static_cast<int>(
      std::count_if(nodes_.begin(), nodes_.end(),
                    [](const Node& n) { return n.leaf(); }));
}

Explanation explain_partition_shap(const Scorer& scorer,
                                   const TokenizedInput& x, int target) {
  const int n = x.num_content();
  if (n < 1) throw InvalidInputError("SHAP needs at least one content token");
  const PartitionTree tree = PartitionTree::balanced(n);
  Vector scores = Vector::Zero(n);
  long model_calls = 0;

  if (n == 1) {
    const std::vector<KeepMask> keeps = {KeepMask{true}, KeepMask{false}};
    const Vector v = scorer.target_probabilities(x, keeps, target);
    scores(0) = v(0) - v(1);
    model_calls = 2;
  }

  // Level-order traversal. Each level is evaluated in batches of at most
  // kMaxBatch coalitions so long inputs do not materialize a whole level.
  constexpr std::size_t kMaxBatch = 4096;
  std::vector<Pending> level;
  if (n > 1) level.push_back({0, {Context{KeepMask(n, false), 1.0}}});
  while (!level.empty()) {
    std::vector<Pending> next;
    std::size_t first = 0;
    while (first < level.size()) {
      std::size_t last = first;
      std::vector<KeepMask> keeps;
      while (last < level.size() && keeps.size() < kMaxBatch) {
        const auto& node = tree.node(level[last].node);
        const auto& left = tree.node(node.left);
        const auto& right = tree.node(node.right);
        for (const Context& c : level[last].contexts) {
          keeps.push_back(c.on);
          keeps.push_back(with_range(c.on, left.begin, left.end));
          keeps.push_back(with_range(c.on, right.begin, right.end));
          keeps.push_back(with_range(c.on, node.begin, node.end));
        }
        ++last;
      }
      const Vector v = scorer.target_probabilities(x, keeps, target);
      model_calls += static_cast<long>(keeps.size());

      Eigen::Index k = 0;
      for (std::size_t i = first; i < last; ++i) {
        Pending& p = level[i];
        const auto& node = tree.node(p.node);
        const auto& left = tree.node(node.left);
        const auto& right = tree.node(node.right);
        Pending left_next{node.left, {}};
        Pending right_next{node.right, {}};
        for (Context& c : p.contexts) {
          const double v_c = v(k), v_l = v(k + 1), v_r = v(k + 2);
          const double v_lr = v(k + 3);
          k += 4;
          const double share_left = 0.5 * ((v_l - v_c) + (v_lr - v_r));
          const double share_right = 0.5 * ((v_r - v_c) + (v_lr - v_l));
          if (left.leaf()) {
            scores(left.begin) += c.weight * share_left;
          } else {
            left_next.contexts.push_back({c.on, c.weight / 2});
            left_next.contexts.push_back(
                {with_range(c.on, right.begin, right.end), c.weight / 2});
          }
          if (right.leaf()) {
            scores(right.begin) += c.weight * share_right;
          } else {
            right_next.contexts.push_back({c.on, c.weight / 2});
            right_next.contexts.push_back(
                {with_range(c.on, left.begin, left.end), c.weight / 2});
          }
        }
        if (!left_next.contexts.empty()) next.push_back(std::move(left_next));
        if (!right_next.contexts.empty()) next.push_back(std::move(right_next));
      }
      first = last;
    }
    level = std::move(next);
  }

  Explanation e = internal::make_explanation(Method::kPartitionShap, x, target,
                                             std::move(scores));
  e.diagnostics["model_calls"] = static_cast<double>(model_calls);
  e.diagnostics["tree_nodes"] = static_cast<double>(tree.nodes().size());
  return e;
}

}  // namespace xaibench
