/*
 * Copyright 2026 The treexplain Authors.
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

#ifndef TREEXPLAIN_TRAVERSAL_HPP_
#define TREEXPLAIN_TRAVERSAL_HPP_

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "treexplain/common.hpp"
#include "treexplain/literals.hpp"
#include "treexplain/model.hpp"

namespace treexplain {

// Fixed: instance value. Flipped: negated instance value. Free: both branches.
enum class Mode : std::uint8_t { Fixed, Flipped, Free };

class ModeMap {
 public:
  ModeMap() = default;
  explicit ModeMap(std::size_t n_literals, Mode fill = Mode::Fixed) : modes_(n_literals, fill) {}

  static ModeMap freeing(std::size_t n_literals, std::span<const LiteralId> free) {
    ModeMap m(n_literals);
    for (LiteralId id : free) m.set(id, Mode::Free);
    return m;
  }

  static ModeMap flipping(std::size_t n_literals, std::span<const LiteralId> flips) {
    ModeMap m(n_literals);
    for (LiteralId id : flips) m.set(id, Mode::Flipped);
    return m;
  }

  // Free everywhere except `fixed`.
  static ModeMap fixing(std::size_t n_literals, std::span<const LiteralId> fixed) {
    ModeMap m(n_literals, Mode::Free);
    for (LiteralId id : fixed) m.set(id, Mode::Fixed);
    return m;
  }

  std::size_t size() const { return modes_.size(); }
  Mode get(LiteralId id) const { return modes_[id - 1]; }
  void set(LiteralId id, Mode mode) { modes_[id - 1] = mode; }

 private:
  std::vector<Mode> modes_;
};

// Bit 0: class 0 reachable, bit 1: class 1 reachable.
using ClassSet = std::uint8_t;
inline constexpr ClassSet kClass0 = 1;
inline constexpr ClassSet kClass1 = 2;
inline constexpr ClassSet class_bit(int label) { return label ? kClass1 : kClass0; }

struct WeightRange {
  Weight worst = 0;
  Weight best = 0;
  friend bool operator==(const WeightRange&, const WeightRange&) = default;
};

/// A tree together with the literal id of each of its nodes.
struct TreeView {
  const Tree& tree;
  std::span<const LiteralId> literals;

  TreeView(const Tree& t, std::span<const LiteralId> lits) : tree(t), literals(lits) {}
  TreeView(const Model& model, const LiteralTable& table, std::size_t t)
      : tree(model.trees[t]), literals(table.tree_literals(t)) {}
};

namespace detail {

// Visits every leaf reachable under `modes`. Each node is entered at most
// once since the node graph is a tree. The visitor returns false to stop.
template <typename Visitor>
void visit_reachable(const TreeView& view, const BoolInstance& bi, const ModeMap& modes,
                     Visitor&& visit) {
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    if (view.tree.is_leaf(n)) {
      if (!visit(n)) return;
      continue;
    }
    const Split& s = view.tree.split(n);
    const LiteralId lit = view.literals[n];
    switch (modes.get(lit)) {
      case Mode::Fixed:
        stack.push_back(bi.value(lit) ? s.left : s.right);
        break;
      case Mode::Flipped:
        stack.push_back(bi.value(lit) ? s.right : s.left);
        break;
      case Mode::Free:
        stack.push_back(s.right);
        stack.push_back(s.left);
        break;
    }
  }
}

}  // namespace detail

inline std::vector<int> reachable_leaves(const TreeView& view, const BoolInstance& bi,
                                         const ModeMap& modes) {
  std::vector<int> leaves;
  detail::visit_reachable(view, bi, modes, [&](int n) {
    leaves.push_back(n);
    return true;
  });
  std::sort(leaves.begin(), leaves.end());
  return leaves;
}

inline ClassSet class_set(const TreeView& view, const BoolInstance& bi, const ModeMap& modes) {
  ClassSet seen = 0;
  detail::visit_reachable(view, bi, modes, [&](int n) {
    const auto* leaf = std::get_if<LeafClass>(&view.tree.nodes[n]);
    if (!leaf) throw Error("class_set: tree has weight leaves");
    seen |= class_bit(leaf->label);
    return seen != (kClass0 | kClass1);
  });
  return seen;
}

inline WeightRange weight_range(const TreeView& view, const BoolInstance& bi, const ModeMap& modes) {
  bool first = true;
  WeightRange range;
  detail::visit_reachable(view, bi, modes, [&](int n) {
    const auto* leaf = std::get_if<LeafWeight>(&view.tree.nodes[n]);
    if (!leaf) throw Error("weight_range: tree has class leaves");
    if (first) {
      range = {leaf->weight, leaf->weight};
      first = false;
    } else {
      range.worst = std::min(range.worst, leaf->weight);
      range.best = std::max(range.best, leaf->weight);
    }
    return true;
  });
  return range;
}

/// Deterministic leaf under a flip set (every literal Fixed or Flipped).
inline int leaf_under_flips(const TreeView& view, const BoolInstance& bi,
                            std::span<const char> flipped) {
  int n = 0;
  while (!view.tree.is_leaf(n)) {
    const Split& s = view.tree.split(n);
    const LiteralId lit = view.literals[n];
    const bool effective = bi.value(lit) != (flipped[lit - 1] != 0);
    n = effective ? s.left : s.right;
  }
  return n;
}

struct ForestVote {
  int label = 0;
  int disagreeing = 0;  // trees whose class differs from the original forest class
  friend bool operator==(const ForestVote&, const ForestVote&) = default;
};

/// Re-votes the forest with `flips` negated. `original` is the forest class on
/// the unmodified instance.
inline ForestVote forest_vote_under_flips(const Model& model, const LiteralTable& table,
                                          const BoolInstance& bi, std::span<const LiteralId> flips,
                                          int original) {
  std::vector<char> flipped(table.size(), 0);
  for (LiteralId id : flips) flipped[id - 1] = 1;
  ForestVote vote;
  std::size_t ones = 0;
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    const TreeView view(model, table, t);
    const auto label = view.tree.leaf_value(leaf_under_flips(view, bi, flipped));
    ones += label == 1;
    vote.disagreeing += label != original;
  }
  vote.label = 2 * ones > model.trees.size() ? 1 : 0;
  return vote;
}

}  // namespace treexplain

#endif  // TREEXPLAIN_TRAVERSAL_HPP_
