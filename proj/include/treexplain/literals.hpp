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

#ifndef TREEXPLAIN_LITERALS_HPP_
#define TREEXPLAIN_LITERALS_HPP_

#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "treexplain/common.hpp"
#include "treexplain/model.hpp"

namespace treexplain {

/// Bijection between distinct node tests and literal ids 1..n.
///
/// Ids are handed out by first occurrence in (tree index, pre-order) order, so
/// the same model always produces the same numbering. Identical tests in
/// different nodes (or trees) share one id.
class LiteralTable {
 public:
  LiteralTable() = default;

  explicit LiteralTable(const Model& model) {
    node_literals_.resize(model.trees.size());
    for (std::size_t t = 0; t < model.trees.size(); ++t) {
      const Tree& tree = model.trees[t];
      node_literals_[t].assign(tree.nodes.size(), 0);
      for (int n : tree.preorder()) {
        if (tree.is_leaf(n)) continue;
        const SplitTest& test = tree.split(n).test;
        auto [it, inserted] = index_.try_emplace(test, static_cast<LiteralId>(tests_.size() + 1));
        if (inserted) tests_.push_back(test);
        node_literals_[t][n] = it->second;
      }
    }
  }

  std::size_t size() const { return tests_.size(); }

  const SplitTest& test(LiteralId id) const { return tests_.at(id - 1); }

  // 0 for leaves.
  LiteralId literal_at(std::size_t tree, int node) const { return node_literals_[tree][node]; }
  const std::vector<LiteralId>& tree_literals(std::size_t tree) const { return node_literals_[tree]; }

  LiteralId find(const SplitTest& test) const {
    auto it = index_.find(test);
    return it == index_.end() ? 0 : it->second;
  }

  /// Distinct literal ids used by one tree, ascending.
  std::vector<LiteralId> literals_of_tree(std::size_t tree) const {
    std::vector<char> seen(size() + 1, 0);
    for (LiteralId id : node_literals_[tree]) seen[id] = 1;
    std::vector<LiteralId> out;
    for (LiteralId id = 1; id <= static_cast<LiteralId>(size()); ++id)
      if (seen[id]) out.push_back(id);
    return out;
  }

 private:
  std::vector<SplitTest> tests_;
  std::map<SplitTest, LiteralId> index_;
  std::vector<std::vector<LiteralId>> node_literals_;
};

inline LiteralTable build_literal_table(const Model& model) { return LiteralTable(model); }

/// Truth value of every literal on a concrete instance.
class BoolInstance {
 public:
  BoolInstance() = default;
  explicit BoolInstance(std::vector<char> truth) : truth_(std::move(truth)) {}

  std::size_t size() const { return truth_.size(); }
  bool value(LiteralId id) const { return truth_[id - 1] != 0; }
  const std::vector<char>& truth() const { return truth_; }

  friend bool operator==(const BoolInstance&, const BoolInstance&) = default;

 private:
  std::vector<char> truth_;
};

inline BoolInstance booleanize(const LiteralTable& table, const Instance& instance) {
  std::vector<char> truth(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const SplitTest& test = table.test(static_cast<LiteralId>(i + 1));
    if (test.feature >= static_cast<int>(instance.values.size()))
      throw ModelError("instance too short for literal " + std::to_string(i + 1));
    truth[i] = test.evaluate(instance.values[test.feature]) ? 1 : 0;
  }
  return BoolInstance(std::move(truth));
}

/// Vote-count thresholds for a forest of m trees predicting `predicted`.
///
/// `con`: the prediction flips iff more than `con` trees disagree with it.
/// `majo`: at least floor(m/2)+1 trees agree iff fewer than `majo` may disagree.
struct Thresholds {
  int suf = 0;
  int con = 0;
  int majo = 0;
  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

inline Thresholds compute_thresholds(int m, int predicted) {
  if (m <= 0) throw Error("compute_thresholds: forest needs at least one tree");
  Thresholds th;
  th.con = predicted == 1 ? (m + 1) / 2 - 1 : m / 2;
  th.suf = th.con;
  th.majo = m - m / 2;
  return th;
}

/// "x1 <= 2" when the literal holds on the instance, "x1 > 2" otherwise.
/// Features are shown 1-based.
inline std::string render_test(const SplitTest& test, bool holds) {
  std::ostringstream out;
  out << 'x' << test.feature + 1 << ' ';
  switch (test.op) {
    case TestOp::LE: out << (holds ? "<= " : "> ") << test.threshold; break;
    case TestOp::LT: out << (holds ? "< " : ">= ") << test.threshold; break;
    case TestOp::IN: {
      out << (holds ? "in {" : "not in {");
      for (std::size_t i = 0; i < test.values.size(); ++i)
        out << (i ? ", " : "") << test.values[i];
      out << '}';
      break;
    }
  }
  return out.str();
}

}  // namespace treexplain

#endif  // TREEXPLAIN_LITERALS_HPP_
