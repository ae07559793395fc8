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

#ifndef TREEXPLAIN_ORACLE_HPP_
#define TREEXPLAIN_ORACLE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treexplain/explanation.hpp"
#include "treexplain/literals.hpp"
#include "treexplain/model.hpp"

// Brute-force reference for every explanation kind. It evaluates the defining
// conditions over complete Boolean assignments of the literals and shares no
// code with the explainers' traversal or search.

namespace treexplain {

enum class WitnessKind {
  Completion,  // literals whose value differs from the instance in a counterexample
  Deletion,    // a single literal that can be dropped
  Subset,      // a valid proper subset
  Unchanged,   // the prediction never changes under the explanation
  TreeCount,   // trees (0-based) that can still leave the predicted class
  WeightSum,   // aggregated weight bound on the wrong side of zero
};

struct Witness {
  WitnessKind kind = WitnessKind::Completion;
  std::vector<int> items;
  Weight weight_sum = 0;
};

struct Verdict {
  bool valid = false;
  bool minimal = false;  // subset-minimal (for majority: the freed set is maximal)
  std::optional<Witness> witness;
};

class Oracle {
 public:
  static constexpr int kDefaultBound = 16;
  static constexpr int kHardBound = 24;

  Oracle(const Model& model, const Instance& instance, int bound = kDefaultBound)
      : model_(model), table_(model) {
    check_instance(model, instance);
    if (bound > kHardBound) bound = kHardBound;
    if (static_cast<int>(table_.size()) > bound)
      throw OracleBoundError("model has " + std::to_string(table_.size()) +
                             " literals, oracle bound is " + std::to_string(bound));
    n_ = static_cast<int>(table_.size());
    for (int i = 0; i < n_; ++i) {
      const SplitTest& test = table_.test(i + 1);
      if (test.evaluate(instance.values[test.feature])) base_ |= 1u << i;
    }
    predicted_ = predict(model, instance).label;
  }

  int n_literals() const { return n_; }
  int predicted() const { return predicted_; }

  Verdict check(const Explanation& e) const {
    if (model_kind_of(e.kind) != model_.kind)
      throw NotApplicableError(std::string(to_string(e.kind)) + " does not apply to this model");
    std::uint32_t set = 0;
    for (LiteralId id : e.literals) {
      if (id < 1 || id > n_) throw Error("literal " + std::to_string(id) + " is not in the model");
      set |= 1u << (id - 1);
    }
    Verdict v;
    if (e.kind == ExplanationKind::RfContrastive) {
      v.valid = forest_changes(set);
      if (!v.valid) {
        v.witness = Witness{WitnessKind::Unchanged, to_ids(set), 0};
        return v;
      }
      v.minimal = true;
      for (std::uint32_t sub = (set - 1) & set;; sub = (sub - 1) & set) {
        if (sub != set && forest_changes(sub)) {
          v.minimal = false;
          v.witness = Witness{WitnessKind::Subset, to_ids(sub), 0};
          break;
        }
        if (sub == 0) break;
      }
      return v;
    }
    Witness failure;
    v.valid = holds(e.kind, set, &failure);
    if (!v.valid) {
      v.witness = failure;
      return v;
    }
    // Every other kind is closed under supersets, so single deletions decide
    // minimality.
    v.minimal = true;
    for (int i = 0; i < n_; ++i) {
      if (!(set >> i & 1u)) continue;
      if (holds(e.kind, set & ~(1u << i), nullptr)) {
        v.minimal = false;
        v.witness = Witness{WitnessKind::Deletion, {i + 1}, 0};
        break;
      }
    }
    return v;
  }

  /// All subset-minimal literal sets satisfying the kind's condition, in
  /// increasing bitmask order.
  std::vector<std::vector<LiteralId>> enumerate(ExplanationKind kind) const {
    if (model_kind_of(kind) != model_.kind)
      throw NotApplicableError(std::string(to_string(kind)) + " does not apply to this model");
    const std::uint32_t full = n_ == 32 ? ~0u : (1u << n_) - 1;
    std::vector<char> valid(std::size_t{1} << n_);
    for (std::uint32_t s = 0;; ++s) {
      valid[s] = kind == ExplanationKind::RfContrastive ? forest_changes(s) : holds(kind, s, nullptr);
      if (s == full) break;
    }
    std::vector<std::vector<LiteralId>> out;
    for (std::uint32_t s = 0;; ++s) {
      if (valid[s]) {
        bool minimal = true;
        if (s != 0) {
          for (std::uint32_t sub = (s - 1) & s;; sub = (sub - 1) & s) {
            if (valid[sub]) {
              minimal = false;
              break;
            }
            if (sub == 0) break;
          }
        }
        if (minimal) out.push_back(to_ids(s));
      }
      if (s == full) break;
    }
    return out;
  }

 private:
  static std::vector<int> to_ids(std::uint32_t set) {
    std::vector<int> ids;
    for (int i = 0; set >> i; ++i)
      if (set >> i & 1u) ids.push_back(i + 1);
    return ids;
  }

  // Leaf of tree t when literal i takes bit i of `assignment`.
  int leaf(std::size_t t, std::uint32_t assignment) const {
    const Tree& tree = model_.trees[t];
    int node = 0;
    while (const auto* s = std::get_if<Split>(&tree.nodes[node])) {
      const LiteralId lit = table_.literal_at(t, node);
      node = (assignment >> (lit - 1) & 1u) ? s->left : s->right;
    }
    return node;
  }

  Weight value(std::size_t t, std::uint32_t assignment) const {
    const TreeNode& n = model_.trees[t].nodes[leaf(t, assignment)];
    if (const auto* c = std::get_if<LeafClass>(&n)) return c->label;
    return std::get<LeafWeight>(n).weight;
  }

  int forest_label(std::uint32_t assignment) const {
    std::size_t ones = 0;
    for (std::size_t t = 0; t < model_.trees.size(); ++t) ones += value(t, assignment) == 1;
    return 2 * ones > model_.trees.size() ? 1 : 0;
  }

  // Flipping exactly `flips` changes the forest's prediction.
  bool forest_changes(std::uint32_t flips) const { return forest_label(base_ ^ flips) != predicted_; }

  // Calls visit(diff) for every assignment that agrees with the instance
  // outside `open`, where diff is the set of literals that differ.
  template <typename Visit>
  void for_each_completion(std::uint32_t open, Visit&& visit) const {
    for (std::uint32_t d = open;; d = (d - 1) & open) {
      if (!visit(d)) return;
      if (d == 0) return;
    }
  }

  // Condition for every kind except RfContrastive. `set` is the explanation
  // (fixed literals, or released ones for DtContrastive).
  bool holds(ExplanationKind kind, std::uint32_t set, Witness* failure) const {
    const std::uint32_t full = (n_ == 32) ? ~0u : (1u << n_) - 1;
    const std::uint32_t open = full & ~set;
    const std::size_t m = model_.trees.size();
    switch (kind) {
      case ExplanationKind::DtSufficient:
      case ExplanationKind::RfSufficient: {
        bool ok = true;
        for_each_completion(open, [&](std::uint32_t d) {
          const int label = kind == ExplanationKind::DtSufficient ? static_cast<int>(value(0, base_ ^ d))
                                                                  : forest_label(base_ ^ d);
          if (label != predicted_) {
            ok = false;
            if (failure) *failure = Witness{WitnessKind::Completion, to_ids(d), 0};
          }
          return ok;
        });
        return ok;
      }
      case ExplanationKind::DtContrastive: {
        bool changes = false;
        for_each_completion(set, [&](std::uint32_t d) {
          changes = value(0, base_ ^ d) != predicted_;
          return !changes;
        });
        if (!changes && failure) *failure = Witness{WitnessKind::Unchanged, to_ids(set), 0};
        return changes;
      }
      case ExplanationKind::RfMajority: {
        std::vector<char> leaves_class(m, 0);
        for_each_completion(open, [&](std::uint32_t d) {
          for (std::size_t t = 0; t < m; ++t)
            if (value(t, base_ ^ d) != predicted_) leaves_class[t] = 1;
          return true;
        });
        std::size_t pinned = 0;
        std::vector<int> loose;
        for (std::size_t t = 0; t < m; ++t) {
          if (leaves_class[t]) loose.push_back(static_cast<int>(t));
          else ++pinned;
        }
        const bool ok = pinned >= m / 2 + 1;
        if (!ok && failure) *failure = Witness{WitnessKind::TreeCount, loose, 0};
        return ok;
      }
      case ExplanationKind::BtTreeSpecific: {
        std::vector<Weight> lo(m), hi(m);
        bool first = true;
        for_each_completion(open, [&](std::uint32_t d) {
          for (std::size_t t = 0; t < m; ++t) {
            const Weight w = value(t, base_ ^ d);
            lo[t] = first ? w : std::min(lo[t], w);
            hi[t] = first ? w : std::max(hi[t], w);
          }
          first = false;
          return true;
        });
        Weight worst = 0, best = 0;
        for (std::size_t t = 0; t < m; ++t) {
          worst += lo[t];
          best += hi[t];
        }
        const bool ok = predicted_ == 1 ? worst > 0 : best <= 0;
        if (!ok && failure) *failure = Witness{WitnessKind::WeightSum, {}, predicted_ == 1 ? worst : best};
        return ok;
      }
      case ExplanationKind::RfContrastive:
        return forest_changes(set);
    }
    return false;
  }

  const Model& model_;
  LiteralTable table_;
  int n_ = 0;
  std::uint32_t base_ = 0;  // bit i: literal i+1 holds on the instance
  int predicted_ = 0;
};

}  // namespace treexplain

#endif  // TREEXPLAIN_ORACLE_HPP_
