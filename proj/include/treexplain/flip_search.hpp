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

#ifndef TREEXPLAIN_FLIP_SEARCH_HPP_
#define TREEXPLAIN_FLIP_SEARCH_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "treexplain/explanation.hpp"
#include "treexplain/traversal.hpp"

namespace treexplain {

/// Search over flip sets of a random forest: sets C of literals that are
/// negated (every other literal keeps its instance value). A flip set is
/// valid when more than `threshold` trees then disagree with the original
/// forest class.
///
/// Validity is not monotone in C: flipping an extra literal can send a tree
/// back to a leaf of the original class. Each literal carries a decision
/// (undecided / flipped / kept) and feasibility of the undecided remainder is
/// answered by
///   1. a relaxation: a tree can only disagree if one of its other-class
///      leaves is compatible with the decisions made so far;
///   2. a greedy witness, verified by direct evaluation;
///   3. an exhaustive branch over the literals that could still matter.
class FlipSearch {
 public:
  FlipSearch(const ExplainContext& ctx, int threshold, const Deadline& deadline)
      : ctx_(ctx), threshold_(threshold), deadline_(deadline),
        decision_(ctx.n_literals() + 1, kUndecided), scratch_(ctx.n_literals(), 0) {
    const int original = ctx.predicted();
    requirements_.resize(ctx.n_trees());
    for (std::size_t t = 0; t < ctx.n_trees(); ++t) collect(t, original);
  }

  // Witness consistent with current decisions, or nullopt if none exists.
  std::optional<LiteralFlags> find_witness() { return search(); }

  void keep(LiteralId id) { decision_[id] = kKept; }
  void flip(LiteralId id) { decision_[id] = kFlipped; }
  void undecide(LiteralId id) { decision_[id] = kUndecided; }
  void reset() { std::fill(decision_.begin(), decision_.end(), kUndecided); }

  int disagreeing(const LiteralFlags& flips) {
    for (std::size_t i = 1; i < flips.size(); ++i) scratch_[i - 1] = flips[i];
    int count = 0;
    for (std::size_t t = 0; t < ctx_.n_trees(); ++t) {
      const TreeView view(ctx_.model(), ctx_.table(), t);
      count += view.tree.leaf_value(leaf_under_flips(view, ctx_.bi(), scratch_)) != ctx_.predicted();
    }
    return count;
  }

  bool valid(const LiteralFlags& flips) { return disagreeing(flips) > threshold_; }

  /// A subset-minimal valid flip set over `order` (literals absent from
  /// `order` are never flipped), or nullopt if no valid flip set exists.
  ///
  /// Literals are decided in `order`, each kept unflipped whenever some valid
  /// set is still consistent with that. While every such question is answered
  /// within `step_budget` search nodes the result is the lexicographically
  /// smallest valid set. Otherwise the undecided questions are treated as
  /// "flip", and a second, unbudgeted pass over the subsets of that result
  /// restores minimality.
  std::optional<LiteralFlags> lexmin(std::span<const LiteralId> order, long long step_budget = kStepBudget) {
    reset();
    for (LiteralId id = 1; id <= static_cast<LiteralId>(ctx_.n_literals()); ++id) keep(id);
    for (LiteralId id : order) undecide(id);
    budget_ = -1;
    auto witness = search();
    if (!witness) return std::nullopt;
    bool approximate = false;
    witness = decide_in_order(order, std::move(*witness), step_budget, approximate);
    if (!approximate) return witness;

    std::vector<LiteralId> subset;
    for (LiteralId id : order)
      if ((*witness)[id]) subset.push_back(id);
    reset();
    for (LiteralId id = 1; id <= static_cast<LiteralId>(ctx_.n_literals()); ++id) keep(id);
    for (LiteralId id : subset) undecide(id);
    return decide_in_order(subset, std::move(*witness), -1, approximate);
  }

  // Search nodes per decision before lexmin falls back to the second pass; a
  // decision over k undecided literals never needs more than 2^(k+1) nodes.
  static constexpr long long kStepBudget = 4096;

  /// Every subset-minimal valid flip set over `order`, in lexicographic order.
  template <typename Sink>
  void enumerate(std::span<const LiteralId> order, Sink&& sink) {
    reset();
    for (LiteralId id = 1; id <= static_cast<LiteralId>(ctx_.n_literals()); ++id) keep(id);
    for (LiteralId id : order) undecide(id);
    std::vector<std::vector<LiteralId>> found;
    enumerate_from(order, 0, found, sink);
  }

 private:
  static constexpr std::int8_t kUndecided = 0;
  static constexpr std::int8_t kFlipped = 1;
  static constexpr std::int8_t kKept = -1;

  // Path constraints of one other-class leaf: literals on the path that have
  // to be flipped (`need`) or left alone (`forbid`) to reach it.
  struct Requirement {
    int leaf = 0;
    std::vector<LiteralId> need;
    std::vector<LiteralId> forbid;
  };

  void collect(std::size_t t, int original) {
    const TreeView view(ctx_.model(), ctx_.table(), t);
    struct Frame {
      int node;
      std::vector<std::pair<LiteralId, bool>> path;  // (literal, needs flip)
    };
    std::vector<Frame> stack{{0, {}}};
    while (!stack.empty()) {
      Frame f = std::move(stack.back());
      stack.pop_back();
      if (view.tree.is_leaf(f.node)) {
        if (view.tree.leaf_value(f.node) == original) continue;
        Requirement req{f.node, {}, {}};
        for (auto [lit, needs_flip] : f.path) (needs_flip ? req.need : req.forbid).push_back(lit);
        auto tidy = [](std::vector<LiteralId>& v) {
          std::sort(v.begin(), v.end());
          v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        tidy(req.need);
        tidy(req.forbid);
        const bool contradictory = std::any_of(req.need.begin(), req.need.end(), [&](LiteralId l) {
          return std::binary_search(req.forbid.begin(), req.forbid.end(), l);
        });
        if (!contradictory) requirements_[t].push_back(std::move(req));
        continue;
      }
      const Split& s = view.tree.split(f.node);
      const LiteralId lit = view.literals[f.node];
      const bool truth = ctx_.bi().value(lit);
      Frame left{s.left, f.path};
      left.path.emplace_back(lit, !truth);
      Frame right{s.right, std::move(f.path)};
      right.path.emplace_back(lit, truth);
      stack.push_back(std::move(right));
      stack.push_back(std::move(left));
    }
  }

  bool compatible(const Requirement& req) const {
    for (LiteralId l : req.need)
      if (decision_[l] == kKept) return false;
    for (LiteralId l : req.forbid)
      if (decision_[l] == kFlipped) return false;
    return true;
  }

  bool relaxed_feasible() const {
    int possible = 0;
    for (const auto& reqs : requirements_)
      possible += std::any_of(reqs.begin(), reqs.end(), [&](const Requirement& r) { return compatible(r); });
    return possible > threshold_;
  }

  LiteralFlags flipped_set() const {
    LiteralFlags flags(decision_.size(), 0);
    for (std::size_t i = 1; i < decision_.size(); ++i) flags[i] = decision_[i] == kFlipped;
    return flags;
  }

  // Adds the flips of one other-class leaf at a time, cheapest first, as long
  // as that raises the number of disagreeing trees. `start` must contain every
  // flipped literal and no kept one.
  std::optional<LiteralFlags> greedy(LiteralFlags start) {
    deadline_.check();
    LiteralFlags current = std::move(start);
    int count = disagreeing(current);
    std::vector<std::vector<char>> tried(requirements_.size());
    for (std::size_t t = 0; t < requirements_.size(); ++t) tried[t].assign(requirements_[t].size(), 0);
    std::vector<char> agrees(ctx_.n_trees());
    while (count <= threshold_) {
      for (std::size_t i = 1; i < current.size(); ++i) scratch_[i - 1] = current[i];
      for (std::size_t t = 0; t < ctx_.n_trees(); ++t) {
        const TreeView view(ctx_.model(), ctx_.table(), t);
        agrees[t] = view.tree.leaf_value(leaf_under_flips(view, ctx_.bi(), scratch_)) == ctx_.predicted();
      }
      // (cost, tree, constraint count, candidate index)
      std::optional<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> best;
      for (std::size_t t = 0; t < requirements_.size(); ++t) {
        if (!agrees[t]) continue;
        for (std::size_t r = 0; r < requirements_[t].size(); ++r) {
          const Requirement& req = requirements_[t][r];
          if (tried[t][r] || !compatible(req)) continue;
          bool blocked = false;
          for (LiteralId l : req.forbid) blocked = blocked || current[l];
          if (blocked) continue;
          std::size_t cost = 0;
          for (LiteralId l : req.need) cost += !current[l];
          auto key = std::make_tuple(cost, t, req.need.size() + req.forbid.size(), r);
          if (!best || key < *best) best = key;
        }
      }
      if (!best) return std::nullopt;
      const auto [cost, t, constraints, r] = *best;
      tried[t][r] = 1;
      LiteralFlags next = current;
      for (LiteralId l : requirements_[t][r].need) next[l] = 1;
      deadline_.check();
      const int next_count = disagreeing(next);
      if (next_count > count) {
        current = std::move(next);
        count = next_count;
      }
    }
    return current;
  }

  // Undecided literals appearing in the flip requirements of some compatible
  // other-class leaf; flipping anything else never helps.
  LiteralId relevant_undecided() const {
    LiteralId pick = 0;
    for (const auto& reqs : requirements_)
      for (const Requirement& req : reqs) {
        if (!compatible(req)) continue;
        for (LiteralId l : req.need)
          if (decision_[l] == kUndecided && (pick == 0 || l < pick)) pick = l;
      }
    return pick;
  }

  // When exactly threshold + 1 trees can still disagree, all of them must:
  // literals that every compatible other-class leaf of such a tree needs
  // flipped (or left alone) are decided accordingly. Returns false when too
  // few trees can disagree. Decisions made here are pushed onto `trail_`.
  bool propagate() {
    std::vector<int> need_count(decision_.size()), forbid_count(decision_.size());
    for (;;) {
      int possible = 0;
      for (const auto& reqs : requirements_)
        possible += std::any_of(reqs.begin(), reqs.end(), [&](const Requirement& r) { return compatible(r); });
      if (possible <= threshold_) return false;
      if (possible > threshold_ + 1) return true;
      bool changed = false;
      for (const auto& reqs : requirements_) {
        int compatible_count = 0;
        std::vector<LiteralId> touched;
        for (const Requirement& r : reqs) {
          if (!compatible(r)) continue;
          ++compatible_count;
          for (LiteralId l : r.need)
            if (decision_[l] == kUndecided && need_count[l]++ == 0 && forbid_count[l] == 0) touched.push_back(l);
          for (LiteralId l : r.forbid)
            if (decision_[l] == kUndecided && forbid_count[l]++ == 0 && need_count[l] == 0) touched.push_back(l);
        }
        for (LiteralId l : touched) {
          if (compatible_count > 0 && need_count[l] == compatible_count) {
            decision_[l] = kFlipped;
            trail_.push_back(l);
            changed = true;
          } else if (compatible_count > 0 && forbid_count[l] == compatible_count) {
            decision_[l] = kKept;
            trail_.push_back(l);
            changed = true;
          }
          need_count[l] = forbid_count[l] = 0;
        }
      }
      if (!changed) return true;
    }
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      decision_[trail_.back()] = kUndecided;
      trail_.pop_back();
    }
  }

  std::optional<LiteralFlags> search() {
    deadline_.check();
    if (budget_ >= 0 && ++nodes_ > budget_) {
      exhausted_ = true;
      return std::nullopt;
    }
    const std::size_t mark = trail_.size();
    std::optional<LiteralFlags> result;
    if (propagate()) {
      result = greedy(flipped_set());
      if (!result) {
        const LiteralId branch = relevant_undecided();
        if (branch == 0) {
          LiteralFlags flips = flipped_set();
          if (valid(flips)) result = std::move(flips);
        } else {
          for (std::int8_t choice : {kKept, kFlipped}) {
            decision_[branch] = choice;
            result = search();
            decision_[branch] = kUndecided;
            if (result || exhausted_) break;
          }
        }
      }
    }
    undo(mark);
    return result;
  }

  LiteralFlags decide_in_order(std::span<const LiteralId> order, LiteralFlags witness, long long budget,
                              bool& approximate) {
    for (LiteralId id : order) {
      keep(id);
      if (!witness[id]) continue;
      LiteralFlags repaired = witness;
      repaired[id] = 0;
      auto next = greedy(std::move(repaired));
      if (!next) {
        budget_ = budget;
        nodes_ = 0;
        exhausted_ = false;
        next = search();
        approximate = approximate || exhausted_;
        budget_ = -1;
      }
      if (next) witness = std::move(*next);
      else flip(id);
    }
    return witness;
  }

  template <typename Sink>
  void enumerate_from(std::span<const LiteralId> order, std::size_t pos,
                      std::vector<std::vector<LiteralId>>& found, Sink& sink) {
    deadline_.check();
    for (const auto& f : found)
      if (std::all_of(f.begin(), f.end(), [&](LiteralId l) { return decision_[l] == kFlipped; })) return;
    if (!relaxed_feasible()) return;
    if (pos == order.size() || relevant_undecided() == 0) {
      // With nothing relevant left, the only candidate is the flipped set
      // itself: any valid completion would contain it as a valid subset.
      LiteralFlags flips = flipped_set();
      if (valid(flips)) {
        found.push_back(flags_to_ids(flips));
        sink(found.back());
      }
      return;
    }
    const LiteralId id = order[pos];
    decision_[id] = kKept;
    enumerate_from(order, pos + 1, found, sink);
    decision_[id] = kFlipped;
    enumerate_from(order, pos + 1, found, sink);
    decision_[id] = kUndecided;
  }

  const ExplainContext& ctx_;
  int threshold_;
  const Deadline& deadline_;
  std::vector<std::int8_t> decision_;
  std::vector<std::vector<Requirement>> requirements_;
  std::vector<char> scratch_;
  std::vector<LiteralId> trail_;
  long long budget_ = -1;  // search nodes allowed, -1 for no limit
  long long nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace treexplain

#endif  // TREEXPLAIN_FLIP_SEARCH_HPP_
