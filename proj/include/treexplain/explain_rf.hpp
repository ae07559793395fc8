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

#ifndef TREEXPLAIN_EXPLAIN_RF_HPP_
#define TREEXPLAIN_EXPLAIN_RF_HPP_

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

#include "treexplain/explain_dt.hpp"
#include "treexplain/explanation.hpp"
#include "treexplain/flip_search.hpp"
#include "treexplain/minimal_sets.hpp"
#include "treexplain/traversal.hpp"

namespace treexplain {

/// A flip set that changes the forest's prediction.
struct CounterfactualWitness {
  std::vector<LiteralId> flips;
  int resulting_class = 0;
  int disagreeing_count = 0;
};

namespace detail {

inline std::vector<LiteralId> descending(std::vector<LiteralId> ids) {
  std::sort(ids.rbegin(), ids.rend());
  return ids;
}

// Shallowest occurrence first, later literals first among equals.
inline std::vector<LiteralId> majority_order(const ExplainContext& ctx) {
  std::vector<int> depth(ctx.n_literals() + 1, std::numeric_limits<int>::max());
  for (std::size_t t = 0; t < ctx.n_trees(); ++t) {
    const Tree& tree = ctx.model().trees[t];
    std::vector<int> node_depth(tree.nodes.size(), 0);
    for (int n : tree.preorder()) {
      if (tree.is_leaf(n)) continue;
      const LiteralId lit = ctx.table().literal_at(t, n);
      depth[lit] = std::min(depth[lit], node_depth[n]);
      node_depth[tree.split(n).left] = node_depth[n] + 1;
      node_depth[tree.split(n).right] = node_depth[n] + 1;
    }
  }
  auto ids = ctx.all_literals();
  std::sort(ids.begin(), ids.end(), [&](LiteralId a, LiteralId b) {
    return depth[a] != depth[b] ? depth[a] < depth[b] : a > b;
  });
  return ids;
}

// Majority: with every literal outside `fixed` free, fewer than `majo` trees
// can reach a leaf of the other class.
inline auto rf_majority_test(const ExplainContext& ctx) {
  return [&ctx](const LiteralFlags& fixed) {
    ModeMap modes(ctx.n_literals(), Mode::Free);
    for (std::size_t id = 1; id < fixed.size(); ++id)
      if (fixed[id]) modes.set(static_cast<LiteralId>(id), Mode::Fixed);
    const ClassSet other = class_bit(1 - ctx.predicted());
    int doubtful = 0;
    for (std::size_t t = 0; t < ctx.n_trees(); ++t) {
      doubtful += (class_set(TreeView(ctx.model(), ctx.table(), t), ctx.bi(), modes) & other) != 0;
      if (doubtful >= ctx.thresholds().majo) return false;
    }
    return true;
  };
}

// With every literal fixed each tree votes as on the instance, so this fails
// only when the predicted class lacks a strict majority of votes.
inline void require_majority(const ExplainContext& ctx) {
  if (!rf_majority_test(ctx)(LiteralFlags(ctx.n_literals() + 1, 1)))
    throw MajorityImpossible("fewer than floor(m/2)+1 trees vote for the predicted class (tied vote)");
}

inline CounterfactualWitness make_witness(const ExplainContext& ctx, const LiteralFlags& flips) {
  CounterfactualWitness w;
  w.flips = flags_to_ids(flips);
  const ForestVote vote = forest_vote_under_flips(ctx.model(), ctx.table(), ctx.bi(), w.flips, ctx.predicted());
  w.resulting_class = vote.label;
  w.disagreeing_count = vote.disagreeing;
  return w;
}

}  // namespace detail

/// Stage 1: is there a flip set avoiding `fixed` that changes the forest's
/// prediction? Returns one such set.
inline std::optional<CounterfactualWitness> rf_counterfactual_exists(
    const ExplainContext& ctx, const std::vector<LiteralId>& fixed, const Deadline& deadline = {}) {
  detail::require_model(ctx, ModelKind::RF, ExplanationKind::RfSufficient);
  FlipSearch search(ctx, ctx.thresholds().suf, deadline);
  for (LiteralId id : fixed) search.keep(id);
  auto flips = search.find_witness();
  if (!flips) return std::nullopt;
  return detail::make_witness(ctx, *flips);
}

/// Stage 2: deletion-based minimal set of fixed literals that blocks every
/// counterfactual. Literals are released in ascending id order.
inline Explanation rf_sufficient_one(const ExplainContext& ctx, const SearchOptions& options = {}) {
  detail::require_model(ctx, ModelKind::RF, ExplanationKind::RfSufficient);
  FlipSearch search(ctx, ctx.thresholds().suf, options.deadline);
  const auto order = permuted(ctx.all_literals(), options.seed);
  auto fixed = shrink_to_minimal(
      ctx.n_literals(), order,
      [&](const LiteralFlags& keep) {
        search.reset();
        for (std::size_t id = 1; id < keep.size(); ++id)
          if (keep[id]) search.keep(static_cast<LiteralId>(id));
        return !search.find_witness().has_value();
      },
      options.deadline);
  return ctx.make(ExplanationKind::RfSufficient, flags_to_ids(fixed));
}

/// Subset-minimal flip set that changes the forest's prediction; the
/// lexicographically smallest one when literals are decided from the highest
/// id down, i.e. low ids are preferred.
inline Explanation rf_contrastive_one(const ExplainContext& ctx, const SearchOptions& options = {}) {
  detail::require_model(ctx, ModelKind::RF, ExplanationKind::RfContrastive);
  FlipSearch search(ctx, ctx.thresholds().con, options.deadline);
  const auto order = permuted(detail::descending(ctx.all_literals()), options.seed);
  auto flips = search.lexmin(order);
  if (!flips) throw ContrastiveImpossible("no set of flipped literals changes the forest's prediction");
  return ctx.make(ExplanationKind::RfContrastive, flags_to_ids(*flips));
}

inline void rf_contrastive_all(const ExplainContext& ctx, const ExplanationSink& sink,
                               const SearchOptions& options = {}) {
  detail::require_model(ctx, ModelKind::RF, ExplanationKind::RfContrastive);
  FlipSearch search(ctx, ctx.thresholds().con, options.deadline);
  const auto order = permuted(detail::descending(ctx.all_literals()), options.seed);
  bool any = false;
  search.enumerate(order, [&](const std::vector<LiteralId>& ids) {
    any = true;
    sink(ctx.make(ExplanationKind::RfContrastive, ids));
  });
  if (!any) throw ContrastiveImpossible("no set of flipped literals changes the forest's prediction");
}

/// Complement of a maximal freed set that leaves at least floor(m/2)+1 trees
/// unable to leave the predicted class. Literals are freed shallowest split
/// first. Throws MajorityImpossible when no such set exists.
inline Explanation rf_majority_one(const ExplainContext& ctx, const SearchOptions& options = {}) {
  detail::require_model(ctx, ModelKind::RF, ExplanationKind::RfMajority);
  detail::require_majority(ctx);
  const auto order = permuted(detail::majority_order(ctx), options.seed);
  auto fixed = shrink_to_minimal(ctx.n_literals(), order, detail::rf_majority_test(ctx), options.deadline);
  return ctx.make(ExplanationKind::RfMajority, flags_to_ids(fixed));
}

inline void rf_majority_all(const ExplainContext& ctx, const ExplanationSink& sink,
                            const SearchOptions& options = {}) {
  detail::require_model(ctx, ModelKind::RF, ExplanationKind::RfMajority);
  detail::require_majority(ctx);
  const auto order = permuted(detail::majority_order(ctx), options.seed);
  enumerate_minimal(
      ctx.n_literals(), order, detail::rf_majority_test(ctx),
      [&](const std::vector<LiteralId>& ids) { sink(ctx.make(ExplanationKind::RfMajority, ids)); },
      options.deadline);
}

}  // namespace treexplain

#endif  // TREEXPLAIN_EXPLAIN_RF_HPP_
