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

#ifndef TREEXPLAIN_EXPLAIN_BT_HPP_
#define TREEXPLAIN_EXPLAIN_BT_HPP_

#include <vector>

#include "treexplain/explain_dt.hpp"
#include "treexplain/explanation.hpp"
#include "treexplain/minimal_sets.hpp"
#include "treexplain/traversal.hpp"

namespace treexplain {

struct WeightSummary {
  std::vector<WeightRange> per_tree;
  Weight worst_sum = 0;
  Weight best_sum = 0;
};

/// Per-tree reachable weight extremes with `fixed` kept at instance values and
/// everything else free.
inline WeightSummary bt_weight_summary(const ExplainContext& ctx, const LiteralFlags& fixed) {
  ModeMap modes(ctx.n_literals(), Mode::Free);
  for (std::size_t id = 1; id < fixed.size(); ++id)
    if (fixed[id]) modes.set(static_cast<LiteralId>(id), Mode::Fixed);
  WeightSummary summary;
  for (std::size_t t = 0; t < ctx.n_trees(); ++t) {
    const WeightRange r = weight_range(TreeView(ctx.model(), ctx.table(), t), ctx.bi(), modes);
    summary.per_tree.push_back(r);
    summary.worst_sum += r.worst;
    summary.best_sum += r.best;
  }
  return summary;
}

inline WeightSummary bt_weight_summary(const ExplainContext& ctx, const std::vector<LiteralId>& fixed) {
  return bt_weight_summary(ctx, ids_to_flags(ctx.n_literals(), fixed));
}

/// Class 1 is guaranteed when the worst case still sums above zero, class 0
/// when the best case sums to zero or less.
inline bool bt_guarantees(const WeightSummary& summary, int predicted) {
  return predicted == 1 ? summary.worst_sum > 0 : summary.best_sum <= 0;
}

/// Minimal fixed subterm whose worst case (class 1) / best case (class 0)
/// weight sum still yields the prediction. Deletion in ascending id order.
inline Explanation bt_tree_specific_one(const ExplainContext& ctx, const SearchOptions& options = {}) {
  detail::require_model(ctx, ModelKind::BT, ExplanationKind::BtTreeSpecific);
  const auto order = permuted(ctx.all_literals(), options.seed);
  auto fixed = shrink_to_minimal(
      ctx.n_literals(), order,
      [&](const LiteralFlags& keep) { return bt_guarantees(bt_weight_summary(ctx, keep), ctx.predicted()); },
      options.deadline);
  return ctx.make(ExplanationKind::BtTreeSpecific, flags_to_ids(fixed));
}

}  // namespace treexplain

#endif  // TREEXPLAIN_EXPLAIN_BT_HPP_
