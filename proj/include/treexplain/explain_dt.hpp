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

#ifndef TREEXPLAIN_EXPLAIN_DT_HPP_
#define TREEXPLAIN_EXPLAIN_DT_HPP_

#include <functional>
#include <vector>

#include "treexplain/explanation.hpp"
#include "treexplain/minimal_sets.hpp"
#include "treexplain/traversal.hpp"

namespace treexplain {

using ExplanationSink = std::function<void(const Explanation&)>;

namespace detail {

inline void require_model(const ExplainContext& ctx, ModelKind kind, ExplanationKind ekind) {
  if (ctx.model().kind != kind)
    throw NotApplicableError(std::string(to_string(ekind)) + " is not applicable to a " +
                             std::string(to_string(ctx.model().kind)) + " model");
}

// Sufficient: keeping `fixed` and freeing every other literal still only
// reaches leaves of the predicted class.
inline auto dt_sufficient_test(const ExplainContext& ctx) {
  return [&ctx, view = TreeView(ctx.model(), ctx.table(), 0)](const LiteralFlags& fixed) {
    ModeMap modes(ctx.n_literals(), Mode::Free);
    for (std::size_t id = 1; id < fixed.size(); ++id)
      if (fixed[id]) modes.set(static_cast<LiteralId>(id), Mode::Fixed);
    return class_set(view, ctx.bi(), modes) == class_bit(ctx.predicted());
  };
}

// Contrastive: freeing `released` makes both classes reachable.
inline auto dt_contrastive_test(const ExplainContext& ctx) {
  return [&ctx, view = TreeView(ctx.model(), ctx.table(), 0)](const LiteralFlags& released) {
    ModeMap modes(ctx.n_literals());
    for (std::size_t id = 1; id < released.size(); ++id)
      if (released[id]) modes.set(static_cast<LiteralId>(id), Mode::Free);
    return class_set(view, ctx.bi(), modes) == (kClass0 | kClass1);
  };
}

inline std::vector<LiteralId> dt_order(const ExplainContext& ctx, const SearchOptions& options) {
  return permuted(ctx.table().literals_of_tree(0), options.seed);
}

}  // namespace detail

/// Smallest subterm of the instance term, in the ascending-id sense, that
/// keeps the prediction whatever values the other literals take. Equivalent
/// to growing the freed set in ascending id order and taking the complement.
inline Explanation dt_sufficient_one(const ExplainContext& ctx, const SearchOptions& options = {}) {
  detail::require_model(ctx, ModelKind::DT, ExplanationKind::DtSufficient);
  const auto order = detail::dt_order(ctx, options);
  auto fixed = shrink_to_minimal(ctx.n_literals(), order, detail::dt_sufficient_test(ctx),
                                 options.deadline);
  return ctx.make(ExplanationKind::DtSufficient, flags_to_ids(fixed));
}

inline void dt_sufficient_all(const ExplainContext& ctx, const ExplanationSink& sink,
                              const SearchOptions& options = {}) {
  detail::require_model(ctx, ModelKind::DT, ExplanationKind::DtSufficient);
  const auto order = detail::dt_order(ctx, options);
  enumerate_minimal(
      ctx.n_literals(), order, detail::dt_sufficient_test(ctx),
      [&](const std::vector<LiteralId>& ids) { sink(ctx.make(ExplanationKind::DtSufficient, ids)); },
      options.deadline);
}

/// Minimal set of literals whose release lets the tree reach the other class.
/// Throws ContrastiveImpossible when the tree is constant.
inline Explanation dt_contrastive_one(const ExplainContext& ctx, const SearchOptions& options = {}) {
  detail::require_model(ctx, ModelKind::DT, ExplanationKind::DtContrastive);
  const auto order = detail::dt_order(ctx, options);
  auto valid = detail::dt_contrastive_test(ctx);
  if (!valid(ids_to_flags(ctx.n_literals(), order)))
    throw ContrastiveImpossible("the tree predicts the same class everywhere");
  auto released = shrink_to_minimal(ctx.n_literals(), order, valid, options.deadline);
  return ctx.make(ExplanationKind::DtContrastive, flags_to_ids(released));
}

inline void dt_contrastive_all(const ExplainContext& ctx, const ExplanationSink& sink,
                               const SearchOptions& options = {}) {
  detail::require_model(ctx, ModelKind::DT, ExplanationKind::DtContrastive);
  const auto order = detail::dt_order(ctx, options);
  auto valid = detail::dt_contrastive_test(ctx);
  if (!valid(ids_to_flags(ctx.n_literals(), order)))
    throw ContrastiveImpossible("the tree predicts the same class everywhere");
  enumerate_minimal(
      ctx.n_literals(), order, valid,
      [&](const std::vector<LiteralId>& ids) { sink(ctx.make(ExplanationKind::DtContrastive, ids)); },
      options.deadline);
}

}  // namespace treexplain

#endif  // TREEXPLAIN_EXPLAIN_DT_HPP_
