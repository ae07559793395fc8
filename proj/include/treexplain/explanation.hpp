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

#ifndef TREEXPLAIN_EXPLANATION_HPP_
#define TREEXPLAIN_EXPLANATION_HPP_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "treexplain/common.hpp"
#include "treexplain/literals.hpp"
#include "treexplain/model.hpp"

namespace treexplain {

enum class ExplanationKind {
  DtSufficient,
  DtContrastive,
  RfSufficient,
  RfContrastive,
  RfMajority,
  BtTreeSpecific,
};

inline std::string_view to_string(ExplanationKind kind) {
  switch (kind) {
    case ExplanationKind::DtSufficient: return "dt-sufficient";
    case ExplanationKind::DtContrastive: return "dt-contrastive";
    case ExplanationKind::RfSufficient: return "rf-sufficient";
    case ExplanationKind::RfContrastive: return "rf-contrastive";
    case ExplanationKind::RfMajority: return "rf-majority";
    case ExplanationKind::BtTreeSpecific: return "bt-tree-specific";
  }
  return "?";
}

inline std::optional<ExplanationKind> parse_explanation_kind(std::string_view text) {
  for (auto kind : {ExplanationKind::DtSufficient, ExplanationKind::DtContrastive,
                    ExplanationKind::RfSufficient, ExplanationKind::RfContrastive,
                    ExplanationKind::RfMajority, ExplanationKind::BtTreeSpecific})
    if (to_string(kind) == text) return kind;
  return std::nullopt;
}

inline ModelKind model_kind_of(ExplanationKind kind) {
  switch (kind) {
    case ExplanationKind::DtSufficient:
    case ExplanationKind::DtContrastive: return ModelKind::DT;
    case ExplanationKind::BtTreeSpecific: return ModelKind::BT;
    default: return ModelKind::RF;
  }
}

/// What the literal set means depends on the kind:
///   DtSufficient, RfSufficient, RfMajority, BtTreeSpecific: literals kept at
///     their instance value (a subterm of the instance term);
///   DtContrastive: literals released to take either value;
///   RfContrastive: literals negated.
struct Explanation {
  ExplanationKind kind = ExplanationKind::DtSufficient;
  std::vector<LiteralId> literals;  // ascending
  std::vector<std::string> tests;   // rendered with instance-side polarity

  std::size_t length() const { return literals.size(); }
};

/// Everything an explainer needs about one (model, instance) query.
/// Holds a reference to the model, which must outlive the context.
class ExplainContext {
 public:
  ExplainContext(const Model& model, const Instance& instance)
      : model_(&model), table_(model) {
    check_instance(model, instance);
    bi_ = booleanize(table_, instance);
    prediction_ = predict(model, instance);
    if (model.kind == ModelKind::RF)
      thresholds_ = compute_thresholds(static_cast<int>(model.trees.size()), prediction_.label);
  }

  const Model& model() const { return *model_; }
  const LiteralTable& table() const { return table_; }
  const BoolInstance& bi() const { return bi_; }
  int predicted() const { return prediction_.label; }
  const Prediction& prediction() const { return prediction_; }
  const Thresholds& thresholds() const { return thresholds_; }
  std::size_t n_literals() const { return table_.size(); }
  std::size_t n_trees() const { return model_->trees.size(); }

  std::vector<LiteralId> all_literals() const {
    std::vector<LiteralId> ids(table_.size());
    std::iota(ids.begin(), ids.end(), 1);
    return ids;
  }

  Explanation make(ExplanationKind kind, std::vector<LiteralId> literals) const {
    std::sort(literals.begin(), literals.end());
    Explanation e{kind, std::move(literals), {}};
    for (LiteralId id : e.literals) e.tests.push_back(render_test(table_.test(id), bi_.value(id)));
    return e;
  }

 private:
  const Model* model_;
  LiteralTable table_;
  BoolInstance bi_;
  Prediction prediction_;
  Thresholds thresholds_;
};

struct SearchOptions {
  Deadline deadline;
  // 0 keeps the canonical literal order; anything else permutes it.
  std::uint64_t seed = 0;
};

/// Applies the seeded permutation, if any, to a canonical order.
inline std::vector<LiteralId> permuted(std::vector<LiteralId> order, std::uint64_t seed) {
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

/// Membership flags indexed by literal id (slot 0 unused).
using LiteralFlags = std::vector<char>;

inline std::vector<LiteralId> flags_to_ids(const LiteralFlags& flags) {
  std::vector<LiteralId> ids;
  for (std::size_t i = 1; i < flags.size(); ++i)
    if (flags[i]) ids.push_back(static_cast<LiteralId>(i));
  return ids;
}

inline LiteralFlags ids_to_flags(std::size_t n_literals, const std::vector<LiteralId>& ids) {
  LiteralFlags flags(n_literals + 1, 0);
  for (LiteralId id : ids) flags[id] = 1;
  return flags;
}

}  // namespace treexplain

#endif  // TREEXPLAIN_EXPLANATION_HPP_
