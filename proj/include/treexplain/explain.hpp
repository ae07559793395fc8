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

#ifndef TREEXPLAIN_EXPLAIN_HPP_
#define TREEXPLAIN_EXPLAIN_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "treexplain/explain_bt.hpp"
#include "treexplain/explain_dt.hpp"
#include "treexplain/explain_rf.hpp"
#include "treexplain/explanation.hpp"

namespace treexplain {

// User-facing explanation family; the model kind picks the concrete kind.
enum class Request { Sufficient, Contrastive, Majority, TreeSpecific };

inline std::optional<Request> parse_request(std::string_view text) {
  if (text == "sufficient") return Request::Sufficient;
  if (text == "contrastive") return Request::Contrastive;
  if (text == "majority") return Request::Majority;
  if (text == "tree-specific") return Request::TreeSpecific;
  return std::nullopt;
}

inline ExplanationKind resolve_kind(ModelKind model, Request request) {
  using K = ExplanationKind;
  const std::string name = request == Request::Sufficient    ? "sufficient"
                           : request == Request::Contrastive ? "contrastive"
                           : request == Request::Majority    ? "majority"
                                                             : "tree-specific";
  auto na = [&](const char* model_name) -> NotApplicableError {
    return NotApplicableError(name + " explanations are not applicable to " + model_name + " (n/a)");
  };
  switch (model) {
    case ModelKind::DT:
      if (request == Request::Sufficient) return K::DtSufficient;
      if (request == Request::Contrastive) return K::DtContrastive;
      throw na("decision trees");
    case ModelKind::RF:
      if (request == Request::Sufficient) return K::RfSufficient;
      if (request == Request::Contrastive) return K::RfContrastive;
      if (request == Request::Majority) return K::RfMajority;
      throw na("random forests");
    case ModelKind::BT:
      if (request == Request::TreeSpecific) return K::BtTreeSpecific;
      if (request == Request::Majority) throw na("boosted trees");
      throw NotApplicableError(name + " explanations are not implemented for boosted trees");
  }
  throw NotApplicableError("unknown model kind");
}

/// Kinds with a complete enumeration procedure.
inline bool supports_enumeration(ExplanationKind kind) {
  return kind != ExplanationKind::RfSufficient && kind != ExplanationKind::BtTreeSpecific;
}

struct ExplainResult {
  std::vector<Explanation> explanations;
  // Set when the deadline expired. Enumerations then hold the explanations
  // found so far; single-explanation runs hold a valid set whose minimality
  // was not established, when one was available.
  bool timed_out = false;
};

inline ExplainResult explain(const ExplainContext& ctx, ExplanationKind kind, bool enumerate,
                             const SearchOptions& options = {}) {
  if (model_kind_of(kind) != ctx.model().kind)
    throw NotApplicableError(std::string(to_string(kind)) + " does not match a " +
                             std::string(to_string(ctx.model().kind)) + " model");
  if (enumerate && !supports_enumeration(kind))
    throw NotApplicableError("enumeration is not supported for " + std::string(to_string(kind)));
  ExplainResult result;
  auto sink = [&](const Explanation& e) { result.explanations.push_back(e); };
  try {
    switch (kind) {
      case ExplanationKind::DtSufficient:
        if (enumerate) dt_sufficient_all(ctx, sink, options);
        else sink(dt_sufficient_one(ctx, options));
        break;
      case ExplanationKind::DtContrastive:
        if (enumerate) dt_contrastive_all(ctx, sink, options);
        else sink(dt_contrastive_one(ctx, options));
        break;
      case ExplanationKind::RfSufficient:
        sink(rf_sufficient_one(ctx, options));
        break;
      case ExplanationKind::RfContrastive:
        if (enumerate) rf_contrastive_all(ctx, sink, options);
        else sink(rf_contrastive_one(ctx, options));
        break;
      case ExplanationKind::RfMajority:
        if (enumerate) rf_majority_all(ctx, sink, options);
        else sink(rf_majority_one(ctx, options));
        break;
      case ExplanationKind::BtTreeSpecific:
        sink(bt_tree_specific_one(ctx, options));
        break;
    }
  } catch (const PartialTimeout& partial) {
    // A single explanation that was still being shrunk: valid, minimality
    // not established.
    result.explanations.push_back(ctx.make(kind, flags_to_ids(partial.best())));
    result.timed_out = true;
  } catch (const TimeoutError&) {
    result.timed_out = true;
  }
  return result;
}

}  // namespace treexplain

#endif  // TREEXPLAIN_EXPLAIN_HPP_
