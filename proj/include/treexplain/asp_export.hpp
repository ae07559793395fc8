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

#ifndef TREEXPLAIN_ASP_EXPORT_HPP_
#define TREEXPLAIN_ASP_EXPORT_HPP_

#include <cstddef>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "treexplain/explanation.hpp"
#include "treexplain/literals.hpp"
#include "treexplain/model.hpp"

// Ground facts and encodings for cross-checking results with an external
// answer set solver. Nothing here runs a solver.
//
// Numbering follows the reference listings of each model family:
//   decision tree:  node(X,L,B)    with 0-based literals, no tree argument;
//   random forest:  node(T,X,L,B)  with 1-based trees and literals;
//   boosted trees:  node(T,X,L,B)  with 0-based trees and 1-based literals.

namespace treexplain {

namespace encodings {

inline constexpr std::string_view kDtSufficientEncoding = R"asp(1 {selected_literal(L):node(X,L,B)}.
node(X,L,0..1) :- selected_literal(L),node(X,L,B).
next_node(LX) :- node(0,L,1),left_node(0,LX).
next_node(RX) :- node(0,L,0),right_node(0,RX).
next_node(LX) :- next_node(X),node(X,L,1),left_node(X,LX).
next_node(RX) :- next_node(X),node(X,L,0),right_node(X,RX).
class(C):-next_node(X),leaf_node(X,C).
invalid :- class(0),class(1).
:- invalid.
#heuristic selected_literal(L). [1,true]
#show selected_literal/1.
)asp";

inline constexpr std::string_view kDtContrastiveEncoding = R"asp(1 {selected_literal(L):node(X,L,B)}.
node(X,L,0..1) :- selected_literal(L),node(X,L,B).
next_node(LX) :- node(0,L,1),left_node(0,LX).
next_node(RX) :- node(0,L,0),right_node(0,RX).
next_node(LX) :- next_node(X),node(X,L,1),left_node(X,LX).
next_node(RX) :- next_node(X),node(X,L,0),right_node(X,RX).
class(C) :- next_node(X),leaf_node(X,C).
valid :- class(0),class(1).
:- not valid.
#heuristic selected_literal(L). [1,false]
#show selected_literal/1.
)asp";

inline constexpr std::string_view kRfCounterfactualEncoding = R"asp(node(T,X,L) :- node(T,X,L,_).
new_node(T,X,L,0) :- change(L),node(T,X,L),feature(L,1).
new_node(T,X,L,1) :- change(L),node(T,X,L),feature(L,0).
new_node(T,X,L,B) :- node(T,X,L),feature(L,B),not change(L).
next_node(T,LX) :- new_node(T,0,L,1),left_node(T,0,LX).
next_node(T,RX) :- new_node(T,0,L,0),right_node(T,0,RX).
next_node(T,LX) :- next_node(T,X),new_node(T,X,L,1),left_node(T,X,LX).
next_node(T,RX) :- next_node(T,X),new_node(T,X,L,0),right_node(T,X,RX).
class(T,C) :- next_node(T,X),leaf_node(T,X,C).
invalid_tree(T) :- class(T,C),pre_forest(FC),C!=FC.
forest_changed :- VT=#count{T:invalid_tree(T)},tree_threshold(TH),VT>TH.
:- not forest_changed.
)asp";

inline constexpr std::string_view kRfMusTemplate = R"asp(feature(I,B). ...
fix_lit(I). ...
)asp";

inline constexpr std::string_view kRfContrastiveEncoding = R"asp(1 {selected_literal(L):node(T,X,L,B)}.
new_node(T,X,L,0) :- selected_literal(L),node(T,X,L,1).
new_node(T,X,L,1) :- selected_literal(L),node(T,X,L,0).
new_node(T,X,L,B) :- node(T,X,L,B),not selected_literal(L).
next_node(T,LX) :- new_node(T,0,L,1),left_node(T,0,LX).
next_node(T,RX) :- new_node(T,0,L,0),right_node(T,0,RX).
next_node(T,LX) :- next_node(T,X),new_node(T,X,L,1),left_node(T,X,LX).
next_node(T,RX) :- next_node(T,X),new_node(T,X,L,0),right_node(T,X,RX).
class(T,C):-next_node(T,X),leaf_node(T,X,C).
valid_tree(T) :- class(T,C),pre_forest(FC),C!=FC.
valid :- VT = #count{T : valid_tree(T)},con_tree_threshold(TH),VT>TH.
:- not valid.
#heuristic selected_literal(L). [1,false]
#show selected_literal/1.
)asp";

inline constexpr std::string_view kRfMajorityEncoding = R"asp(1 {selected_literal(L):node(T,X,L,B)}.
node(T,X,L,0..1) :- selected_literal(L),node(T,X,L,B).
next_node(T,LX) :- node(T,0,L,1),left_node(T,0,LX).
next_node(T,RX) :- node(T,0,L,0),right_node(T,0,RX).
next_node(T,LX) :- next_node(T,X),node(T,X,L,1),left_node(T,X,LX).
next_node(T,RX) :- next_node(T,X),node(T,X,L,0),right_node(T,X,RX).
class(T,C) :- next_node(T,X),leaf_node(T,X,C).
invalid_tree(T) :- class(T,C),pre_forest(FC),C!=FC.
valid :- VT = #count{T : invalid_tree(T)},majo_tree_threshold(TH),VT<TH.
:- not valid.
#heuristic selected_literal(L). [1,true]
#show selected_literal/1.
)asp";

inline constexpr std::string_view kBtTreeSpecificEncoding = R"asp(1 {selected_literal(L) : node(T,X,L,B) }.
node(T,X,L,0..1) :- node(T,X,L,B), not selected_literal(L).
next_node(T,LX) :- node(T,0,L,1), left_node(T,0,LX).
next_node(T,RX) :- node(T,0,L,0), right_node(T,0,RX).
next_node(T,LX) :- next_node(T,X), node(T,X,L,1), left_node(T,X,LX).
next_node(T,RX) :- next_node(T,X), node(T,X,L,0), right_node(T,X,RX).
weight(T,W) :- next_node(T,X), leaf_node(T,X,W).
best_weight(T,BW) :- weight(T, _), BW = #max{W:weight(T,W)}.
worst_weight(T,WW) :- weight(T, _), WW = #min{W:weight(T,W)}.
valid :- SW = #sum{BW:best_weight(_,BW)}, SW<=0, pre_forest(0).
valid :- SW = #sum{WW:worst_weight(_,WW)}, SW>0, pre_forest(1).
:- not valid.
#heuristic selected_literal(L). [1,false]
#show selected_literal/1.
)asp";

inline constexpr std::string_view kRfMusCommand = R"asp(python wasp_rewriter.py enc.lp ins.lp | clingo --output=smodels | ./wasp --mus=__debug__ -n0
)asp";

}  // namespace encodings

struct AspDocument {
  ExplanationKind kind = ExplanationKind::DtSufficient;
  std::string facts;
  std::string encoding;
  // RfSufficient only: instance part of the core-extraction stage.
  std::string stage2;

  std::string render() const {
    std::ostringstream out;
    out << "% " << to_string(kind) << ": facts\n" << facts;
    if (!stage2.empty()) out << "\n% stage 2 instance\n" << stage2;
    out << "\n% encoding\n" << encoding;
    return out.str();
  }
};

inline std::string export_encoding(ExplanationKind kind) {
  switch (kind) {
    case ExplanationKind::DtSufficient: return std::string(encodings::kDtSufficientEncoding);
    case ExplanationKind::DtContrastive: return std::string(encodings::kDtContrastiveEncoding);
    case ExplanationKind::RfSufficient: {
      std::string text = "% stage 1\n";
      text += encodings::kRfCounterfactualEncoding;
      text += "\n% stage 2\n";
      text += encodings::kRfMusTemplate;
      text += "\n% ";
      text += encodings::kRfMusCommand;
      return text;
    }
    case ExplanationKind::RfContrastive: return std::string(encodings::kRfContrastiveEncoding);
    case ExplanationKind::RfMajority: return std::string(encodings::kRfMajorityEncoding);
    case ExplanationKind::BtTreeSpecific: return std::string(encodings::kBtTreeSpecificEncoding);
  }
  throw NotApplicableError("no encoding for this kind");
}

namespace detail {

inline std::string leaf_text(const Tree& tree, int n) { return std::to_string(tree.leaf_value(n)); }

// node / leaf_node / left_node / right_node facts of one tree. `prefix` is the
// tree argument including its trailing comma, empty for a single tree.
inline void tree_facts(std::ostringstream& out, const Tree& tree, const std::vector<LiteralId>& lits,
                       const BoolInstance& bi, const std::string& prefix, int literal_base) {
  const int size = static_cast<int>(tree.nodes.size());
  for (int n = 0; n < size; ++n)
    if (!tree.is_leaf(n))
      out << "node(" << prefix << n << ',' << lits[n] - 1 + literal_base << ','
          << (bi.value(lits[n]) ? 1 : 0) << ").\n";
  for (int n = 0; n < size; ++n)
    if (tree.is_leaf(n)) out << "leaf_node(" << prefix << n << ',' << leaf_text(tree, n) << ").\n";
  for (int n = 0; n < size; ++n) {
    if (tree.is_leaf(n)) continue;
    out << "left_node(" << prefix << n << ',' << tree.split(n).left << ").\n";
    out << "right_node(" << prefix << n << ',' << tree.split(n).right << ").\n";
  }
}

}  // namespace detail

inline std::string export_facts(const ExplainContext& ctx, ExplanationKind kind) {
  const Model& model = ctx.model();
  if (model_kind_of(kind) != model.kind)
    throw NotApplicableError(std::string(to_string(kind)) + " does not match a " +
                             std::string(to_string(model.kind)) + " model");
  std::ostringstream out;
  switch (model.kind) {
    case ModelKind::DT:
      out << "pre_class(" << ctx.predicted() << ").\n";
      detail::tree_facts(out, model.trees[0], ctx.table().tree_literals(0), ctx.bi(), "", 0);
      break;
    case ModelKind::RF: {
      for (LiteralId id = 1; id <= static_cast<LiteralId>(ctx.n_literals()); ++id)
        out << "feature(" << id << ',' << (ctx.bi().value(id) ? 1 : 0) << ").\n";
      out << "\npre_forest(" << ctx.predicted() << ").\n";
      const Thresholds& th = ctx.thresholds();
      if (kind == ExplanationKind::RfSufficient) out << "tree_threshold(" << th.suf << ").\n";
      out << "con_tree_threshold(" << th.con << ").\n";
      out << "majo_tree_threshold(" << th.majo << ").\n";
      for (std::size_t t = 0; t < model.trees.size(); ++t) {
        out << '\n';
        detail::tree_facts(out, model.trees[t], ctx.table().tree_literals(t), ctx.bi(),
                           std::to_string(t + 1) + ",", 1);
      }
      break;
    }
    case ModelKind::BT:
      out << "pre_forest(" << ctx.predicted() << ").\n";
      for (std::size_t t = 0; t < model.trees.size(); ++t) {
        out << '\n';
        detail::tree_facts(out, model.trees[t], ctx.table().tree_literals(t), ctx.bi(),
                           std::to_string(t) + ",", 1);
      }
      break;
  }
  return out.str();
}

inline AspDocument export_document(const ExplainContext& ctx, ExplanationKind kind) {
  AspDocument doc;
  doc.kind = kind;
  doc.facts = export_facts(ctx, kind);
  doc.encoding = export_encoding(kind);
  if (kind == ExplanationKind::RfSufficient) {
    std::ostringstream stage2;
    stage2 << "{change(L) : not fix_lit(L),L=1.." << ctx.n_literals() << "}.\n";
    for (LiteralId id = 1; id <= static_cast<LiteralId>(ctx.n_literals()); ++id)
      stage2 << "fix_lit(" << id << ").\n";
    doc.stage2 = stage2.str();
  }
  return doc;
}

/// Tree structure as seen through the facts: literal and truth value per
/// internal node, value per leaf, children.
struct FactTree {
  std::map<int, std::pair<int, int>> tests;  // node -> (literal, truth)
  std::map<int, long long> leaves;
  std::map<int, int> left;
  std::map<int, int> right;
  friend bool operator==(const FactTree&, const FactTree&) = default;
};

struct FactModel {
  std::map<int, FactTree> trees;
  std::map<int, int> features;  // literal -> truth (forests)
  std::optional<int> predicted;
  friend bool operator==(const FactModel&, const FactModel&) = default;
};

/// Minimal reader for the facts emitted above. Unknown predicates are skipped.
inline FactModel parse_facts(std::string_view text) {
  static const std::regex fact(R"(([a-z_]+)\(([^()]*)\)\.)");
  FactModel out;
  const std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), fact); it != std::sregex_iterator(); ++it) {
    const std::string name = (*it)[1];
    std::vector<long long> args;
    std::stringstream in((*it)[2].str());
    std::string item;
    bool numeric = true;
    while (std::getline(in, item, ',')) {
      try {
        std::size_t used = 0;
        args.push_back(std::stoll(item, &used));
        numeric = numeric && used == item.size();
      } catch (const std::logic_error&) {
        numeric = false;
      }
    }
    if (!numeric) continue;
    const auto arity = args.size();
    auto tree_of = [&](std::size_t structural) -> FactTree& {
      return out.trees[arity > structural ? static_cast<int>(args[0]) : 0];
    };
    auto arg = [&](std::size_t structural, std::size_t i) {
      return args[arity > structural ? i + 1 : i];
    };
    if (name == "node" && (arity == 3 || arity == 4))
      tree_of(3).tests[static_cast<int>(arg(3, 0))] = {static_cast<int>(arg(3, 1)), static_cast<int>(arg(3, 2))};
    else if (name == "leaf_node" && (arity == 2 || arity == 3))
      tree_of(2).leaves[static_cast<int>(arg(2, 0))] = arg(2, 1);
    else if (name == "left_node" && (arity == 2 || arity == 3))
      tree_of(2).left[static_cast<int>(arg(2, 0))] = static_cast<int>(arg(2, 1));
    else if (name == "right_node" && (arity == 2 || arity == 3))
      tree_of(2).right[static_cast<int>(arg(2, 0))] = static_cast<int>(arg(2, 1));
    else if (name == "feature" && arity == 2)
      out.features[static_cast<int>(args[0])] = static_cast<int>(args[1]);
    else if ((name == "pre_class" || name == "pre_forest") && arity == 1)
      out.predicted = static_cast<int>(args[0]);
  }
  return out;
}

/// The structure `export_facts` encodes for this query, for comparison with
/// `parse_facts`.
inline FactModel expected_facts(const ExplainContext& ctx) {
  const Model& model = ctx.model();
  FactModel out;
  out.predicted = ctx.predicted();
  const int tree_base = model.kind == ModelKind::RF ? 1 : 0;
  const int literal_base = model.kind == ModelKind::DT ? 0 : 1;
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    FactTree& ft = out.trees[static_cast<int>(t) + tree_base];
    const Tree& tree = model.trees[t];
    for (int n = 0; n < static_cast<int>(tree.nodes.size()); ++n) {
      if (tree.is_leaf(n)) {
        ft.leaves[n] = tree.leaf_value(n);
        continue;
      }
      const LiteralId lit = ctx.table().literal_at(t, n);
      ft.tests[n] = {lit - 1 + literal_base, ctx.bi().value(lit) ? 1 : 0};
      ft.left[n] = tree.split(n).left;
      ft.right[n] = tree.split(n).right;
    }
  }
  if (model.kind == ModelKind::RF)
    for (LiteralId id = 1; id <= static_cast<LiteralId>(ctx.n_literals()); ++id)
      out.features[id] = ctx.bi().value(id) ? 1 : 0;
  return out;
}

}  // namespace treexplain

#endif  // TREEXPLAIN_ASP_EXPORT_HPP_
