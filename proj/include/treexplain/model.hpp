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

#ifndef TREEXPLAIN_MODEL_HPP_
#define TREEXPLAIN_MODEL_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "treexplain/common.hpp"

namespace treexplain {

enum class ModelKind { DT, RF, BT };
enum class TestOp { LE, LT, IN };

inline std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::DT: return "dt";
    case ModelKind::RF: return "rf";
    case ModelKind::BT: return "bt";
  }
  return "?";
}

inline std::string_view to_string(TestOp op) {
  switch (op) {
    case TestOp::LE: return "le";
    case TestOp::LT: return "lt";
    case TestOp::IN: return "in";
  }
  return "?";
}

/// A node test over one feature: `x <= c`, `x < c` or `x in {v...}`.
/// For IN tests `values` is kept sorted and duplicate-free.
struct SplitTest {
  int feature = 0;
  TestOp op = TestOp::LE;
  double threshold = 0.0;
  std::vector<double> values;

  bool evaluate(double x) const {
    switch (op) {
      case TestOp::LE: return x <= threshold;
      case TestOp::LT: return x < threshold;
      case TestOp::IN: return std::binary_search(values.begin(), values.end(), x);
    }
    return false;
  }

  friend bool operator==(const SplitTest&, const SplitTest&) = default;
  friend auto operator<=>(const SplitTest&, const SplitTest&) = default;
};

/// Internal node; `left` is taken when the test holds.
struct Split {
  SplitTest test;
  int left = 0;
  int right = 0;
  friend bool operator==(const Split&, const Split&) = default;
};

struct LeafClass {
  int label = 0;
  friend bool operator==(const LeafClass&, const LeafClass&) = default;
};

struct LeafWeight {
  Weight weight = 0;
  friend bool operator==(const LeafWeight&, const LeafWeight&) = default;
};

using TreeNode = std::variant<Split, LeafClass, LeafWeight>;

/// Array-encoded binary tree, node 0 is the root.
struct Tree {
  std::vector<TreeNode> nodes;

  bool is_leaf(int n) const { return !std::holds_alternative<Split>(nodes[n]); }
  const Split& split(int n) const { return std::get<Split>(nodes[n]); }

  // Leaf value: class label or scaled weight.
  Weight leaf_value(int n) const {
    if (const auto* c = std::get_if<LeafClass>(&nodes[n])) return c->label;
    return std::get<LeafWeight>(nodes[n]).weight;
  }

  // Node ids in depth-first (pre-order, left first) order.
  std::vector<int> preorder() const {
    std::vector<int> order;
    if (nodes.empty()) return order;
    std::vector<int> stack{0};
    while (!stack.empty()) {
      int n = stack.back();
      stack.pop_back();
      order.push_back(n);
      if (!is_leaf(n)) {
        stack.push_back(split(n).right);
        stack.push_back(split(n).left);
      }
    }
    return order;
  }

  friend bool operator==(const Tree&, const Tree&) = default;
};

struct Model {
  ModelKind kind = ModelKind::DT;
  int n_features = 0;
  int weight_scale = 1000;
  std::vector<Tree> trees;

  friend bool operator==(const Model&, const Model&) = default;
};

struct Instance {
  std::vector<double> values;
  friend bool operator==(const Instance&, const Instance&) = default;
};

struct Prediction {
  int label = 0;
  std::optional<Weight> raw_weight;  // BT only
};

namespace detail {

[[noreturn]] inline void fail(const std::string& what) { throw ModelError(what); }

inline std::string where(std::size_t tree, std::size_t node) {
  std::ostringstream out;
  out << "tree " << tree << " node " << node << ": ";
  return out.str();
}

}  // namespace detail

/// Checks the structural invariants; throws ModelError naming the offending
/// tree/node.
inline void validate(const Model& model) {
  using detail::fail;
  using detail::where;
  if (model.n_features < 0) fail("n_features must be non-negative");
  if (model.trees.empty()) fail("model has no trees");
  if (model.kind == ModelKind::DT && model.trees.size() != 1)
    fail("a dt model must contain exactly one tree");
  if (model.kind == ModelKind::BT && model.weight_scale <= 0)
    fail("weight_scale must be positive");

  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    const Tree& tree = model.trees[t];
    const auto size = static_cast<int>(tree.nodes.size());
    if (size == 0) fail("tree " + std::to_string(t) + ": no nodes");
    std::vector<int> parents(tree.nodes.size(), 0);
    for (int n = 0; n < size; ++n) {
      const TreeNode& node = tree.nodes[n];
      if (const auto* s = std::get_if<Split>(&node)) {
        const SplitTest& test = s->test;
        if (test.feature < 0 || test.feature >= model.n_features)
          fail(where(t, n) + "feature " + std::to_string(test.feature) +
               " out of range");
        if (test.op == TestOp::IN) {
          if (test.values.empty()) fail(where(t, n) + "empty value set");
          for (double v : test.values)
            if (!std::isfinite(v)) fail(where(t, n) + "non-finite value");
        } else if (!std::isfinite(test.threshold)) {
          fail(where(t, n) + "non-finite threshold");
        }
        for (int child : {s->left, s->right}) {
          if (child <= 0 || child >= size)
            fail(where(t, n) + "child index " + std::to_string(child) +
                 " out of range");
          ++parents[child];
        }
      } else if (std::holds_alternative<LeafClass>(node)) {
        if (model.kind == ModelKind::BT)
          fail(where(t, n) + "class leaf in a boosted model");
        int label = std::get<LeafClass>(node).label;
        if (label != 0 && label != 1)
          fail(where(t, n) + "class must be 0 or 1");
      } else if (model.kind != ModelKind::BT) {
        fail(where(t, n) + "weight leaf in a classification model");
      }
    }
    for (int n = 1; n < size; ++n)
      if (parents[n] != 1)
        fail(where(t, n) + "node has " + std::to_string(parents[n]) +
             " parents");
    // One parent per node plus full reachability rules out cycles.
    if (static_cast<int>(tree.preorder().size()) != size)
      fail("tree " + std::to_string(t) + ": nodes unreachable from the root");
  }
}

inline Model load_model_json(const nlohmann::json& doc) {
  using detail::fail;
  using detail::where;
  using nlohmann::json;
  auto require = [](const json& obj, const char* key, const std::string& ctx) -> const json& {
    if (!obj.is_object() || !obj.contains(key))
      fail(ctx + "missing field '" + key + "'");
    return obj.at(key);
  };
  auto as_int = [](const json& v, const std::string& ctx) -> long long {
    if (!v.is_number_integer()) fail(ctx + "expected an integer");
    return v.get<long long>();
  };

  Model model;
  const json& kind = require(doc, "kind", "");
  if (!kind.is_string()) fail("field 'kind' must be a string");
  const auto k = kind.get<std::string>();
  if (k == "dt") model.kind = ModelKind::DT;
  else if (k == "rf") model.kind = ModelKind::RF;
  else if (k == "bt") model.kind = ModelKind::BT;
  else fail("unknown model kind '" + k + "'");

  model.n_features = static_cast<int>(as_int(require(doc, "n_features", ""), "n_features: "));
  if (doc.contains("weight_scale"))
    model.weight_scale = static_cast<int>(as_int(doc.at("weight_scale"), "weight_scale: "));

  const json& trees = require(doc, "trees", "");
  if (!trees.is_array()) fail("field 'trees' must be an array");
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const std::string tctx = "tree " + std::to_string(t) + ": ";
    const json& nodes = require(trees[t], "nodes", tctx);
    if (!nodes.is_array()) fail(tctx + "'nodes' must be an array");
    Tree tree;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      const std::string ctx = where(t, n);
      const json& node = nodes[n];
      const json& type = require(node, "type", ctx);
      if (type == "split") {
        Split split;
        split.test.feature = static_cast<int>(as_int(require(node, "feature", ctx), ctx + "feature: "));
        const json& op = require(node, "op", ctx);
        if (op == "le") split.test.op = TestOp::LE;
        else if (op == "lt") split.test.op = TestOp::LT;
        else if (op == "in") split.test.op = TestOp::IN;
        else fail(ctx + "unknown op");
        const json& threshold = require(node, "threshold", ctx);
        if (split.test.op == TestOp::IN) {
          if (!threshold.is_array()) fail(ctx + "'in' threshold must be an array");
          for (const json& v : threshold) {
            if (!v.is_number()) fail(ctx + "value set entries must be numbers");
            split.test.values.push_back(v.get<double>());
          }
          std::sort(split.test.values.begin(), split.test.values.end());
          split.test.values.erase(
              std::unique(split.test.values.begin(), split.test.values.end()),
              split.test.values.end());
        } else {
          if (!threshold.is_number()) fail(ctx + "threshold must be a number");
          split.test.threshold = threshold.get<double>();
        }
        split.left = static_cast<int>(as_int(require(node, "left", ctx), ctx + "left: "));
        split.right = static_cast<int>(as_int(require(node, "right", ctx), ctx + "right: "));
        tree.nodes.emplace_back(split);
      } else if (type == "leaf") {
        const bool has_class = node.contains("class");
        const bool has_weight = node.contains("weight");
        if (has_class == has_weight)
          fail(ctx + "leaf needs exactly one of 'class' or 'weight'");
        if (has_class)
          tree.nodes.emplace_back(LeafClass{static_cast<int>(as_int(node.at("class"), ctx + "class: "))});
        else
          tree.nodes.emplace_back(LeafWeight{as_int(node.at("weight"), ctx + "weight: ")});
      } else {
        fail(ctx + "unknown node type");
      }
    }
    model.trees.push_back(std::move(tree));
  }
  validate(model);
  return model;
}

inline Model load_model(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(std::string("malformed JSON: ") + e.what());
  }
  return load_model_json(doc);
}

inline nlohmann::json to_json(const Model& model) {
  using nlohmann::json;
  json doc;
  doc["kind"] = std::string(to_string(model.kind));
  doc["n_features"] = model.n_features;
  if (model.kind == ModelKind::BT) doc["weight_scale"] = model.weight_scale;
  json trees = json::array();
  for (const Tree& tree : model.trees) {
    json nodes = json::array();
    for (const TreeNode& node : tree.nodes) {
      json out;
      if (const auto* s = std::get_if<Split>(&node)) {
        out["type"] = "split";
        out["feature"] = s->test.feature;
        out["op"] = std::string(to_string(s->test.op));
        if (s->test.op == TestOp::IN) out["threshold"] = s->test.values;
        else out["threshold"] = s->test.threshold;
        out["left"] = s->left;
        out["right"] = s->right;
      } else if (const auto* c = std::get_if<LeafClass>(&node)) {
        out["type"] = "leaf";
        out["class"] = c->label;
      } else {
        out["type"] = "leaf";
        out["weight"] = std::get<LeafWeight>(node).weight;
      }
      nodes.push_back(std::move(out));
    }
    trees.push_back(json{{"nodes", std::move(nodes)}});
  }
  doc["trees"] = std::move(trees);
  return doc;
}

inline std::string serialize_model(const Model& model) { return to_json(model).dump(2); }

/// Accepts a JSON array of numbers or a single CSV row.
inline Instance load_instance(std::string_view text) {
  Instance inst;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '[') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ModelError(std::string("malformed instance JSON: ") + e.what());
    }
    for (const auto& v : doc) {
      if (!v.is_number()) throw ModelError("instance entries must be numbers");
      inst.values.push_back(v.get<double>());
    }
    return inst;
  }
  std::string row(text);
  if (auto nl = row.find_first_of("\r\n"); nl != std::string::npos) {
    if (row.find_first_not_of(" \t\r\n", nl) != std::string::npos)
      throw ModelError("CSV instance must be a single row");
    row.resize(nl);
  }
  std::istringstream cells(row);
  std::string cell;
  while (std::getline(cells, cell, ',')) {
    try {
      std::size_t used = 0;
      inst.values.push_back(std::stod(cell, &used));
      if (cell.find_first_not_of(" \t", used) != std::string::npos)
        throw ModelError("bad CSV cell '" + cell + "'");
    } catch (const std::logic_error&) {
      throw ModelError("bad CSV cell '" + cell + "'");
    }
  }
  return inst;
}

inline void check_instance(const Model& model, const Instance& instance) {
  if (static_cast<int>(instance.values.size()) != model.n_features)
    throw ModelError("instance has " + std::to_string(instance.values.size()) +
                     " values, model expects " + std::to_string(model.n_features));
}

/// Leaf reached by following the tests on concrete feature values.
inline int reached_leaf(const Tree& tree, const Instance& instance) {
  int n = 0;
  while (!tree.is_leaf(n)) {
    const Split& s = tree.split(n);
    n = s.test.evaluate(instance.values[s.test.feature]) ? s.left : s.right;
  }
  return n;
}

/// Majority vote for RF (strict, a tie predicts 0), sign of the weight sum
/// for BT (a zero sum predicts 0).
inline Prediction predict(const Model& model, const Instance& instance) {
  check_instance(model, instance);
  Prediction out;
  switch (model.kind) {
    case ModelKind::DT:
      out.label = static_cast<int>(model.trees[0].leaf_value(reached_leaf(model.trees[0], instance)));
      break;
    case ModelKind::RF: {
      std::size_t ones = 0;
      for (const Tree& tree : model.trees)
        ones += tree.leaf_value(reached_leaf(tree, instance)) == 1;
      out.label = 2 * ones > model.trees.size() ? 1 : 0;
      break;
    }
    case ModelKind::BT: {
      Weight sum = 0;
      for (const Tree& tree : model.trees) sum += tree.leaf_value(reached_leaf(tree, instance));
      out.raw_weight = sum;
      out.label = sum > 0 ? 1 : 0;
      break;
    }
  }
  return out;
}

}  // namespace treexplain

#endif  // TREEXPLAIN_MODEL_HPP_
