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

#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace treexplain {
namespace {

using testing::example;

int count_internal(const Tree& tree) {
  int n = 0;
  for (int i = 0; i < static_cast<int>(tree.nodes.size()); ++i) n += !tree.is_leaf(i);
  return n;
}

TEST(ModelTest, LoadsDecisionTreeExample) {
  const auto q = example("dt_example");
  EXPECT_EQ(q.model.kind, ModelKind::DT);
  ASSERT_EQ(q.model.trees.size(), 1u);
  EXPECT_EQ(count_internal(q.model.trees[0]), 3);
  EXPECT_EQ(q.model.trees[0].nodes.size() - 3, 4u);
}

TEST(ModelTest, SingleLeafTreePredictsItsClass) {
  const Model m = load_model(R"({"kind":"dt","n_features":2,"trees":[{"nodes":[{"type":"leaf","class":1}]}]})");
  EXPECT_EQ(predict(m, Instance{{0, 0}}).label, 1);
  EXPECT_EQ(predict(m, Instance{{-5, 9}}).label, 1);
}

TEST(ModelTest, LoadsBoostedExampleWithScaledWeights) {
  const auto q = example("bt_example");
  EXPECT_EQ(q.model.kind, ModelKind::BT);
  EXPECT_EQ(q.model.weight_scale, 1000);
  std::vector<Weight> leaves;
  const Tree& t0 = q.model.trees[0];
  for (int n = 0; n < static_cast<int>(t0.nodes.size()); ++n)
    if (t0.is_leaf(n)) leaves.push_back(t0.leaf_value(n));
  EXPECT_EQ(leaves, (std::vector<Weight>{-500, 200, 100, 600}));
}

TEST(ModelTest, PredictsExamples) {
  EXPECT_EQ(predict(example("dt_example").model, example("dt_example").instance).label, 1);
  const auto rf = example("rf_example");
  EXPECT_EQ(predict(rf.model, rf.instance).label, 1);
  for (const Tree& tree : rf.model.trees) EXPECT_EQ(tree.leaf_value(reached_leaf(tree, rf.instance)), 1);
  const auto bt = example("bt_example");
  const Prediction p = predict(bt.model, bt.instance);
  EXPECT_EQ(p.label, 1);
  ASSERT_TRUE(p.raw_weight.has_value());
  EXPECT_EQ(*p.raw_weight, 1500);
  EXPECT_FALSE(predict(rf.model, rf.instance).raw_weight.has_value());
}

TEST(ModelTest, ForestTieAndZeroWeightPredictZero) {
  const Model rf = load_model(R"({"kind":"rf","n_features":1,"trees":[
      {"nodes":[{"type":"leaf","class":1}]},{"nodes":[{"type":"leaf","class":0}]}]})");
  EXPECT_EQ(predict(rf, Instance{{0}}).label, 0);
  const Model bt = load_model(R"({"kind":"bt","n_features":1,"trees":[
      {"nodes":[{"type":"leaf","weight":300}]},{"nodes":[{"type":"leaf","weight":-300}]}]})");
  const Prediction p = predict(bt, Instance{{0}});
  EXPECT_EQ(p.label, 0);
  EXPECT_EQ(*p.raw_weight, 0);
}

TEST(ModelTest, RoundTripPreservesExamples) {
  for (const char* name : {"dt_example", "rf_example", "bt_example"}) {
    const Model m = example(name).model;
    EXPECT_EQ(load_model(serialize_model(m)), m) << name;
  }
}

TEST(ModelTest, RoundTripPreservesRandomModels) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Model m = testing::random_query(seed).model;
    EXPECT_EQ(load_model(serialize_model(m)), m) << seed;
  }
}

TEST(ModelTest, EvaluatesAllTestOperators) {
  const SplitTest le{0, TestOp::LE, 2.0, {}};
  const SplitTest lt{0, TestOp::LT, 2.0, {}};
  const SplitTest in{0, TestOp::IN, 0.0, {1.0, 3.0}};
  EXPECT_TRUE(le.evaluate(2.0));
  EXPECT_FALSE(lt.evaluate(2.0));
  EXPECT_TRUE(lt.evaluate(1.5));
  EXPECT_TRUE(in.evaluate(3.0));
  EXPECT_FALSE(in.evaluate(2.0));
}

TEST(ModelTest, LoadsInstancesFromJsonAndCsv) {
  EXPECT_EQ(load_instance("[1, 2.5, -3]").values, (std::vector<double>{1, 2.5, -3}));
  EXPECT_EQ(load_instance("1,2.5,-3\n").values, (std::vector<double>{1, 2.5, -3}));
  EXPECT_THROW(load_instance("1,x,3"), ModelError);
  EXPECT_THROW(load_instance("1,2\n3,4\n"), ModelError);
  EXPECT_THROW(load_instance("[1, \"a\"]"), ModelError);
}

TEST(ModelTest, RejectsInstanceOfWrongLength) {
  const auto q = example("dt_example");
  EXPECT_THROW(predict(q.model, Instance{{1, 2}}), ModelError);
}

void expect_model_error(const std::string& text, const std::string& fragment) {
  try {
    load_model(text);
    ADD_FAILURE() << "accepted: " << text;
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(ModelTest, SchemaErrorsAreReported) {
  expect_model_error("{", "malformed JSON");
  expect_model_error(R"({"n_features":1,"trees":[]})", "kind");
  expect_model_error(R"({"kind":"xx","n_features":1,"trees":[]})", "unknown model kind");
  expect_model_error(R"({"kind":"dt","n_features":1,"trees":[]})", "no trees");
  expect_model_error(R"({"kind":"dt","n_features":1,"trees":[{"nodes":[{"type":"leaf"}]}]})", "exactly one");
  expect_model_error(R"({"kind":"dt","n_features":"1","trees":[]})", "n_features");
}

TEST(ModelTest, StructuralErrorsNameTheNode) {
  expect_model_error(R"({"kind":"dt","n_features":1,"trees":[{"nodes":[
      {"type":"split","feature":0,"op":"le","threshold":1,"left":1,"right":5},
      {"type":"leaf","class":1}]}]})", "tree 0 node 0");
  expect_model_error(R"({"kind":"rf","n_features":1,"trees":[{"nodes":[{"type":"leaf","class":1}]},{"nodes":[
      {"type":"split","feature":0,"op":"le","threshold":1,"left":1,"right":2},
      {"type":"leaf","class":1},{"type":"leaf","weight":5}]}]})", "tree 1 node 2");
  expect_model_error(R"({"kind":"bt","n_features":1,"trees":[{"nodes":[{"type":"leaf","class":1}]}]})",
                     "class leaf in a boosted model");
  expect_model_error(R"({"kind":"dt","n_features":1,"trees":[{"nodes":[
      {"type":"split","feature":3,"op":"le","threshold":1,"left":1,"right":2},
      {"type":"leaf","class":1},{"type":"leaf","class":0}]}]})", "feature 3 out of range");
  // Node 2 has two parents.
  expect_model_error(R"({"kind":"dt","n_features":1,"trees":[{"nodes":[
      {"type":"split","feature":0,"op":"le","threshold":1,"left":2,"right":2},
      {"type":"leaf","class":1},{"type":"leaf","class":0}]}]})", "parents");
  // Nodes 1 and 2 form a cycle unreachable from the root.
  expect_model_error(R"({"kind":"dt","n_features":1,"trees":[{"nodes":[
      {"type":"leaf","class":1},
      {"type":"split","feature":0,"op":"le","threshold":1,"left":2,"right":3},
      {"type":"split","feature":0,"op":"le","threshold":2,"left":1,"right":4},
      {"type":"leaf","class":0},{"type":"leaf","class":0}]}]})", "tree 0");
  expect_model_error(R"({"kind":"dt","n_features":1,"trees":[{"nodes":[
      {"type":"split","feature":0,"op":"in","threshold":[],"left":1,"right":2},
      {"type":"leaf","class":1},{"type":"leaf","class":0}]}]})", "empty value set");
  expect_model_error(R"({"kind":"dt","n_features":1,"trees":[{"nodes":[{"type":"leaf","class":2}]}]})",
                     "class must be 0 or 1");
}

TEST(ModelTest, ForestPredictionIsMajorityOfTrees) {
  // Larger shapes than the property suites: up to 5 trees of depth 4.
  testing::SmallModelParams params;
  params.max_trees = 5;
  params.max_depth = 4;
  std::mt19937_64 rng(7);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto q = testing::random_query(seed, ModelKind::RF, params);
    Instance x = q.instance;
    for (double& v : x.values) v = std::uniform_int_distribution<int>(0, params.grid)(rng);
    int ones = 0;
    for (const Tree& tree : q.model.trees) ones += tree.leaf_value(reached_leaf(tree, x)) == 1;
    EXPECT_EQ(predict(q.model, x).label, 2 * ones > static_cast<int>(q.model.trees.size()) ? 1 : 0);
  }
}

TEST(ModelTest, BoostedPredictionIsSignOfLeafSum) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto q = testing::random_query(seed, ModelKind::BT);
    Weight sum = 0;
    for (const Tree& tree : q.model.trees) sum += tree.leaf_value(reached_leaf(tree, q.instance));
    const Prediction p = predict(q.model, q.instance);
    EXPECT_EQ(*p.raw_weight, sum);
    EXPECT_EQ(p.label, sum > 0 ? 1 : 0);
  }
}

}  // namespace
}  // namespace treexplain
