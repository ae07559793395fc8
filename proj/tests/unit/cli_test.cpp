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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"

namespace treexplain {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::data_path;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("treexplain_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }

  std::vector<std::string> query(const std::string& cmd, const std::string& example) const {
    return {cmd, "--model", data_path(example + ".json"), "--instance", data_path(example + ".instance.json")};
  }

  fs::path dir_;
};

std::vector<std::vector<int>> literals_of(const json& report) {
  std::vector<std::vector<int>> out;
  for (const json& e : report["explanations"]) out.push_back(e["literals"].get<std::vector<int>>());
  return out;
}

std::vector<std::string> with(std::vector<std::string> args, const std::vector<std::string>& more) {
  args.insert(args.end(), more.begin(), more.end());
  return args;
}

TEST_F(CliTest, ExplainSufficientOnDecisionTree) {
  const Outcome o = run(with(query("explain", "dt_example"), {"--kind", "sufficient", "--format", "json"}));
  ASSERT_EQ(o.code, 0) << o.err;
  const json r = json::parse(o.out);
  EXPECT_EQ(r["kind"], "dt-sufficient");
  EXPECT_EQ(r["mode"], "one");
  EXPECT_EQ(r["status"], "ok");
  EXPECT_EQ(r["prediction"], 1);
  EXPECT_EQ(literals_of(r), (std::vector<std::vector<int>>{{1, 2}}));
  EXPECT_EQ(r["explanations"][0]["length"], 2);
  EXPECT_EQ(r["explanations"][0]["tests"].size(), 2u);
  EXPECT_EQ(r["model_hash"].get<std::string>().size(), 64u);
  EXPECT_EQ(r["instance_hash"].get<std::string>().size(), 64u);
}

TEST_F(CliTest, ExplainEveryExampleKind) {
  struct Row {
    const char* example;
    const char* kind;
    std::vector<int> literals;
  };
  for (const Row& row : {Row{"dt_example", "contrastive", {2}}, Row{"rf_example", "sufficient", {3, 6}},
                         Row{"rf_example", "contrastive", {1, 3}}, Row{"rf_example", "majority", {1, 2, 6}},
                         Row{"bt_example", "tree-specific", {5, 6}}}) {
    const Outcome o = run(with(query("explain", row.example), {"--kind", row.kind, "--format", "json"}));
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(literals_of(json::parse(o.out)), std::vector<std::vector<int>>{row.literals}) << row.kind;
  }
  const json bt = json::parse(run(with(query("explain", "bt_example"), {"--kind", "tree-specific", "--format", "json"})).out);
  EXPECT_TRUE(bt.contains("raw_weight"));
}

TEST_F(CliTest, NotApplicableKindIsAnError) {
  const Outcome o = run(with(query("explain", "dt_example"), {"--kind", "majority"}));
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("not applicable"), std::string::npos) << o.err;
  EXPECT_TRUE(o.out.empty());
  EXPECT_EQ(run(with(query("explain", "bt_example"), {"--kind", "sufficient"})).code, 1);
  EXPECT_EQ(run(with(query("explain", "dt_example"), {"--kind", "rf-sufficient"})).code, 1);
  EXPECT_EQ(run(with(query("explain", "dt_example"), {"--kind", "bogus"})).code, 1);
}

TEST_F(CliTest, TreeSpecificCannotBeEnumerated) {
  const Outcome o = run(with(query("explain", "bt_example"), {"--kind", "tree-specific", "--enumerate"}));
  EXPECT_EQ(o.code, 1);
  EXPECT_FALSE(o.err.empty());
}

TEST_F(CliTest, EnumerateListsEveryExplanation) {
  const Outcome a = run(with(query("explain", "rf_example"), {"--kind", "contrastive", "--enumerate", "--format", "json"}));
  const Outcome b = run(with(query("enumerate", "rf_example"), {"--kind", "contrastive", "--format", "json"}));
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  json ra = json::parse(a.out), rb = json::parse(b.out);
  EXPECT_EQ(ra["mode"], "all");
  auto sets = literals_of(ra);
  std::sort(sets.begin(), sets.end());
  EXPECT_EQ(sets, (std::vector<std::vector<int>>{{1, 3}, {1, 6}, {2, 3}, {2, 6}, {3, 6}}));
  ra.erase("elapsed_ms");
  rb.erase("elapsed_ms");
  EXPECT_EQ(ra, rb);
}

TEST_F(CliTest, TextFormatIsDefault) {
  const Outcome o = run(with(query("explain", "dt_example"), {"--kind", "sufficient"}));
  ASSERT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("kind: dt-sufficient"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("{1, 2}"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("status: ok"), std::string::npos) << o.out;
}

TEST_F(CliTest, VerifyAcceptsEngineOutput) {
  const std::string report =
      write("report.json", run(with(query("explain", "rf_example"), {"--kind", "majority", "--format", "json"})).out);
  const Outcome o = run(with(query("verify", "rf_example"), {"--explanation", report, "--format", "json"}));
  ASSERT_EQ(o.code, 0) << o.err << o.out;
  const json r = json::parse(o.out);
  EXPECT_EQ(r["kind"], "rf-majority");
  EXPECT_TRUE(r["verdicts"][0]["valid"].get<bool>());
  EXPECT_TRUE(r["verdicts"][0]["minimal"].get<bool>());

  const std::string single = write("single.json", R"({"kind": "sufficient", "literals": [2, 1]})");
  EXPECT_EQ(run(with(query("verify", "dt_example"), {"--explanation", single})).code, 0);
}

TEST_F(CliTest, VerifyRejectsTamperedExplanation) {
  const std::string tampered = write("tampered.json", R"({"kind": "contrastive", "literals": [3]})");
  const Outcome o = run(with(query("verify", "rf_example"), {"--explanation", tampered, "--format", "json"}));
  EXPECT_EQ(o.code, 1);
  const json r = json::parse(o.out);
  EXPECT_FALSE(r["verdicts"][0]["valid"].get<bool>());
  EXPECT_EQ(r["verdicts"][0]["witness"]["kind"], "unchanged");

  const std::string redundant = write("redundant.json", R"({"kind": "sufficient", "literals": [1, 2, 3]})");
  const json n = json::parse(run(with(query("verify", "dt_example"), {"--explanation", redundant, "--format", "json"})).out);
  EXPECT_TRUE(n["verdicts"][0]["valid"].get<bool>());
  EXPECT_FALSE(n["verdicts"][0]["minimal"].get<bool>());
  EXPECT_EQ(n["verdicts"][0]["witness"]["kind"], "deletion");

  const std::string weak = write("weak.json", R"({"kind": "tree-specific", "literals": [5]})");
  const json w = json::parse(run(with(query("verify", "bt_example"), {"--explanation", weak, "--format", "json"})).out);
  EXPECT_EQ(w["verdicts"][0]["witness"]["kind"], "weight-sum");
  EXPECT_EQ(w["verdicts"][0]["witness"]["weight_sum"], -400);
}

TEST_F(CliTest, VerifyEmptyExplanationOnConstantModel) {
  const std::string model = write("const.json", R"({"kind": "dt", "n_features": 1, "trees": [
      {"nodes": [{"type": "leaf", "class": 1}]}]})");
  const std::string instance = write("x.json", "[0.5]");
  const std::string e = write("e.json", R"({"kind": "sufficient", "literals": []})");
  const Outcome o = run({"verify", "--model", model, "--instance", instance, "--explanation", e});
  EXPECT_EQ(o.code, 0) << o.err << o.out;
}

TEST_F(CliTest, VerifyErrors) {
  const std::string bad = write("bad.json", "{not json");
  EXPECT_EQ(run(with(query("verify", "dt_example"), {"--explanation", bad})).code, 1);
  const std::string out_of_range = write("range.json", R"({"kind": "sufficient", "literals": [9]})");
  EXPECT_EQ(run(with(query("verify", "dt_example"), {"--explanation", out_of_range})).code, 1);
  const std::string nokind = write("nokind.json", R"({"literals": [1]})");
  EXPECT_EQ(run(with(query("verify", "dt_example"), {"--explanation", nokind})).code, 1);
  EXPECT_EQ(run(with(query("verify", "dt_example"), {"--explanation", nokind, "--kind", "contrastive"})).code, 0);
  EXPECT_EQ(run(with(query("verify", "rf_example"), {"--explanation", nokind, "--kind", "sufficient",
                                                  "--oracle-bound", "3"})).code,
            1);
}

TEST_F(CliTest, OutputIsDeterministic) {
  for (const char* seed : {"0", "7"}) {
    const auto args = with(query("explain", "rf_example"), {"--kind", "contrastive", "--enumerate", "--format",
                                                         "json", "--seed", seed});
    json a = json::parse(run(args).out), b = json::parse(run(args).out);
    EXPECT_EQ(a["seed"], std::stoull(seed));
    a.erase("elapsed_ms");
    b.erase("elapsed_ms");
    EXPECT_EQ(a.dump(), b.dump());
  }
}

TEST_F(CliTest, TimeoutGivesPartialReport) {
  const auto q = testing::random_forest(3, 100, 6);
  const std::string model = write("big.json", serialize_model(q.model));
  const std::string instance = write("big.instance.json", json(q.instance.values).dump());
  const Outcome o = run({"explain", "--model", model, "--instance", instance, "--kind", "sufficient",
                         "--timeout-ms", "1", "--format", "json"});
  EXPECT_EQ(o.code, 2) << o.err;
  const json r = json::parse(o.out);
  EXPECT_EQ(r["status"], "timeout");
  EXPECT_TRUE(r["timed_out"].get<bool>());
  EXPECT_TRUE(r["partial"].get<bool>());
  EXPECT_TRUE(r["explanations"].is_array());
}

TEST_F(CliTest, BenchRunsManifest) {
  const Outcome o = run({"bench", data_path("manifest.json"), "--format", "json", "--jobs", "2"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json r = json::parse(o.out);
  EXPECT_EQ(r["rows"].size(), 6u);
  EXPECT_EQ(r["summary"].size(), 6u);
  for (const json& s : r["summary"]) EXPECT_EQ(s["completion_pct"].get<double>(), 100.0) << s.dump();
  const Outcome text = run({"bench", "--manifest", data_path("manifest.json")});
  ASSERT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("rf-contrastive"), std::string::npos) << text.out;
}

TEST_F(CliTest, BenchEmptyManifest) {
  const std::string manifest = write("empty.json", "[]");
  const Outcome o = run({"bench", manifest, "--format", "json"});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(json::parse(o.out)["rows"].empty());
}

TEST_F(CliTest, BenchRecordsTimeouts) {
  const auto q = testing::random_forest(3, 100, 6);
  write("big.json", serialize_model(q.model));
  write("big.instance.json", json(q.instance.values).dump());
  const std::string manifest = write("m.json", R"([
      {"model": "big.json", "instance": "big.instance.json", "kind": "sufficient", "mode": "one", "timeout_ms": 1},
      {"model": "missing.json", "instance": "big.instance.json", "kind": "sufficient", "mode": "one"}])");
  const Outcome o = run({"bench", manifest, "--format", "json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json r = json::parse(o.out);
  EXPECT_EQ(r["rows"][0]["status"], "timeout");
  EXPECT_TRUE(r["rows"][0]["timed_out"].get<bool>());
  EXPECT_EQ(r["rows"][1]["status"], "error");
  EXPECT_EQ(r["summary"][0]["completion_pct"].get<double>(), 0.0);
}

TEST_F(CliTest, ExportAsp) {
  const std::string out = (dir_ / "dt.lp").string();
  const Outcome o = run(with(query("export-asp", "dt_example"), {"--kind", "sufficient", "--out", out}));
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(o.out.empty());
  const std::string text = testing::slurp(out);
  EXPECT_NE(text.find("node(0,0,1)."), std::string::npos);
  EXPECT_NE(text.find("#show selected_literal/1."), std::string::npos);

  const Outcome facts = run(with(query("export-asp", "rf_example"), {"--kind", "majority", "--part", "facts"}));
  ASSERT_EQ(facts.code, 0);
  EXPECT_EQ(testing::tokens(facts.out), testing::tokens(testing::golden("rf_example_facts.lp")));
  const Outcome encoding = run(with(query("export-asp", "bt_example"), {"--kind", "tree-specific", "--part", "encoding"}));
  EXPECT_EQ(testing::tokens(encoding.out),
            testing::tokens(testing::golden("bt_tree_specific.lp")));
  EXPECT_EQ(run(with(query("export-asp", "dt_example"), {"--kind", "sufficient", "--part", "nope"})).code, 1);
}

TEST_F(CliTest, BadInputs) {
  EXPECT_EQ(run({"explain", "--model", "/nonexistent.json", "--instance", data_path("dt_example.instance.json"),
                 "--kind", "sufficient"}).code,
            1);
  const std::string garbage = write("garbage.json", "[1, 2");
  EXPECT_EQ(run({"explain", "--model", data_path("dt_example.json"), "--instance", garbage, "--kind", "sufficient"}).code,
            1);
  const std::string short_instance = write("short.json", "[1]");
  const Outcome o =
      run({"explain", "--model", data_path("dt_example.json"), "--instance", short_instance, "--kind", "sufficient"});
  EXPECT_EQ(o.code, 1);
  EXPECT_FALSE(o.err.empty());
  EXPECT_EQ(run({"explain"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run(with(query("explain", "dt_example"), {"--kind", "sufficient", "--timeout-ms", "0"})).code, 1);
  EXPECT_EQ(run(with(query("explain", "dt_example"), {"--kind", "sufficient", "--out", "/nonexistent/dir/x"})).code, 1);
}

}  // namespace
}  // namespace treexplain
