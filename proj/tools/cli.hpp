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

#ifndef TREEXPLAIN_TOOLS_CLI_HPP_
#define TREEXPLAIN_TOOLS_CLI_HPP_

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "treexplain.hpp"

// Command implementations behind the `treexplain` executable. Every command
// writes its result to `out`, diagnostics to `err`, and returns the process
// exit code.

namespace treexplain::cli {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kError = 1, kTimeout = 2 };

enum class Format { Text, Json };

struct Config {
  std::string model_path;
  std::string instance_path;
  std::string kind;  // request (sufficient, ...) or concrete kind (rf-sufficient, ...)
  bool enumerate = false;
  long long timeout_ms = 100000;
  Format format = Format::Text;
  std::string out_path;
  std::uint64_t seed = 0;
  int oracle_bound = Oracle::kDefaultBound;
  int jobs = 1;
  // verify
  std::string explanation_path;
  // export-asp: all, facts or encoding
  std::string part = "all";
  // bench
  std::string manifest_path;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &size, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < size; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

/// Accepts a request name resolved against the model kind, or a concrete kind.
inline ExplanationKind resolve(const Model& model, const std::string& kind) {
  if (auto request = parse_request(kind)) return resolve_kind(model.kind, *request);
  if (auto concrete = parse_explanation_kind(kind)) {
    if (model_kind_of(*concrete) != model.kind)
      throw NotApplicableError(kind + " is not applicable to a " + std::string(to_string(model.kind)) +
                               " model (n/a)");
    return *concrete;
  }
  throw Error("unknown explanation kind '" + kind + "'");
}

inline json explanation_json(const Explanation& e) {
  return json{{"literals", e.literals}, {"tests", e.tests}, {"length", e.length()}};
}

/// The outcome of one explain run. `to_json` is the documented report schema.
struct RunReport {
  std::string kind;
  bool enumerate = false;
  int prediction = 0;
  std::optional<Weight> raw_weight;
  std::vector<Explanation> explanations;
  bool timed_out = false;
  bool none_exist = false;  // contrastive query with no answer
  long long elapsed_ms = 0;
  std::string model_hash;
  std::string instance_hash;
  std::uint64_t seed = 0;

  std::string status() const { return timed_out ? "timeout" : none_exist ? "none" : "ok"; }

  json to_json() const {
    json doc{{"kind", kind},
             {"mode", enumerate ? "all" : "one"},
             {"prediction", prediction},
             {"explanations", json::array()},
             {"partial", timed_out},
             {"timed_out", timed_out},
             {"status", status()},
             {"elapsed_ms", elapsed_ms},
             {"model_hash", model_hash},
             {"instance_hash", instance_hash},
             {"seed", seed}};
    if (raw_weight) doc["raw_weight"] = *raw_weight;
    for (const Explanation& e : explanations) doc["explanations"].push_back(explanation_json(e));
    return doc;
  }

  std::string to_text() const {
    std::ostringstream out;
    out << "kind: " << kind << (enumerate ? " (all)" : "") << '\n';
    out << "prediction: " << prediction;
    if (raw_weight) out << " (raw weight " << *raw_weight << ')';
    out << '\n';
    if (none_exist) out << "no explanation exists\n";
    for (std::size_t i = 0; i < explanations.size(); ++i) {
      const Explanation& e = explanations[i];
      out << '#' << i + 1 << " {";
      for (std::size_t j = 0; j < e.literals.size(); ++j) out << (j ? ", " : "") << e.literals[j];
      out << "}";
      for (std::size_t j = 0; j < e.tests.size(); ++j) out << (j ? ", " : "  ") << e.tests[j];
      out << '\n';
    }
    out << "status: " << status() << (timed_out ? " (partial results)" : "") << '\n';
    out << "elapsed_ms: " << elapsed_ms << '\n';
    return out.str();
  }
};

/// Runs one query on already loaded inputs.
inline RunReport run_query(const Model& model, const Instance& instance, const std::string& kind_name,
                           bool enumerate, long long timeout_ms, std::uint64_t seed) {
  if (timeout_ms <= 0) throw Error("timeout must be positive");
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  const ExplanationKind kind = resolve(model, kind_name);
  report.kind = std::string(to_string(kind));
  report.enumerate = enumerate;
  report.seed = seed;
  if (enumerate && !supports_enumeration(kind))
    throw NotApplicableError("enumeration is not supported for " + report.kind);
  ExplainContext ctx(model, instance);
  report.prediction = ctx.predicted();
  report.raw_weight = ctx.prediction().raw_weight;
  SearchOptions options{Deadline(std::chrono::milliseconds(timeout_ms)), seed};
  try {
    ExplainResult result = explain(ctx, kind, enumerate, options);
    report.explanations = std::move(result.explanations);
    report.timed_out = result.timed_out;
  } catch (const NoExplanation&) {
    report.none_exist = true;
  }
  report.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return report;
}

namespace detail {

/// Writes to --out when given, to `out` otherwise.
inline void emit(const Config& config, std::ostream& out, const std::string& text) {
  if (config.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.out_path, std::ios::binary);
  if (!file) throw Error("cannot write '" + config.out_path + "'");
  file << text;
}

inline std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace detail

inline int cmd_explain(const Config& config, std::ostream& out, std::ostream& err) {
  try {
    const std::string model_text = read_file(config.model_path);
    const std::string instance_text = read_file(config.instance_path);
    const Model model = load_model(model_text);
    const Instance instance = load_instance(instance_text);
    RunReport report = run_query(model, instance, config.kind, config.enumerate, config.timeout_ms, config.seed);
    report.model_hash = sha256_hex(model_text);
    report.instance_hash = sha256_hex(instance_text);
    detail::emit(config, out, config.format == Format::Json ? detail::dump(report.to_json()) : report.to_text());
    return report.timed_out ? kTimeout : kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
}

inline json verdict_json(const std::vector<LiteralId>& literals, const Verdict& v) {
  json doc{{"literals", literals}, {"valid", v.valid}, {"minimal", v.minimal}};
  if (v.witness) {
    static const char* names[] = {"completion", "deletion", "subset", "unchanged", "tree-count", "weight-sum"};
    json w{{"kind", names[static_cast<int>(v.witness->kind)]}, {"items", v.witness->items}};
    if (v.witness->kind == WitnessKind::WeightSum) w["weight_sum"] = v.witness->weight_sum;
    doc["witness"] = w;
  }
  return doc;
}

/// Reads the explanations to verify: a single {"kind", "literals"} object, or
/// an explain report (every explanation in it is checked).
inline std::vector<Explanation> read_explanations(const Model& model, const json& doc,
                                                  const std::string& kind_override) {
  if (!doc.is_object()) throw Error("explanation file must hold a JSON object");
  std::string kind_name = kind_override;
  if (kind_name.empty()) {
    if (!doc.contains("kind") || !doc["kind"].is_string())
      throw Error("explanation file has no 'kind'; pass --kind");
    kind_name = doc["kind"].get<std::string>();
  }
  const ExplanationKind kind = resolve(model, kind_name);
  auto literals_of = [](const json& node) {
    if (!node.contains("literals") || !node["literals"].is_array())
      throw Error("explanation needs a 'literals' array");
    std::vector<LiteralId> ids;
    for (const json& v : node["literals"]) {
      if (!v.is_number_integer()) throw Error("literal ids must be integers");
      ids.push_back(v.get<LiteralId>());
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw Error("duplicate literal id");
    return ids;
  };
  std::vector<Explanation> result;
  if (doc.contains("explanations")) {
    for (const json& e : doc["explanations"]) result.push_back({kind, literals_of(e), {}});
  } else {
    result.push_back({kind, literals_of(doc), {}});
  }
  return result;
}

inline int cmd_verify(const Config& config, std::ostream& out, std::ostream& err) {
  try {
    const Model model = load_model(read_file(config.model_path));
    const Instance instance = load_instance(read_file(config.instance_path));
    json doc;
    try {
      doc = json::parse(read_file(config.explanation_path));
    } catch (const json::parse_error& e) {
      throw Error(std::string("malformed explanation file: ") + e.what());
    }
    const std::vector<Explanation> explanations = read_explanations(model, doc, config.kind);
    const Oracle oracle(model, instance, config.oracle_bound);
    json report{{"verdicts", json::array()}};
    bool all_ok = true;
    std::ostringstream text;
    for (const Explanation& e : explanations) {
      for (LiteralId id : e.literals)
        if (id < 1 || id > oracle.n_literals()) throw Error("literal " + std::to_string(id) + " out of range");
      const Verdict v = oracle.check(e);
      all_ok = all_ok && v.valid && v.minimal;
      const json entry = verdict_json(e.literals, v);
      report["verdicts"].push_back(entry);
      report["kind"] = to_string(e.kind);
      text << to_string(e.kind) << ' ' << entry["literals"].dump() << ": " << (v.valid ? "valid" : "invalid")
           << ", " << (v.minimal ? "minimal" : "not minimal");
      if (entry.contains("witness")) text << "; witness " << entry["witness"].dump();
      text << '\n';
    }
    detail::emit(config, out, config.format == Format::Json ? detail::dump(report) : text.str());
    return all_ok ? kOk : kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
}

inline int cmd_export_asp(const Config& config, std::ostream& out, std::ostream& err) {
  try {
    const Model model = load_model(read_file(config.model_path));
    const Instance instance = load_instance(read_file(config.instance_path));
    const ExplanationKind kind = resolve(model, config.kind);
    const ExplainContext ctx(model, instance);
    const AspDocument doc = export_document(ctx, kind);
    std::string text;
    if (config.part == "facts") text = doc.facts + doc.stage2;
    else if (config.part == "encoding") text = doc.encoding;
    else if (config.part == "all") text = doc.render();
    else throw Error("unknown part '" + config.part + "' (all, facts, encoding)");
    detail::emit(config, out, text);
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
}

struct BenchRow {
  std::string model;
  std::string instance;
  std::string kind;
  bool enumerate = false;
  long long timeout_ms = 0;
};

inline std::vector<BenchRow> read_manifest(const std::string& path, long long default_timeout) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(std::string("malformed manifest: ") + e.what());
  }
  if (doc.is_object() && doc.contains("rows")) doc = doc["rows"];
  if (!doc.is_array()) throw Error("manifest must be an array of rows");
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  auto locate = [&](const std::string& p) {
    const std::filesystem::path candidate(p);
    return (candidate.is_absolute() ? candidate : base / candidate).string();
  };
  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& r = doc[i];
    const std::string where = "manifest row " + std::to_string(i) + ": ";
    for (const char* key : {"model", "instance", "kind"})
      if (!r.is_object() || !r.contains(key) || !r[key].is_string())
        throw Error(where + "missing string field '" + key + "'");
    BenchRow row{locate(r["model"]), locate(r["instance"]), r["kind"], false, default_timeout};
    const std::string mode = r.value("mode", "one");
    if (mode == "all") row.enumerate = true;
    else if (mode != "one") throw Error(where + "mode must be 'one' or 'all'");
    if (r.contains("timeout_ms")) {
      if (!r["timeout_ms"].is_number_integer()) throw Error(where + "timeout_ms must be an integer");
      row.timeout_ms = r["timeout_ms"].get<long long>();
    }
    rows.push_back(row);
  }
  return rows;
}

struct BenchResult {
  std::string status;  // ok, none, timeout, error
  std::string kind;    // resolved kind, e.g. rf-contrastive
  std::size_t count = 0;
  double avg_length = 0;
  long long elapsed_ms = 0;
  std::string message;
};

inline BenchResult run_bench_row(const BenchRow& row, std::uint64_t seed) {
  BenchResult result;
  try {
    const Model model = load_model(read_file(row.model));
    const Instance instance = load_instance(read_file(row.instance));
    const RunReport report = run_query(model, instance, row.kind, row.enumerate, row.timeout_ms, seed);
    result.status = report.status();
    result.kind = report.kind;
    result.count = report.explanations.size();
    std::size_t total = 0;
    for (const Explanation& e : report.explanations) total += e.length();
    result.avg_length = result.count ? static_cast<double>(total) / static_cast<double>(result.count) : 0.0;
    result.elapsed_ms = report.elapsed_ms;
  } catch (const std::exception& e) {
    result.status = "error";
    result.message = e.what();
  }
  return result;
}

/// Per-row results plus a summary per (kind, mode) with the completion rate
/// (rows finished within the timeout) and average number (#N) and length (#L)
/// of explanations over completed rows.
inline json bench_report(const std::vector<BenchRow>& rows, const std::vector<BenchResult>& results) {
  json doc{{"rows", json::array()}, {"summary", json::array()}};
  struct Group {
    int rows = 0, completed = 0;
    double n = 0, l = 0;
  };
  std::map<std::pair<std::string, std::string>, Group> groups;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const BenchRow& row = rows[i];
    const BenchResult& r = results[i];
    const std::string mode = row.enumerate ? "all" : "one";
    json entry{{"model", row.model},   {"instance", row.instance}, {"kind", row.kind},
               {"mode", mode},         {"status", r.status},       {"timed_out", r.status == "timeout"},
               {"n", r.count},         {"avg_length", r.avg_length}, {"elapsed_ms", r.elapsed_ms}};
    if (!r.message.empty()) entry["error"] = r.message;
    if (!r.kind.empty()) entry["kind"] = r.kind;
    doc["rows"].push_back(entry);
    Group& g = groups[{entry["kind"].get<std::string>(), mode}];
    ++g.rows;
    if (r.status == "ok" || r.status == "none") {
      ++g.completed;
      g.n += static_cast<double>(r.count);
      g.l += r.avg_length;
    }
  }
  for (const auto& [key, g] : groups)
    doc["summary"].push_back({{"kind", key.first},
                              {"mode", key.second},
                              {"rows", g.rows},
                              {"completion_pct", 100.0 * g.completed / g.rows},
                              {"avg_n", g.completed ? g.n / g.completed : 0.0},
                              {"avg_l", g.completed ? g.l / g.completed : 0.0}});
  return doc;
}

inline std::string bench_text(const json& doc) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << std::left << std::setw(18) << "kind" << std::setw(6) << "mode" << std::right << std::setw(6) << "rows"
      << std::setw(10) << "complete%" << std::setw(8) << "#N" << std::setw(8) << "#L" << '\n';
  for (const json& s : doc["summary"])
    out << std::left << std::setw(18) << s["kind"].get<std::string>() << std::setw(6)
        << s["mode"].get<std::string>() << std::right << std::setw(6) << s["rows"].get<int>() << std::setw(10)
        << s["completion_pct"].get<double>() << std::setw(8) << s["avg_n"].get<double>() << std::setw(8)
        << s["avg_l"].get<double>() << '\n';
  for (const json& r : doc["rows"])
    if (r["status"] != "ok")
      out << "row " << r["model"].get<std::string>() << " [" << r["kind"].get<std::string>()
          << "]: " << r["status"].get<std::string>()
          << (r.contains("error") ? ": " + r["error"].get<std::string>() : std::string()) << '\n';
  return out.str();
}

inline int cmd_bench(const Config& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.jobs < 1) throw Error("--jobs must be at least 1");
    const std::vector<BenchRow> rows = read_manifest(config.manifest_path, config.timeout_ms);
    std::vector<BenchResult> results(rows.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < rows.size(); i = next++) results[i] = run_bench_row(rows[i], config.seed);
    };
    const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(config.jobs), rows.size()));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    const json doc = bench_report(rows, results);
    detail::emit(config, out, config.format == Format::Json ? detail::dump(doc) : bench_text(doc));
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
}

/// Parses `args` (without the program name) and runs the selected command.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Formal explanations for decision trees, random forests and boosted trees", "treexplain"};
  app.require_subcommand(1);
  Config config;
  const std::map<std::string, Format> formats{{"text", Format::Text}, {"json", Format::Json}};
  const std::vector<std::string> kinds{"sufficient", "contrastive", "majority", "tree-specific"};

  auto add_query = [&](CLI::App* sub, bool kind_required) {
    sub->add_option("--model", config.model_path, "model IR (JSON)")->required();
    sub->add_option("--instance", config.instance_path, "instance (JSON array or CSV row)")->required();
    auto* kind = sub->add_option("--kind", config.kind, "sufficient | contrastive | majority | tree-specific");
    if (kind_required) kind->required();
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", config.format, "text | json")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_option("--out", config.out_path, "write the result to this file");
  };
  auto add_search = [&](CLI::App* sub) {
    sub->add_option("--timeout-ms", config.timeout_ms, "time budget in milliseconds")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", config.seed, "permutes the search order (0 = canonical)");
  };

  CLI::App* explain_cmd = app.add_subcommand("explain", "compute an explanation");
  add_query(explain_cmd, true);
  explain_cmd->add_flag("--enumerate", config.enumerate, "list every minimal explanation");
  add_search(explain_cmd);
  add_output(explain_cmd);

  CLI::App* enumerate_cmd = app.add_subcommand("enumerate", "same as explain --enumerate");
  add_query(enumerate_cmd, true);
  add_search(enumerate_cmd);
  add_output(enumerate_cmd);

  CLI::App* verify_cmd = app.add_subcommand("verify", "check an explanation by brute force");
  add_query(verify_cmd, false);
  verify_cmd->add_option("--explanation", config.explanation_path, "explanation or explain report (JSON)")
      ->required();
  verify_cmd->add_option("--oracle-bound", config.oracle_bound, "largest literal count to brute-force")
      ->check(CLI::Range(0, Oracle::kHardBound));
  add_output(verify_cmd);

  CLI::App* export_cmd = app.add_subcommand("export-asp", "emit ASP facts and encoding");
  add_query(export_cmd, true);
  export_cmd->add_option("--part", config.part, "all | facts | encoding");
  export_cmd->add_option("--out", config.out_path, "write the result to this file");

  CLI::App* bench_cmd = app.add_subcommand("bench", "run a manifest of queries");
  bench_cmd->add_option("manifest,--manifest", config.manifest_path, "manifest (JSON)")->required();
  bench_cmd->add_option("--jobs", config.jobs, "parallel workers")->check(CLI::PositiveNumber);
  add_search(bench_cmd);
  add_output(bench_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  if (explain_cmd->parsed()) return cmd_explain(config, out, err);
  if (enumerate_cmd->parsed()) {
    config.enumerate = true;
    return cmd_explain(config, out, err);
  }
  if (verify_cmd->parsed()) return cmd_verify(config, out, err);
  if (export_cmd->parsed()) return cmd_export_asp(config, out, err);
  return cmd_bench(config, out, err);
}

}  // namespace treexplain::cli

#endif  // TREEXPLAIN_TOOLS_CLI_HPP_
