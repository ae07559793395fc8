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

#ifndef TREEXPLAIN_TESTS_FIXTURES_HPP_
#define TREEXPLAIN_TESTS_FIXTURES_HPP_

#include <fstream>
#include <sstream>
#include <string>

#include "random_models.hpp"
#include "treexplain.hpp"

namespace treexplain::testing {

inline std::string data_path(const std::string& name) { return std::string(TREEXPLAIN_DATA_DIR) + "/" + name; }
inline std::string golden_path(const std::string& name) { return std::string(TREEXPLAIN_GOLDEN_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// A reference file from tests/golden without its leading license comment
/// (the block of '%' or '#' lines up to the first blank line).
inline std::string golden(const std::string& name) {
  const std::string text = slurp(golden_path(name));
  if (text.rfind("% Copyright", 0) != 0 && text.rfind("# Copyright", 0) != 0) return text;
  const std::size_t end = text.find("\n\n");
  return end == std::string::npos ? std::string() : text.substr(end + 2);
}

/// One of the bundled example queries: "dt_example", "rf_example" or "bt_example".
inline Query example(const std::string& name) {
  return {load_model(slurp(data_path(name + ".json"))), load_instance(slurp(data_path(name + ".instance.json")))};
}

/// Whitespace-separated tokens, for layout-insensitive text comparison.
inline std::vector<std::string> tokens(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

/// Literal sets of a list of explanations, sorted.
inline std::vector<std::vector<LiteralId>> literal_sets(const std::vector<Explanation>& explanations) {
  std::vector<std::vector<LiteralId>> out;
  for (const Explanation& e : explanations) out.push_back(e.literals);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace treexplain::testing

#endif  // TREEXPLAIN_TESTS_FIXTURES_HPP_
