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

#ifndef TREEXPLAIN_COMMON_HPP_
#define TREEXPLAIN_COMMON_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace treexplain {

// Literal ids are 1-based; 0 marks "no literal" (leaf nodes).
using LiteralId = int;

// Leaf weights of boosted trees, scaled by the model's weight_scale.
using Weight = std::int64_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Schema or structural problem in a model / instance document.
class ModelError : public Error {
 public:
  using Error::Error;
};

// Explanation kind is not defined for the model kind.
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

// The query has no answer; reported as status "none" rather than a failure.
class NoExplanation : public Error {
 public:
  using Error::Error;
};

// No set of literals can change the prediction (constant model).
class ContrastiveImpossible : public NoExplanation {
 public:
  using NoExplanation::NoExplanation;
};

// Fewer than floor(m/2)+1 trees vote for the predicted class even with every
// literal fixed, which happens on a tied vote with an even number of trees.
class MajorityImpossible : public NoExplanation {
 public:
  using NoExplanation::NoExplanation;
};

class OracleBoundError : public Error {
 public:
  using Error::Error;
};

class TimeoutError : public Error {
 public:
  TimeoutError() : Error("deadline exceeded") {}
};

// Cooperative cancellation. Searches call check() before every validity test.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  explicit Deadline(std::chrono::milliseconds budget)
      : until_(Clock::now() + budget) {}

  static Deadline never() { return Deadline(); }

  bool expired() const { return until_ && Clock::now() >= *until_; }

  void check() const {
    if (expired()) throw TimeoutError();
  }

 private:
  std::optional<Clock::time_point> until_;
};

}  // namespace treexplain

#endif  // TREEXPLAIN_COMMON_HPP_
