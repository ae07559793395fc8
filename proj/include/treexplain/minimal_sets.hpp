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

#ifndef TREEXPLAIN_MINIMAL_SETS_HPP_
#define TREEXPLAIN_MINIMAL_SETS_HPP_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "treexplain/common.hpp"
#include "treexplain/explanation.hpp"

// Search over families of literal sets that are closed upwards: if S is valid,
// every superset of S is valid too. All predicates receive membership flags
// indexed by literal id.

namespace treexplain {

/// Deadline hit during a shrink. Carries the last set known to be valid: an
/// explanation that is not yet proven minimal.
class PartialTimeout : public TimeoutError {
 public:
  explicit PartialTimeout(LiteralFlags best) : best_(std::move(best)) {}
  const LiteralFlags& best() const { return best_; }

 private:
  LiteralFlags best_;
};

/// Deletion-based shrink. Starts from every literal in `order` and drops them
/// one at a time, in `order`, whenever the remainder stays valid. The result is
/// the lexicographically smallest minimal set with respect to `order`. The
/// full set must be valid. On timeout throws PartialTimeout.
template <typename Valid>
LiteralFlags shrink_to_minimal(std::size_t n_literals, std::span<const LiteralId> order,
                               Valid&& valid, const Deadline& deadline) {
  LiteralFlags current(n_literals + 1, 0);
  for (LiteralId id : order) current[id] = 1;
  for (LiteralId id : order) {
    current[id] = 0;
    try {
      deadline.check();
      if (!valid(current)) current[id] = 1;
    } catch (const TimeoutError&) {
      current[id] = 1;
      throw PartialTimeout(std::move(current));
    }
  }
  return current;
}

namespace detail {

inline bool contains_all(const LiteralFlags& set, const std::vector<LiteralId>& subset) {
  for (LiteralId id : subset)
    if (!set[id]) return false;
  return true;
}

template <typename Valid, typename Sink>
class MonotoneEnumerator {
 public:
  MonotoneEnumerator(std::size_t n, std::span<const LiteralId> order, Valid& valid, Sink& sink,
                     const Deadline& deadline)
      : order_(order), valid_(valid), sink_(sink), deadline_(deadline),
        chosen_(n + 1, 0), upper_(n + 1, 0) {
    for (LiteralId id : order) upper_[id] = 1;
  }

  void run() { descend(0); }

 private:
  // chosen_: literals decided in; upper_: chosen_ plus everything undecided.
  void descend(std::size_t pos) {
    for (const auto& found : found_)
      if (contains_all(chosen_, found)) return;
    deadline_.check();
    if (!valid_(upper_)) return;
    if (pos == order_.size()) {
      // Visited in lexicographic order, so nothing found later can be a
      // subset of this one, and no valid subset was skipped.
      found_.push_back(flags_to_ids(chosen_));
      sink_(found_.back());
      return;
    }
    const LiteralId id = order_[pos];
    upper_[id] = 0;
    descend(pos + 1);
    upper_[id] = 1;
    chosen_[id] = 1;
    descend(pos + 1);
    chosen_[id] = 0;
  }

  std::span<const LiteralId> order_;
  Valid& valid_;
  Sink& sink_;
  const Deadline& deadline_;
  LiteralFlags chosen_;
  LiteralFlags upper_;
  std::vector<std::vector<LiteralId>> found_;
};

}  // namespace detail

/// Reports every minimal valid set over the literals of `order` exactly once,
/// in lexicographic order. Sink receives ascending literal id vectors.
template <typename Valid, typename Sink>
void enumerate_minimal(std::size_t n_literals, std::span<const LiteralId> order, Valid&& valid,
                       Sink&& sink, const Deadline& deadline) {
  detail::MonotoneEnumerator<std::remove_reference_t<Valid>, std::remove_reference_t<Sink>> e(
      n_literals, order, valid, sink, deadline);
  e.run();
}

}  // namespace treexplain

#endif  // TREEXPLAIN_MINIMAL_SETS_HPP_
