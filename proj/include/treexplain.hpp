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

#ifndef TREEXPLAIN_TREEXPLAIN_HPP_
#define TREEXPLAIN_TREEXPLAIN_HPP_

#include "treexplain/asp_export.hpp"
#include "treexplain/common.hpp"
#include "treexplain/explain.hpp"
#include "treexplain/explain_bt.hpp"
#include "treexplain/explain_dt.hpp"
#include "treexplain/explain_rf.hpp"
#include "treexplain/explanation.hpp"
#include "treexplain/flip_search.hpp"
#include "treexplain/literals.hpp"
#include "treexplain/minimal_sets.hpp"
#include "treexplain/model.hpp"
#include "treexplain/oracle.hpp"
#include "treexplain/traversal.hpp"

#endif  // TREEXPLAIN_TREEXPLAIN_HPP_
