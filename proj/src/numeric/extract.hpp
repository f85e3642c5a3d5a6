/*
 * Copyright 2026 The qmv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <vector>

#include "qmv/core/model.hpp"
#include "qmv/numeric/graph.hpp"

namespace qmv::numeric::detail {

enum class Extraction {
    LowestOptimal, ///< lowest-index choice among the optimal ones
    Progressive,   ///< optimal choices that move towards the target, layer by layer
};

/// Per-choice filter indexed like StateSpace's flat choice array; empty means all allowed.
using ChoiceMask = std::vector<bool>;

/// Expected value of a choice under the given state values.
double choice_value(const StateSpace& space, const Choice& c, const std::vector<double>& values);

/// Memoryless deterministic scheduler attaining `values`. Ties break by lowest choice index.
Scheduler extract_scheduler(const StateSpace& space, const std::vector<double>& values, const StateSet& target,
                            Direction dir, Extraction mode, const ChoiceMask& allowed = {});

} // namespace qmv::numeric::detail
