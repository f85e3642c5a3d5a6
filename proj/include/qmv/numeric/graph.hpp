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

namespace qmv::numeric {

/// Qualitative precomputations. Markovian MA states contribute their rate distribution
/// as their only behaviour; masked rates are ignored.
using StateSet = std::vector<bool>;

/// States from which some scheduler reaches the target with positive probability.
StateSet exists_reach(const StateSpace& space, const StateSet& target);

/// States from which every scheduler reaches the target with positive probability.
StateSet forall_reach(const StateSpace& space, const StateSet& target);

/// States from which some scheduler reaches the target almost surely.
StateSet exists_almost_sure(const StateSpace& space, const StateSet& target);

/// States from which every scheduler reaches the target almost surely.
StateSet forall_almost_sure(const StateSpace& space, const StateSet& target);

} // namespace qmv::numeric
