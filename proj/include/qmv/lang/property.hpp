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

#include <string>
#include <string_view>
#include <vector>

#include "qmv/core/model.hpp"
#include "qmv/lang/ast.hpp"

namespace qmv::lang {

/// Parses `Pmax=? [ F pred ]`, `Pmin=? [ F<=B pred ]`, `Tmin=? [ F pred ]` and friends.
/// Step bounds apply to DTMC/MDP models, time bounds (minutes) to MA models.
Property parse_property(std::string_view text, const SymbolicModel& model);

/// One property per non-empty line; `//` starts a comment.
std::vector<std::string> split_properties(std::string_view text);

} // namespace qmv::lang
