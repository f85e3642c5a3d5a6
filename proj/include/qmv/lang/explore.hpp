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

#include <cstddef>
#include <string_view>
#include <vector>

#include "qmv/core/model.hpp"
#include "qmv/lang/ast.hpp"
#include "qmv/lang/expr.hpp"

namespace qmv::lang {

/// Variable layout of a model: globals first, then each module's locals in declaration order.
struct Layout {
    std::vector<VariableInfo> variables;
    std::vector<ComponentInfo> components;
    std::vector<Value> initial;
};

/// Evaluates bounds, initial values and observer sets. Throws SemanticError.
Layout make_layout(const SymbolicModel& model);

/// Constants, variables (by layout slot) and labels.
Scope full_scope(const SymbolicModel& model);

Predicate compile_predicate(const ExprPtr& e, const SymbolicModel& model);
Predicate compile_predicate(std::string_view text, const SymbolicModel& model);

class ExplorationError : public ModelError {
public:
    using ModelError::ModelError;
};

class StateCapExceeded : public ExplorationError {
public:
    using ExplorationError::ExplorationError;
};

struct ExploreOptions {
    std::size_t state_cap = 10'000'000;
};

/// Breadth-first exploration from the initial valuation.
///
/// Immediate commands become choices ordered by (module, command, partner commands).
/// Commands sharing an action label synchronize across every module whose alphabet
/// contains it; branch probabilities multiply and assignments merge. Markovian commands
/// never synchronize and race by rate addition. Deadlocks in DTMCs and MDPs receive an
/// ownerless self-loop; MA deadlocks stay without transitions.
StateSpace explore(const SymbolicModel& model, const ExploreOptions& options = {});

/// States with at least two choices whose owners differ.
std::vector<StateIndex> check_good_for_distribution(const StateSpace& space);

} // namespace qmv::lang
