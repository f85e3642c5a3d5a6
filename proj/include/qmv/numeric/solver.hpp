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

#include <cstdint>
#include <string>
#include <vector>

#include "qmv/core/model.hpp"
#include "qmv/numeric/graph.hpp"

namespace qmv::numeric {

struct SolverConfig {
    double epsilon = 1e-6; ///< absolute residual between sweeps
    std::uint64_t max_iterations = 1'000'000;
    double time_bound_error = 1e-4; ///< a-priori digitization error for MA time bounds
    std::uint64_t horizon_cap = 100'000'000; ///< largest step bound for CDFs
    std::uint64_t digitization_cap = 200'000'000; ///< largest digitization step count
};

class SolverError : public ModelError {
public:
    using ModelError::ModelError;
};

struct CdfResult {
    std::vector<double> values; ///< values[t]: probability of reaching the target within t
    bool monotone = true;
};

/// Value iteration for (min/max) unbounded reachability. Target states are pinned to one
/// and states that cannot reach the target (for min: that can avoid it surely) to zero.
/// Markovian MA states use their embedded jump distribution.
ValueResult reach_prob(const StateSpace& space, const StateSet& target, Direction dir, const SolverConfig& cfg = {});

/// Whole CDF over step bounds 0..t_max. DTMCs propagate the state distribution forward;
/// MDPs iterate the step-bounded Bellman operator backwards.
CdfResult step_bounded_cdf(const StateSpace& space, const StateSet& target, Direction dir, std::uint64_t t_max,
                           const SolverConfig& cfg = {});

/// Expected time (minutes) to reach the target in an MA. States outside the almost-sure
/// region get +infinity.
ValueResult ma_expected_time(const StateSpace& space, const StateSet& target, Direction dir,
                             const SolverConfig& cfg = {});

/// Time-bounded reachability in an MA by digitization with step count
/// k = ceil((lambda_max * t)^2 / (2 * time_bound_error)).
ValueResult ma_time_bounded(const StateSpace& space, const StateSet& target, Direction dir, double t,
                            const SolverConfig& cfg = {});

/// Reachability probability of the Markov chain induced by a memoryless scheduler.
ValueResult evaluate_scheduler(const StateSpace& space, const StateSet& target, const Scheduler& scheduler,
                               const SolverConfig& cfg = {});

/// Dispatches on the property kind.
ValueResult check(const StateSpace& space, const Property& property, const SolverConfig& cfg = {});

struct DecisionRow {
    StateIndex state = 0;
    std::string valuation;
    std::string action;
    std::size_t choice = 0;
};

/// One row per state with at least two choices that is reachable without masked
/// markovian transitions.
std::vector<DecisionRow> describe_scheduler(const StateSpace& space, const Scheduler& scheduler);

} // namespace qmv::numeric
