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

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "qmv/core/model.hpp"

namespace qmv::smc {

class SmcError : public ModelError {
public:
    using ModelError::ModelError;
};

struct SmcConfig {
    std::optional<std::uint64_t> runs;
    std::optional<double> epsilon; ///< with delta: Okamoto-sized run count
    std::optional<double> delta;
    std::uint64_t master_seed = 0;
    std::uint64_t max_steps = 100'000;
    unsigned workers = 0; ///< 0 picks the hardware concurrency
};

/// Validates the config and returns the number of runs.
std::uint64_t run_count(const SmcConfig& cfg);

/// ceil(ln(2/delta) / (2 epsilon^2)).
std::uint64_t okamoto_runs(double epsilon, double delta);

/// Reachability query as seen by the simulator.
struct Query {
    PropertyKind kind = PropertyKind::ReachProb;
    std::vector<bool> target;
    std::uint64_t step_bound = 0;
    double time_bound = 0.0;
};

/// Throws SmcError for expected-time properties.
Query make_query(const StateSpace& space, const Property& property);

/// Picks a choice index in [0, choices(s).size()) at states with at least two choices.
/// Must be safe to call concurrently.
using Resolver = std::function<std::uint32_t(StateIndex)>;

struct RunOutcome {
    bool hit = false;
    bool truncated = false;
    std::uint64_t steps = 0;
    double time = 0.0; ///< elapsed model time, MA only
};

/// Random source of one run: mt19937_64 with fixed uniform and exponential transforms.
class RunRng {
public:
    explicit RunRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

private:
    std::mt19937_64 engine_;
};

RunOutcome simulate_run(const StateSpace& space, const Resolver& resolver, const Query& query, std::uint64_t seed,
                        std::uint64_t max_steps = 100'000);

/// The first `steps` states of a run (initial state first). Stops early in MA deadlocks.
std::vector<StateIndex> simulate_path(const StateSpace& space, const Resolver& resolver, std::uint64_t seed,
                                      std::uint64_t steps);

struct SmcEstimate {
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t runs = 0;
    std::uint64_t hits = 0;
    std::uint64_t truncated = 0;
    bool okamoto = false; ///< interval is the (epsilon, delta) guarantee

    double half_width() const { return (ci_high - ci_low) / 2.0; }
    bool operator==(const SmcEstimate&) const = default;
};

/// Runs are seeded by run_seed(master_seed, r); results do not depend on the worker count.
SmcEstimate estimate(const StateSpace& space, const Resolver& resolver, const Query& query, const SmcConfig& cfg);

/// Resolver following a memoryless scheduler.
Resolver follow(const Scheduler& scheduler);

} // namespace qmv::smc
