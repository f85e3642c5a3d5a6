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
#include <optional>
#include <vector>

#include "qmv/core/model.hpp"
#include "qmv/smc/hash.hpp"
#include "qmv/smc/simulate.hpp"

namespace qmv::smc {

enum class LssMode { Global, Distributed };

const char* to_string(LssMode m);

struct LssConfig {
    std::uint64_t m = 100; ///< sampled scheduler ids
    LssMode mode = LssMode::Global;
    Direction direction = Direction::Max;
    SmcConfig inner;
    std::uint64_t sampler_seed = 0;
    /// Runs for re-estimating the best id; defaults to the inner run count.
    std::optional<std::uint64_t> confirm_runs;
};

/// Raised in distributed mode when some states offer choices to several components.
class NotGoodForDistribution : public SmcError {
public:
    explicit NotGoodForDistribution(std::vector<StateIndex> states);
    const std::vector<StateIndex>& states() const { return states_; }

private:
    std::vector<StateIndex> states_;
};

struct LssEntry {
    SchedulerId id = 0;
    SmcEstimate estimate;
};

struct LssResult {
    SchedulerId best_id = 0;
    /// Fresh estimate of the best id under seeds disjoint from the sampling phase, so the
    /// selection does not bias it.
    SmcEstimate best;
    std::vector<LssEntry> table; ///< sampling phase, in sampling order
};

/// `m` ids drawn from mt19937_64(sampler_seed), low 32 bits each.
std::vector<SchedulerId> sample_ids(std::uint64_t sampler_seed, std::uint64_t m);

/// Decisions of scheduler `id`: global mode hashes all variables, distributed mode the
/// observer set of the component owning the state's choices.
Resolver lss_resolver(const StateSpace& space, SchedulerId id, LssMode mode);

LssResult lss(const StateSpace& space, const Query& query, const LssConfig& cfg);

} // namespace qmv::smc
