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

#include "qmv/cases/generated.hpp"

namespace qmv::cases {

enum class FlitPattern { EveryOtherCycle, Bursty };
enum class NoiseKind { Resistive, Inductive, Either };

struct NocParams {
    FlitPattern pattern = FlitPattern::EveryOtherCycle;
    int burst_length = 2;  ///< bursty: cycles with injection per period
    int burst_period = 8;  ///< bursty: period in cycles
    int buffer = 1;        ///< capacity of each local and transit buffer
    int k_res = 3;         ///< simultaneous transmitters for a resistive event
    int k_ind = 2;         ///< change in transmitter count for an inductive event
    NoiseKind kind = NoiseKind::Either;
    int events = 1;        ///< n
    int horizon = 10;      ///< t, cycles
    /// Unfolds a cycle counter `clk` up to this bound; cycles stop at the bound.
    std::optional<int> unfold;
};

/// 2x2 mesh DTMC with XY routing. Each router has a local buffer whose head destination is
/// sampled when first needed, and a transit buffer for flits turning into the Y port. The
/// Y port is shared round-robin between local and transit flits. Link latches carry last
/// cycle's transmissions; a monitor counts noise events, saturating at n.
GeneratedCase gen_noc(const NocParams& p);

} // namespace qmv::cases
