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

#include <optional>
#include <string>

#include "qmv/cases/generated.hpp"

namespace qmv::cases {

struct BitcoinParams {
    double M = 0.2;            ///< attacker share of the hash rate
    int CD = 6;                ///< confirmation depth
    std::optional<int> DB;     ///< give-up distance, defaults to CD
    std::string goal = "m_len >= CD & m_diff > 0";
    double time_bound = 60.0;  ///< minutes, for the time-bounded property
};

/// Trust attack MA: honest and attacker mining races, `sln` synchronization and the
/// attacker's restart/continue choice. The goal is absorbing.
GeneratedCase gen_bitcoin(const BitcoinParams& p);

} // namespace qmv::cases
