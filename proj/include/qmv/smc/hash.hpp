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
#include <span>
#include <vector>

#include "qmv/core/model.hpp"

namespace qmv::smc {

using SchedulerId = std::uint32_t;

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t state = kFnvOffset);

/// Appends `v` as 8 bytes, little-endian two's complement.
void append_le64(std::vector<std::uint8_t>& out, std::uint64_t v);

/// Values of `projection` (layout indices, taken in layout order) as 8 bytes each.
std::vector<std::uint8_t> encode_state(const StateSpace& space, StateIndex s, std::span<const VarIndex> projection);

/// All variables.
std::vector<std::uint8_t> encode_state(const StateSpace& space, StateIndex s);

/// FNV-1a-64 over (id as 4 bytes LE ++ state bytes), reduced mod k.
std::uint32_t lss_decide(SchedulerId id, std::span<const std::uint8_t> state_bytes, std::uint32_t k);

/// Seed of run `run` under `master`: FNV-1a-64 over both as 8 bytes LE.
std::uint64_t run_seed(std::uint64_t master, std::uint64_t run);

} // namespace qmv::smc
