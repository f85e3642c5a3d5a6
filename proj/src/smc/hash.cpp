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

#include "qmv/smc/hash.hpp"

#include <algorithm>
#include <stdexcept>

namespace qmv::smc {

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t state)
{
    for (std::uint8_t b : bytes) {
        state ^= b;
        state *= kFnvPrime;
    }
    return state;
}

void append_le64(std::vector<std::uint8_t>& out, std::uint64_t v)
{
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::vector<std::uint8_t> encode_state(const StateSpace& space, StateIndex s, std::span<const VarIndex> projection)
{
    std::vector<VarIndex> vars(projection.begin(), projection.end());
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    const Valuation v = space.valuation(s);
    std::vector<std::uint8_t> out;
    out.reserve(vars.size() * 8);
    for (VarIndex i : vars) append_le64(out, static_cast<std::uint64_t>(v[i]));
    return out;
}

std::vector<std::uint8_t> encode_state(const StateSpace& space, StateIndex s)
{
    std::vector<std::uint8_t> out;
    out.reserve(space.variables().size() * 8);
    for (Value x : space.valuation(s)) append_le64(out, static_cast<std::uint64_t>(x));
    return out;
}

std::uint32_t lss_decide(SchedulerId id, std::span<const std::uint8_t> state_bytes, std::uint32_t k)
{
    if (k == 0) throw std::invalid_argument("lss_decide needs at least one choice");
    const std::uint8_t prefix[4] = {static_cast<std::uint8_t>(id), static_cast<std::uint8_t>(id >> 8),
                                    static_cast<std::uint8_t>(id >> 16), static_cast<std::uint8_t>(id >> 24)};
    const std::uint64_t j = fnv1a64(state_bytes, fnv1a64(prefix));
    return static_cast<std::uint32_t>(j % k);
}

std::uint64_t run_seed(std::uint64_t master, std::uint64_t run)
{
    std::vector<std::uint8_t> bytes;
    bytes.reserve(16);
    append_le64(bytes, master);
    append_le64(bytes, run);
    return fnv1a64(bytes);
}

} // namespace qmv::smc
