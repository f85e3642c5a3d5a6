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

#include "qmv/smc/lss.hpp"

#include <random>

namespace qmv::smc {

const char* to_string(LssMode m) { return m == LssMode::Global ? "global" : "distributed"; }

namespace {

std::string describe(const std::vector<StateIndex>& states)
{
    std::string s = "model is not good for distribution; states with several deciding components:";
    for (std::size_t i = 0; i < states.size() && i < 20; ++i) s += " " + std::to_string(states[i]);
    if (states.size() > 20) s += " ...";
    return s;
}

/// States offering choices to more than one component.
std::vector<StateIndex> conflicting_states(const StateSpace& space)
{
    std::vector<StateIndex> out;
    for (StateIndex s = 0; s < space.num_states(); ++s) {
        const auto choices = space.choices(s);
        for (const Choice& c : choices) {
            if (c.owner != choices.front().owner) {
                out.push_back(s);
                break;
            }
        }
    }
    return out;
}

/// Master seed of the confirmation runs, disjoint from the sampling phase in practice.
std::uint64_t confirmation_seed(std::uint64_t master)
{
    return run_seed(master, ~std::uint64_t{0});
}

} // namespace

NotGoodForDistribution::NotGoodForDistribution(std::vector<StateIndex> states)
    : SmcError(describe(states)), states_(std::move(states))
{
}

std::vector<SchedulerId> sample_ids(std::uint64_t sampler_seed, std::uint64_t m)
{
    std::mt19937_64 engine(sampler_seed);
    std::vector<SchedulerId> ids(m);
    for (auto& id : ids) id = static_cast<SchedulerId>(engine() & 0xffffffffULL);
    return ids;
}

Resolver lss_resolver(const StateSpace& space, SchedulerId id, LssMode mode)
{
    const StateSpace* sp = &space;
    if (mode == LssMode::Global) {
        return [sp, id](StateIndex s) {
            const auto bytes = encode_state(*sp, s);
            return lss_decide(id, bytes, static_cast<std::uint32_t>(sp->choices(s).size()));
        };
    }
    return [sp, id](StateIndex s) {
        const auto choices = sp->choices(s);
        const ComponentIndex owner = choices.front().owner;
        if (owner >= sp->components().size()) throw SmcError("decision state without an owning component");
        const auto bytes = encode_state(*sp, s, sp->components()[owner].observes);
        return lss_decide(id, bytes, static_cast<std::uint32_t>(choices.size()));
    };
}

LssResult lss(const StateSpace& space, const Query& query, const LssConfig& cfg)
{
    if (cfg.m == 0) throw SmcError("need at least one scheduler id");
    if (cfg.mode == LssMode::Distributed) {
        auto bad = conflicting_states(space);
        if (!bad.empty()) throw NotGoodForDistribution(std::move(bad));
    }
    LssResult result;
    const auto ids = sample_ids(cfg.sampler_seed, cfg.m);
    std::size_t best = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const SmcEstimate e = estimate(space, lss_resolver(space, ids[i], cfg.mode), query, cfg.inner);
        result.table.push_back({ids[i], e});
        const double b = result.table[best].estimate.mean;
        if (cfg.direction == Direction::Max ? e.mean > b : e.mean < b) best = i;
    }
    result.best_id = ids[best];
    SmcConfig confirm = cfg.inner;
    confirm.master_seed = confirmation_seed(cfg.inner.master_seed);
    if (cfg.confirm_runs) {
        confirm.runs = cfg.confirm_runs;
        confirm.epsilon.reset();
        confirm.delta.reset();
    }
    result.best = estimate(space, lss_resolver(space, result.best_id, cfg.mode), query, confirm);
    return result;
}

} // namespace qmv::smc
