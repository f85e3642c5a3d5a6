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

#include "qmv/smc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "qmv/smc/hash.hpp"

namespace qmv::smc {

std::uint64_t okamoto_runs(double epsilon, double delta)
{
    if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0)) {
        throw SmcError("epsilon and delta must lie in (0,1)");
    }
    return static_cast<std::uint64_t>(std::ceil(std::log(2.0 / delta) / (2.0 * epsilon * epsilon)));
}

std::uint64_t run_count(const SmcConfig& cfg)
{
    if (cfg.epsilon.has_value() != cfg.delta.has_value()) throw SmcError("epsilon and delta go together");
    if (cfg.runs && cfg.epsilon) throw SmcError("give either a run count or epsilon/delta, not both");
    if (cfg.epsilon) return okamoto_runs(*cfg.epsilon, *cfg.delta);
    if (!cfg.runs || *cfg.runs == 0) throw SmcError("run count must be positive");
    return *cfg.runs;
}

Query make_query(const StateSpace& space, const Property& property)
{
    check_compatible(property, space.model_class());
    if (property.kind == PropertyKind::ExpectedTime) throw SmcError("simulation does not support expected time");
    if (!property.target) throw SmcError("property has no target predicate");
    Query q;
    q.kind = property.kind;
    q.target = space.satisfying(property.target);
    q.step_bound = property.step_bound;
    q.time_bound = property.time_bound;
    return q;
}

namespace {

template <class Entries, class Weight>
StateIndex sample(const Entries& entries, double total, double u, Weight weight)
{
    double x = u * total;
    for (const auto& e : entries) {
        x -= weight(e);
        if (x < 0.0) return e.target;
    }
    return entries.back().target;
}

bool absorbing(const StateSpace& space, StateIndex s)
{
    const auto choices = space.choices(s);
    if (choices.empty()) return false;
    for (const Choice& c : choices) {
        const auto bs = space.branches(c);
        if (bs.size() != 1 || bs.front().target != s) return false;
    }
    return true;
}

/// Advances one transition; returns false when the run cannot move (MA deadlock).
bool step(const StateSpace& space, const Resolver& resolver, RunRng& rng, StateIndex& s, double& time)
{
    const auto choices = space.choices(s);
    if (!choices.empty()) {
        std::uint32_t a = 0;
        if (choices.size() > 1) {
            if (!resolver) throw SmcError("nondeterministic state " + std::to_string(s) + " needs a resolver");
            a = resolver(s);
            if (a >= choices.size()) throw SmcError("resolver returned an invalid choice");
        }
        const auto bs = space.branches(choices[a]);
        s = sample(bs, 1.0, rng.uniform(), [](const Branch& b) { return b.probability; });
        return true;
    }
    if (space.is_markovian(s)) {
        const double e = space.exit_rate(s);
        time += rng.exponential(e);
        s = sample(space.rates(s), e, rng.uniform(), [](const RateEntry& r) { return r.rate; });
        return true;
    }
    return false;
}

} // namespace

RunOutcome simulate_run(const StateSpace& space, const Resolver& resolver, const Query& query, std::uint64_t seed,
                        std::uint64_t max_steps)
{
    RunRng rng(seed);
    RunOutcome out;
    StateIndex s = space.initial();
    for (;;) {
        if (query.target[s]) {
            out.hit = query.kind != PropertyKind::TimeBoundedReachProb || out.time <= query.time_bound;
            return out;
        }
        if (query.kind == PropertyKind::StepBoundedReachProb && out.steps >= query.step_bound) return out;
        if (absorbing(space, s)) return out;
        if (out.steps >= max_steps) {
            out.truncated = true;
            return out;
        }
        if (!step(space, resolver, rng, s, out.time)) return out;
        ++out.steps;
        if (query.kind == PropertyKind::TimeBoundedReachProb && out.time > query.time_bound) return out;
    }
}

std::vector<StateIndex> simulate_path(const StateSpace& space, const Resolver& resolver, std::uint64_t seed,
                                      std::uint64_t steps)
{
    RunRng rng(seed);
    std::vector<StateIndex> path{space.initial()};
    StateIndex s = space.initial();
    double time = 0.0;
    for (std::uint64_t i = 0; i < steps; ++i) {
        if (!step(space, resolver, rng, s, time)) break;
        path.push_back(s);
    }
    return path;
}

SmcEstimate estimate(const StateSpace& space, const Resolver& resolver, const Query& query, const SmcConfig& cfg)
{
    const std::uint64_t n = run_count(cfg);
    if (query.target.size() != space.num_states()) throw SmcError("target set size does not match state count");
    unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n));

    struct Tally {
        std::uint64_t hits = 0;
        std::uint64_t truncated = 0;
    };
    std::vector<Tally> tallies(workers);
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](unsigned w) {
        try {
            for (std::uint64_t r = w; r < n; r += workers) {
                const RunOutcome o = simulate_run(space, resolver, query, run_seed(cfg.master_seed, r), cfg.max_steps);
                tallies[w].hits += o.hit;
                tallies[w].truncated += o.truncated;
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> threads;
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    SmcEstimate est;
    est.runs = n;
    for (const Tally& t : tallies) {
        est.hits += t.hits;
        est.truncated += t.truncated;
    }
    est.mean = static_cast<double>(est.hits) / static_cast<double>(n);
    double half;
    if (cfg.epsilon) {
        est.okamoto = true;
        half = *cfg.epsilon;
    } else {
        half = 1.96 * std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(n));
    }
    est.ci_low = std::max(0.0, est.mean - half);
    est.ci_high = std::min(1.0, est.mean + half);
    return est;
}

Resolver follow(const Scheduler& scheduler)
{
    return [scheduler](StateIndex s) {
        const std::int32_t a = scheduler.at(s);
        if (a < 0) throw SmcError("scheduler undefined at state " + std::to_string(s));
        return static_cast<std::uint32_t>(a);
    };
}

} // namespace qmv::smc
