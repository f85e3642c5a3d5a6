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

#include <algorithm>
#include <cmath>
#include <limits>

#include "extract.hpp"
#include "qmv/numeric/solver.hpp"

namespace qmv::numeric {

namespace detail {

double choice_value(const StateSpace& space, const Choice& c, const std::vector<double>& values)
{
    double sum = 0.0;
    for (const Branch& b : space.branches(c)) {
        const double v = values[b.target];
        if (std::isinf(v)) return v;
        sum += b.probability * v;
    }
    return sum;
}

namespace {

bool close_to(double a, double b)
{
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b));
}

} // namespace

Scheduler extract_scheduler(const StateSpace& space, const std::vector<double>& values, const StateSet& target,
                            Direction dir, Extraction mode, const ChoiceMask& allowed)
{
    const std::size_t n = space.num_states();
    Scheduler sched(n, -1);
    // Optimal choices per state, as local indices.
    std::vector<std::vector<std::uint32_t>> optimal(n);
    const Choice* base = space.num_choices() ? &space.choices(0).front() : nullptr;
    for (StateIndex s = 0; s < n; ++s) {
        const auto choices = space.choices(s);
        if (choices.empty()) continue;
        std::vector<double> q(choices.size());
        double best = dir == Direction::Max ? -std::numeric_limits<double>::infinity()
                                            : std::numeric_limits<double>::infinity();
        bool any = false;
        for (std::size_t a = 0; a < choices.size(); ++a) {
            if (!allowed.empty() && !allowed[static_cast<std::size_t>(&choices[a] - base)]) continue;
            q[a] = choice_value(space, choices[a], values);
            best = dir == Direction::Max ? std::max(best, q[a]) : std::min(best, q[a]);
            any = true;
        }
        for (std::size_t a = 0; a < choices.size(); ++a) {
            if (!allowed.empty() && !allowed[static_cast<std::size_t>(&choices[a] - base)]) continue;
            if (any && close_to(q[a], best)) optimal[s].push_back(static_cast<std::uint32_t>(a));
        }
        if (optimal[s].empty()) optimal[s].push_back(0);
        sched[s] = static_cast<std::int32_t>(optimal[s].front());
    }
    if (mode == Extraction::LowestOptimal) return sched;

    // Layered backward search from the target: a state is settled once one of its optimal
    // choices (or, without choices, one of its rate successors) reaches a settled state.
    std::vector<std::vector<StateIndex>> preds(n);
    for (StateIndex s = 0; s < n; ++s) {
        for (const Choice& c : space.choices(s)) {
            for (const Branch& b : space.branches(c)) preds[b.target].push_back(s);
        }
        if (space.is_markovian(s)) {
            for (const RateEntry& r : space.rates(s)) preds[r.target].push_back(s);
        }
    }
    for (auto& p : preds) {
        std::sort(p.begin(), p.end());
        p.erase(std::unique(p.begin(), p.end()), p.end());
    }
    std::vector<bool> settled(target.begin(), target.end());
    std::vector<StateIndex> layer;
    for (StateIndex s = 0; s < n; ++s) {
        if (settled[s]) layer.push_back(s);
    }
    while (!layer.empty()) {
        std::vector<StateIndex> candidates;
        for (StateIndex t : layer) {
            for (StateIndex s : preds[t]) {
                if (!settled[s]) candidates.push_back(s);
            }
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        std::vector<StateIndex> next;
        for (StateIndex s : candidates) {
            const auto choices = space.choices(s);
            if (choices.empty()) {
                next.push_back(s);
                continue;
            }
            for (std::uint32_t a : optimal[s]) {
                bool progresses = false;
                for (const Branch& b : space.branches(choices[a])) progresses = progresses || settled[b.target];
                if (progresses) {
                    sched[s] = static_cast<std::int32_t>(a);
                    next.push_back(s);
                    break;
                }
            }
        }
        for (StateIndex s : next) settled[s] = true;
        layer = std::move(next);
    }
    return sched;
}

} // namespace detail

std::vector<DecisionRow> describe_scheduler(const StateSpace& space, const Scheduler& scheduler)
{
    // Masked markovian moves are explored but never taken, so states reached only
    // through them are left out.
    std::vector<bool> live(space.num_states(), false);
    std::vector<StateIndex> stack{space.initial()};
    live[space.initial()] = true;
    auto visit = [&](StateIndex t) {
        if (!live[t]) {
            live[t] = true;
            stack.push_back(t);
        }
    };
    while (!stack.empty()) {
        const StateIndex s = stack.back();
        stack.pop_back();
        for (const Choice& c : space.choices(s)) {
            for (const Branch& b : space.branches(c)) visit(b.target);
        }
        if (space.is_markovian(s)) {
            for (const RateEntry& r : space.rates(s)) visit(r.target);
        }
    }
    std::vector<DecisionRow> rows;
    for (StateIndex s = 0; s < space.num_states(); ++s) {
        const auto choices = space.choices(s);
        if (choices.size() < 2 || !live[s]) continue;
        if (s >= scheduler.size() || scheduler[s] < 0 || static_cast<std::size_t>(scheduler[s]) >= choices.size()) {
            throw SolverError("scheduler undefined at decision state " + std::to_string(s));
        }
        DecisionRow row;
        row.state = s;
        row.valuation = space.describe_state(s);
        row.choice = static_cast<std::size_t>(scheduler[s]);
        row.action = space.action_name(choices[row.choice]);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace qmv::numeric
