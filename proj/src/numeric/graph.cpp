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

#include "qmv/numeric/graph.hpp"

#include <algorithm>

namespace qmv::numeric {

namespace {

/// Behaviours (choices, plus the rate distribution of markovian states) with reverse edges.
struct Graph {
    std::vector<StateIndex> owner;
    std::vector<std::uint32_t> succ_begin{0};
    std::vector<StateIndex> succ;
    std::vector<std::uint32_t> pred_begin;
    std::vector<std::uint32_t> pred; ///< behaviour ids by successor state
    std::vector<std::uint32_t> behaviours_of; ///< per state count

    explicit Graph(const StateSpace& space)
    {
        const std::size_t n = space.num_states();
        behaviours_of.assign(n, 0);
        std::vector<StateIndex> tmp;
        auto finish = [&](StateIndex s) {
            std::sort(tmp.begin(), tmp.end());
            tmp.erase(std::unique(tmp.begin(), tmp.end()), tmp.end());
            succ.insert(succ.end(), tmp.begin(), tmp.end());
            succ_begin.push_back(static_cast<std::uint32_t>(succ.size()));
            owner.push_back(s);
            ++behaviours_of[s];
        };
        for (StateIndex s = 0; s < n; ++s) {
            for (const Choice& c : space.choices(s)) {
                tmp.clear();
                for (const Branch& b : space.branches(c)) tmp.push_back(b.target);
                finish(s);
            }
            if (space.is_markovian(s)) {
                tmp.clear();
                for (const RateEntry& r : space.rates(s)) tmp.push_back(r.target);
                finish(s);
            }
        }
        pred_begin.assign(n + 1, 0);
        for (StateIndex t : succ) ++pred_begin[t + 1];
        for (std::size_t i = 0; i < n; ++i) pred_begin[i + 1] += pred_begin[i];
        pred.resize(succ.size());
        std::vector<std::uint32_t> fill(pred_begin.begin(), pred_begin.end() - 1);
        for (std::uint32_t b = 0; b < owner.size(); ++b) {
            for (std::uint32_t k = succ_begin[b]; k < succ_begin[b + 1]; ++k) pred[fill[succ[k]]++] = b;
        }
    }

    std::size_t num_behaviours() const { return owner.size(); }
};

/// Least set containing `seed` and closed under: a state in `allowed` joins when some
/// (universal: every) eligible behaviour has a successor in the set. With `stay_inside`
/// a behaviour is eligible only if all its successors lie in `allowed`.
StateSet attractor(const Graph& g, const StateSet& seed, const StateSet& allowed, bool universal, bool stay_inside)
{
    const std::size_t n = seed.size();
    std::vector<bool> eligible(g.num_behaviours(), true);
    if (stay_inside) {
        for (std::uint32_t b = 0; b < g.num_behaviours(); ++b) {
            for (std::uint32_t k = g.succ_begin[b]; k < g.succ_begin[b + 1]; ++k) {
                if (!allowed[g.succ[k]]) {
                    eligible[b] = false;
                    break;
                }
            }
        }
    }
    std::vector<std::uint32_t> pending = g.behaviours_of;
    std::vector<bool> hit(g.num_behaviours(), false);
    StateSet in = seed;
    std::vector<StateIndex> queue;
    for (StateIndex s = 0; s < n; ++s) {
        if (in[s]) queue.push_back(s);
    }
    while (!queue.empty()) {
        const StateIndex t = queue.back();
        queue.pop_back();
        for (std::uint32_t k = g.pred_begin[t]; k < g.pred_begin[t + 1]; ++k) {
            const std::uint32_t b = g.pred[k];
            const StateIndex s = g.owner[b];
            if (in[s] || !allowed[s] || hit[b] || !eligible[b]) continue;
            hit[b] = true;
            if (universal && --pending[s] > 0) continue;
            in[s] = true;
            queue.push_back(s);
        }
    }
    return in;
}

} // namespace

StateSet exists_reach(const StateSpace& space, const StateSet& target)
{
    return attractor(Graph(space), target, StateSet(space.num_states(), true), false, false);
}

StateSet forall_reach(const StateSpace& space, const StateSet& target)
{
    return attractor(Graph(space), target, StateSet(space.num_states(), true), true, false);
}

StateSet exists_almost_sure(const StateSpace& space, const StateSet& target)
{
    const Graph g(space);
    StateSet u(space.num_states(), true);
    for (;;) {
        StateSet r = attractor(g, target, u, false, true);
        if (r == u) return u;
        u = std::move(r);
    }
}

StateSet forall_almost_sure(const StateSpace& space, const StateSet& target)
{
    // Some scheduler misses the target with positive probability iff it can reach,
    // avoiding the target, a state from which some scheduler avoids it surely.
    const std::size_t n = space.num_states();
    const Graph g(space);
    const StateSet positive_always = attractor(g, target, StateSet(n, true), true, false);
    StateSet bad(n, false);
    StateSet not_target(n, true);
    for (StateIndex s = 0; s < n; ++s) {
        bad[s] = !positive_always[s];
        not_target[s] = !target[s];
    }
    const StateSet reaches_bad = attractor(g, bad, not_target, false, false);
    StateSet out(n, false);
    for (StateIndex s = 0; s < n; ++s) out[s] = !reaches_bad[s];
    return out;
}

} // namespace qmv::numeric
