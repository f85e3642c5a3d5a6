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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

namespace oracle {

using namespace qmv;

std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes)
{
    std::uint64_t h = 14695981039346656037ULL;
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        h = h ^ bytes[i];
        h = h * 1099511628211ULL;
    }
    return h;
}

std::uint64_t okamoto(double eps, double delta)
{
    return static_cast<std::uint64_t>(std::ceil(std::log(2.0 / delta) / (2.0 * eps * eps)));
}

namespace {

VariableInfo var(const std::string& name, Value hi) { return {name, 0, hi, false, kGlobal}; }

Explicit finish(StateSpaceBuilder& b, std::vector<bool> target)
{
    Explicit e{std::move(b).build(), std::move(target)};
    if (!validate(e.space).empty()) throw std::logic_error("oracle model is malformed");
    return e;
}

} // namespace

Explicit geometric(double p)
{
    StateSpaceBuilder b(ModelClass::Dtmc, {var("s", 1)});
    const Value v0[] = {0}, v1[] = {1};
    b.add_state(v0);
    const Branch br[] = {{p, 1}, {1.0 - p, 0}};
    b.add_choice("", kNoOwner, Distribution::from_weights(br));
    b.add_state(v1);
    b.add_choice("", kNoOwner, Distribution::dirac(1));
    return finish(b, {false, true});
}

Explicit coin()
{
    StateSpaceBuilder b(ModelClass::Dtmc, {var("s", 2)});
    for (Value i = 0; i < 3; ++i) {
        const Value v[] = {i};
        b.add_state(v);
        if (i == 0) {
            const Branch br[] = {{0.5, 1}, {0.5, 2}};
            b.add_choice("", kNoOwner, Distribution::from_weights(br));
        } else {
            b.add_choice("", kNoOwner, Distribution::dirac(static_cast<StateIndex>(i)));
        }
    }
    return finish(b, {false, true, false});
}

Explicit two_action(double pa, double pb)
{
    StateSpaceBuilder b(ModelClass::Mdp, {var("s", 2)}, {{"agent", {0}}});
    const Value v0[] = {0}, v1[] = {1}, v2[] = {2};
    b.add_state(v0);
    const Branch a[] = {{pa, 1}, {1.0 - pa, 2}};
    const Branch c[] = {{pb, 1}, {1.0 - pb, 2}};
    b.add_choice("A", 0, Distribution::from_weights(a));
    b.add_choice("B", 0, Distribution::from_weights(c));
    b.add_state(v1);
    b.add_choice("", kNoOwner, Distribution::dirac(1));
    b.add_state(v2);
    b.add_choice("", kNoOwner, Distribution::dirac(2));
    return finish(b, {false, true, false});
}

Explicit rate_chain(const std::vector<double>& rates)
{
    const auto n = static_cast<Value>(rates.size());
    StateSpaceBuilder b(ModelClass::Ma, {var("s", n)});
    for (Value i = 0; i <= n; ++i) {
        const Value v[] = {i};
        b.add_state(v);
        if (i < n) b.add_rate(rates[static_cast<std::size_t>(i)], static_cast<StateIndex>(i + 1));
    }
    std::vector<bool> target(rates.size() + 1, false);
    target.back() = true;
    return finish(b, target);
}

Explicit race(double r_goal, double r_fail)
{
    StateSpaceBuilder b(ModelClass::Ma, {var("s", 2)});
    const Value v0[] = {0}, v1[] = {1}, v2[] = {2};
    b.add_state(v0);
    b.add_rate(r_goal, 1);
    b.add_rate(r_fail, 2);
    b.add_state(v1);
    b.add_state(v2);
    return finish(b, {false, true, false});
}

Explicit random_mdp(std::uint64_t seed, std::size_t max_states)
{
    std::mt19937_64 rng(seed);
    for (;;) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(20, max_states)(rng);
        const std::size_t goal = n - 2, sink = n - 1;
        std::set<std::size_t> decisions;
        const std::size_t d = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        while (decisions.size() < d) decisions.insert(std::uniform_int_distribution<std::size_t>(0, n / 3)(rng));

        // choices[s][a] = list of (weight, target)
        std::vector<std::vector<std::vector<std::pair<double, std::size_t>>>> choices(n);
        std::uniform_real_distribution<double> weight(0.1, 1.0);
        for (std::size_t s = 0; s + 2 < n; ++s) {
            const std::size_t k = decisions.count(s) ? std::uniform_int_distribution<std::size_t>(2, 3)(rng) : 1;
            for (std::size_t a = 0; a < k; ++a) {
                std::vector<std::pair<double, std::size_t>> c;
                const std::size_t nb = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
                for (std::size_t i = 0; i < nb; ++i) {
                    // Short forward jumps keep runs long enough for decisions to interact.
                    const std::size_t hi = std::min(n - 1, s + 1 + std::max<std::size_t>(3, n / 10));
                    c.emplace_back(weight(rng), std::uniform_int_distribution<std::size_t>(s + 1, hi)(rng));
                }
                choices[s].push_back(std::move(c));
            }
        }
        choices[goal] = {{{1.0, goal}}};
        choices[sink] = {{{1.0, sink}}};

        // Keep the states reachable from 0, numbered in BFS order.
        std::vector<std::size_t> order{0};
        std::map<std::size_t, StateIndex> index{{0, 0}};
        for (std::size_t i = 0; i < order.size(); ++i) {
            for (const auto& c : choices[order[i]]) {
                for (const auto& [w, t] : c) {
                    if (index.emplace(t, static_cast<StateIndex>(order.size())).second) order.push_back(t);
                }
            }
        }
        std::size_t live_decisions = 0;
        for (std::size_t s : order) live_decisions += choices[s].size() > 1;
        if (live_decisions == 0 || !index.count(goal)) continue;

        StateSpaceBuilder b(ModelClass::Mdp, {var("s", static_cast<Value>(n))}, {{"agent", {0}}});
        std::vector<bool> target(order.size(), false);
        for (std::size_t i = 0; i < order.size(); ++i) {
            const Value v[] = {static_cast<Value>(order[i])};
            b.add_state(v);
            const auto& cs = choices[order[i]];
            for (std::size_t a = 0; a < cs.size(); ++a) {
                std::vector<Branch> br;
                for (const auto& [w, t] : cs[a]) br.push_back({w, index.at(t)});
                b.add_choice(cs.size() > 1 ? "a" + std::to_string(a) : "", cs.size() > 1 ? 0 : kNoOwner,
                             Distribution::from_weights(br));
            }
            target[i] = order[i] == goal;
        }
        return finish(b, target);
    }
}

cases::ContactPlan random_plan(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    cases::ContactPlan plan;
    const int nodes = std::uniform_int_distribution<int>(3, 6)(rng);
    for (int i = 1; i <= nodes; ++i) plan.nodes.push_back("N" + std::to_string(i));
    plan.slots = std::uniform_int_distribution<int>(3, 8)(rng);
    std::set<std::tuple<int, int, int>> used;
    const int contacts = std::uniform_int_distribution<int>(1, 10)(rng);
    for (int i = 0; i < contacts; ++i) {
        const int from = std::uniform_int_distribution<int>(0, nodes - 1)(rng);
        int to = std::uniform_int_distribution<int>(0, nodes - 2)(rng);
        if (to >= from) ++to;
        const int slot = std::uniform_int_distribution<int>(1, plan.slots)(rng);
        if (!used.emplace(from, to, slot).second) continue;
        const double p = std::uniform_int_distribution<int>(1, 10)(rng) / 10.0;
        plan.contacts.push_back({plan.nodes[static_cast<std::size_t>(from)], plan.nodes[static_cast<std::size_t>(to)],
                                 slot, p});
    }
    plan.source = plan.nodes.front();
    plan.target = plan.nodes.back();
    plan.copies = std::uniform_int_distribution<int>(1, 3)(rng);
    return plan;
}

cases::ContactPlan four_node_plan(int copies)
{
    cases::ContactPlan plan;
    plan.nodes = {"N1", "N2", "N3", "N4"};
    plan.slots = 5;
    plan.contacts = {{"N1", "N2", 1, 0.9}, {"N2", "N3", 2, 0.9}, {"N1", "N3", 3, 0.5}, {"N3", "N4", 4, 0.5},
                     {"N1", "N4", 5, 0.1}};
    plan.source = "N1";
    plan.target = "N4";
    plan.copies = copies;
    return plan;
}

namespace {

bool only_self_loops(const StateSpace& space, StateIndex s)
{
    for (const Choice& c : space.choices(s)) {
        for (const Branch& b : space.branches(c)) {
            if (b.target != s) return false;
        }
    }
    return space.rates(s).empty();
}

/// Value of the chain induced by `pick` (choice per state), memoized, cycle-checked.
double induced_value(const StateSpace& space, const std::vector<bool>& target, const std::vector<int>& pick)
{
    std::vector<double> memo(space.num_states(), -1.0);
    std::vector<char> active(space.num_states(), 0);
    std::function<double(StateIndex)> value = [&](StateIndex s) -> double {
        if (target[s]) return 1.0;
        if (memo[s] >= 0.0) return memo[s];
        if (only_self_loops(space, s)) return memo[s] = 0.0;
        if (active[s]) throw std::logic_error("oracle model has a cycle");
        active[s] = 1;
        const auto choices = space.choices(s);
        const Choice& c = choices[static_cast<std::size_t>(std::max(0, pick[s]))];
        double v = 0.0;
        for (const Branch& b : space.branches(c)) v += b.probability * value(b.target);
        active[s] = 0;
        return memo[s] = v;
    };
    return value(space.initial());
}

} // namespace

BruteForce brute_force_max(const StateSpace& space, const std::vector<bool>& target)
{
    BruteForce out;
    std::vector<int> pick(space.num_states(), -1);
    // Depth-first over decisions, fixing only those reachable under the partial scheduler.
    std::function<void()> search = [&]() {
        std::vector<bool> seen(space.num_states(), false);
        std::vector<StateIndex> stack{space.initial()};
        seen[space.initial()] = true;
        std::optional<StateIndex> open;
        while (!stack.empty() && !open) {
            const StateIndex s = stack.back();
            stack.pop_back();
            if (target[s]) continue;
            const auto choices = space.choices(s);
            if (choices.size() > 1 && pick[s] < 0) {
                open = s;
                break;
            }
            if (choices.empty()) continue;
            const Choice& c = choices[static_cast<std::size_t>(std::max(0, pick[s]))];
            for (const Branch& b : space.branches(c)) {
                if (!seen[b.target]) {
                    seen[b.target] = true;
                    stack.push_back(b.target);
                }
            }
        }
        if (!open) {
            ++out.schedulers;
            out.best = std::max(out.best, induced_value(space, target, pick));
            return;
        }
        for (int a = 0; a < static_cast<int>(space.choices(*open).size()); ++a) {
            pick[*open] = a;
            search();
        }
        pick[*open] = -1;
    };
    search();
    return out;
}

double acyclic_reach(const StateSpace& space, const std::vector<bool>& target)
{
    return induced_value(space, target, std::vector<int>(space.num_states(), 0));
}

std::size_t bitcoin_cd1_states()
{
    // CD = DB = 1, goal: m_len >= 1 & m_diff > 0. Moves, written from the model description:
    //  honest block (rate, !h_mined & !goal): h_mined := true
    //  attacker block (rate, !a_decide & !goal): m_len := min(1, m_len+1), m_diff += 1
    //  sln (h_mined & !a_decide): h_mined := false, m_diff -= 1, a_decide := true
    //  rst (a_decide): m_len := 0, m_diff := 0, a_decide := false
    //  cnt (a_decide & m_diff > -1): a_decide := false
    using S = std::tuple<int, int, bool, bool>;
    std::set<S> seen{{0, 0, false, false}};
    std::vector<S> todo{{0, 0, false, false}};
    while (!todo.empty()) {
        const auto [len, diff, h, a] = todo.back();
        todo.pop_back();
        const bool goal = len >= 1 && diff > 0;
        std::vector<S> next;
        if (!h && !goal) next.emplace_back(len, diff, true, a);
        if (!a && !goal) next.emplace_back(std::min(1, len + 1), diff + 1, h, a);
        if (h && !a) next.emplace_back(len, diff - 1, false, true);
        if (a) next.emplace_back(0, 0, h, false);
        if (a && diff > -1) next.emplace_back(len, diff, h, false);
        for (const S& t : next) {
            if (seen.insert(t).second) todo.push_back(t);
        }
    }
    return seen.size();
}

} // namespace oracle
