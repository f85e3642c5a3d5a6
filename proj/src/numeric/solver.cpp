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

#include "qmv/numeric/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "extract.hpp"

namespace qmv::numeric {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double worst(Direction dir) { return dir == Direction::Max ? -kInf : kInf; }

double better(Direction dir, double a, double b) { return dir == Direction::Max ? std::max(a, b) : std::min(a, b); }

/// Embedded jump value of a markovian state: sum over rates of r/E * v(target).
double jump_value(const StateSpace& space, StateIndex s, const std::vector<double>& v)
{
    const double e = space.exit_rate(s);
    double sum = 0.0;
    for (const RateEntry& r : space.rates(s)) {
        const double x = v[r.target];
        if (std::isinf(x)) return x;
        sum += r.rate / e * x;
    }
    return sum;
}

void require_size(const StateSpace& space, const StateSet& target)
{
    if (target.size() != space.num_states()) throw SolverError("target set size does not match state count");
    if (space.num_states() == 0) throw SolverError("empty state space");
}

[[noreturn]] void not_converged(std::uint64_t iterations, double residual)
{
    throw SolverError("value iteration did not converge after " + std::to_string(iterations) +
                      " sweeps (residual " + std::to_string(residual) + ")");
}

/// Gauss-Seidel sweeps in ascending state order over `active` states until the largest
/// absolute change is at most epsilon. `update` returns the new value of a state.
template <class Update>
std::pair<std::uint64_t, double> gauss_seidel(std::vector<double>& x, const StateSet& active, const SolverConfig& cfg,
                                              Update update, bool probability)
{
    const std::size_t n = x.size();
    std::uint64_t it = 0;
    double residual = 0.0;
    bool any = false;
    for (std::size_t s = 0; s < n; ++s) any = any || active[s];
    if (!any) return {0, 0.0};
    do {
        if (it >= cfg.max_iterations) not_converged(it, residual);
        residual = 0.0;
        for (StateIndex s = 0; s < n; ++s) {
            if (!active[s]) continue;
            const double nv = update(s);
            if (probability && (nv < -kProbabilityTolerance || nv > 1.0 + kProbabilityTolerance)) {
                throw std::logic_error("probability out of range at state " + std::to_string(s));
            }
            residual = std::max(residual, std::abs(nv - x[s]));
            x[s] = nv;
        }
        ++it;
    } while (residual > cfg.epsilon);
    return {it, residual};
}

} // namespace

ValueResult reach_prob(const StateSpace& space, const StateSet& target, Direction dir, const SolverConfig& cfg)
{
    require_size(space, target);
    const std::size_t n = space.num_states();
    const StateSet positive = dir == Direction::Max ? exists_reach(space, target) : forall_reach(space, target);
    std::vector<double> x(n, 0.0);
    StateSet active(n, false);
    for (StateIndex s = 0; s < n; ++s) {
        if (target[s]) x[s] = 1.0;
        else active[s] = positive[s];
    }
    auto update = [&](StateIndex s) {
        const auto choices = space.choices(s);
        if (choices.empty()) return space.is_markovian(s) ? jump_value(space, s, x) : 0.0;
        double best = worst(dir);
        for (const Choice& c : choices) best = better(dir, best, detail::choice_value(space, c, x));
        return best;
    };
    const auto [it, residual] = gauss_seidel(x, active, cfg, update, true);

    ValueResult r;
    r.value = x[space.initial()];
    r.iterations = it;
    r.residual = residual;
    r.scheduler = detail::extract_scheduler(space, x, target, dir,
                                            dir == Direction::Max ? detail::Extraction::Progressive
                                                                  : detail::Extraction::LowestOptimal);
    r.state_values = std::move(x);
    return r;
}

CdfResult step_bounded_cdf(const StateSpace& space, const StateSet& target, Direction dir, std::uint64_t t_max,
                           const SolverConfig& cfg)
{
    require_size(space, target);
    if (space.model_class() == ModelClass::Ma) throw SolverError("step bounds are not defined for Markov automata");
    if (t_max > cfg.horizon_cap) {
        throw SolverError("step bound " + std::to_string(t_max) + " exceeds horizon cap " +
                          std::to_string(cfg.horizon_cap));
    }
    const std::size_t n = space.num_states();
    CdfResult out;
    out.values.reserve(t_max + 1);

    if (space.model_class() == ModelClass::Dtmc) {
        std::vector<double> pi(n, 0.0), next(n, 0.0);
        double reached = 0.0;
        if (target[space.initial()]) reached = 1.0;
        else pi[space.initial()] = 1.0;
        out.values.push_back(reached);
        for (std::uint64_t t = 1; t <= t_max; ++t) {
            std::fill(next.begin(), next.end(), 0.0);
            for (StateIndex s = 0; s < n; ++s) {
                if (pi[s] == 0.0) continue;
                for (const Branch& b : space.branches(space.choices(s).front())) next[b.target] += pi[s] * b.probability;
            }
            for (StateIndex s = 0; s < n; ++s) {
                if (target[s]) {
                    reached += next[s];
                    next[s] = 0.0;
                }
            }
            pi.swap(next);
            out.values.push_back(std::min(reached, 1.0));
        }
    } else {
        std::vector<double> v(n, 0.0), next(n, 0.0);
        for (StateIndex s = 0; s < n; ++s) v[s] = target[s] ? 1.0 : 0.0;
        out.values.push_back(v[space.initial()]);
        for (std::uint64_t t = 1; t <= t_max; ++t) {
            for (StateIndex s = 0; s < n; ++s) {
                if (target[s]) {
                    next[s] = 1.0;
                    continue;
                }
                double best = worst(dir);
                for (const Choice& c : space.choices(s)) best = better(dir, best, detail::choice_value(space, c, v));
                next[s] = std::isinf(best) ? 0.0 : best;
            }
            v.swap(next);
            out.values.push_back(v[space.initial()]);
        }
    }
    for (std::size_t t = 1; t < out.values.size(); ++t) {
        if (out.values[t] + kProbabilityTolerance < out.values[t - 1]) out.monotone = false;
    }
    return out;
}

ValueResult ma_expected_time(const StateSpace& space, const StateSet& target, Direction dir, const SolverConfig& cfg)
{
    require_size(space, target);
    const std::size_t n = space.num_states();
    const StateSet finite =
        dir == Direction::Min ? exists_almost_sure(space, target) : forall_almost_sure(space, target);

    // Min only considers choices that stay inside the almost-sure region.
    detail::ChoiceMask allowed;
    if (dir == Direction::Min) {
        allowed.assign(space.num_choices(), true);
        const Choice* base = space.num_choices() ? &space.choices(0).front() : nullptr;
        for (StateIndex s = 0; s < n; ++s) {
            for (const Choice& c : space.choices(s)) {
                bool inside = true;
                for (const Branch& b : space.branches(c)) inside = inside && finite[b.target];
                allowed[static_cast<std::size_t>(&c - base)] = inside;
            }
        }
    }
    const Choice* base = space.num_choices() ? &space.choices(0).front() : nullptr;

    std::vector<double> x(n, 0.0);
    StateSet active(n, false);
    for (StateIndex s = 0; s < n; ++s) {
        if (target[s]) continue;
        if (!finite[s]) x[s] = kInf;
        else active[s] = true;
    }
    auto update = [&](StateIndex s) {
        const auto choices = space.choices(s);
        if (choices.empty()) return 1.0 / space.exit_rate(s) + jump_value(space, s, x);
        double best = worst(dir);
        for (const Choice& c : choices) {
            if (!allowed.empty() && !allowed[static_cast<std::size_t>(&c - base)]) continue;
            best = better(dir, best, detail::choice_value(space, c, x));
        }
        return best;
    };
    const auto [it, residual] = gauss_seidel(x, active, cfg, update, false);

    ValueResult r;
    r.value = x[space.initial()];
    r.infinite = std::isinf(r.value);
    r.iterations = it;
    r.residual = residual;
    r.scheduler = detail::extract_scheduler(space, x, target, dir,
                                            dir == Direction::Min ? detail::Extraction::Progressive
                                                                  : detail::Extraction::LowestOptimal,
                                            allowed);
    r.state_values = std::move(x);
    return r;
}

namespace {

/// Resolves immediate (probabilistic) states of an MA against the current values.
class ImmediateClosure {
public:
    ImmediateClosure(const StateSpace& space, const StateSet& target, Direction dir, const SolverConfig& cfg)
        : space_(space), target_(target), dir_(dir), cfg_(cfg)
    {
        const std::size_t n = space.num_states();
        // Depth-first post-order over the immediate subgraph yields successors first.
        std::vector<std::uint8_t> mark(n, 0); // 0 new, 1 on stack, 2 done
        std::vector<std::pair<StateIndex, std::size_t>> stack;
        std::vector<StateIndex> succ;
        for (StateIndex root = 0; root < n && acyclic_; ++root) {
            if (!is_immediate(root) || mark[root]) continue;
            stack.emplace_back(root, 0);
            mark[root] = 1;
            while (!stack.empty() && acyclic_) {
                auto& [s, pos] = stack.back();
                succ = successors(s);
                if (pos < succ.size()) {
                    const StateIndex t = succ[pos++];
                    if (!is_immediate(t)) continue;
                    if (mark[t] == 1) acyclic_ = false;
                    else if (mark[t] == 0) {
                        mark[t] = 1;
                        stack.emplace_back(t, 0);
                    }
                } else {
                    mark[s] = 2;
                    order_.push_back(s);
                    stack.pop_back();
                }
            }
        }
        if (!acyclic_) {
            order_.clear();
            for (StateIndex s = 0; s < n; ++s) {
                if (is_immediate(s)) order_.push_back(s);
            }
        }
    }

    void apply(std::vector<double>& v) const
    {
        if (order_.empty()) return;
        std::uint64_t it = 0;
        for (;;) {
            double residual = 0.0;
            for (StateIndex s : order_) {
                double best = worst(dir_);
                for (const Choice& c : space_.choices(s)) best = better(dir_, best, detail::choice_value(space_, c, v));
                residual = std::max(residual, std::abs(best - v[s]));
                v[s] = best;
            }
            ++it;
            if (acyclic_ || residual <= cfg_.epsilon * 1e-3) return;
            if (it >= cfg_.max_iterations) not_converged(it, residual);
        }
    }

private:
    bool is_immediate(StateIndex s) const { return !target_[s] && !space_.choices(s).empty(); }

    std::vector<StateIndex> successors(StateIndex s) const
    {
        std::vector<StateIndex> out;
        for (const Choice& c : space_.choices(s)) {
            for (const Branch& b : space_.branches(c)) out.push_back(b.target);
        }
        return out;
    }

    const StateSpace& space_;
    const StateSet& target_;
    Direction dir_;
    const SolverConfig& cfg_;
    bool acyclic_ = true;
    std::vector<StateIndex> order_;
};

} // namespace

ValueResult ma_time_bounded(const StateSpace& space, const StateSet& target, Direction dir, double t,
                            const SolverConfig& cfg)
{
    require_size(space, target);
    if (!(t >= 0.0) || std::isinf(t)) throw SolverError("time bound must be finite and nonnegative");
    if (!(cfg.time_bound_error > 0.0)) throw SolverError("digitization error must be positive");
    const std::size_t n = space.num_states();
    double lambda = 0.0;
    for (StateIndex s = 0; s < n; ++s) {
        if (space.is_markovian(s)) lambda = std::max(lambda, space.exit_rate(s));
    }
    const double lt = lambda * t;
    const double steps = std::ceil(lt * lt / (2.0 * cfg.time_bound_error));
    if (steps > static_cast<double>(cfg.digitization_cap)) {
        throw SolverError("time bound needs " + std::to_string(steps) + " digitization steps, cap is " +
                          std::to_string(cfg.digitization_cap));
    }
    const auto k = static_cast<std::uint64_t>(steps);

    const ImmediateClosure closure(space, target, dir, cfg);
    std::vector<double> v(n, 0.0), next(n, 0.0);
    for (StateIndex s = 0; s < n; ++s) v[s] = target[s] ? 1.0 : 0.0;
    closure.apply(v);

    if (k > 0) {
        const double delta = t / static_cast<double>(k);
        std::vector<double> stay(n, 0.0);
        for (StateIndex s = 0; s < n; ++s) {
            if (space.is_markovian(s)) stay[s] = std::exp(-space.exit_rate(s) * delta);
        }
        for (std::uint64_t step = 0; step < k; ++step) {
            next = v;
            for (StateIndex s = 0; s < n; ++s) {
                if (target[s] || !space.is_markovian(s)) continue;
                next[s] = (1.0 - stay[s]) * jump_value(space, s, v) + stay[s] * v[s];
            }
            closure.apply(next);
            v.swap(next);
        }
    }

    ValueResult r;
    r.value = std::clamp(v[space.initial()], 0.0, 1.0);
    r.iterations = k;
    r.error_bound = k > 0 ? lt * lt / (2.0 * static_cast<double>(k)) : 0.0;
    r.state_values = std::move(v);
    return r;
}

ValueResult evaluate_scheduler(const StateSpace& space, const StateSet& target, const Scheduler& scheduler,
                               const SolverConfig& cfg)
{
    require_size(space, target);
    const std::size_t n = space.num_states();
    if (scheduler.size() != n) throw SolverError("scheduler size does not match state count");
    auto chosen = [&](StateIndex s) -> const Choice* {
        const auto choices = space.choices(s);
        if (choices.empty()) return nullptr;
        const std::int32_t a = scheduler[s];
        if (a < 0 || static_cast<std::size_t>(a) >= choices.size()) {
            throw SolverError("scheduler undefined at state " + std::to_string(s));
        }
        return &choices[static_cast<std::size_t>(a)];
    };

    // Backward reachability in the induced chain.
    std::vector<std::vector<StateIndex>> preds(n);
    for (StateIndex s = 0; s < n; ++s) {
        if (const Choice* c = chosen(s)) {
            for (const Branch& b : space.branches(*c)) preds[b.target].push_back(s);
        } else if (space.is_markovian(s)) {
            for (const RateEntry& e : space.rates(s)) preds[e.target].push_back(s);
        }
    }
    StateSet positive(target.begin(), target.end());
    std::vector<StateIndex> queue;
    for (StateIndex s = 0; s < n; ++s) {
        if (positive[s]) queue.push_back(s);
    }
    while (!queue.empty()) {
        const StateIndex t = queue.back();
        queue.pop_back();
        for (StateIndex s : preds[t]) {
            if (!positive[s]) {
                positive[s] = true;
                queue.push_back(s);
            }
        }
    }

    std::vector<double> x(n, 0.0);
    StateSet active(n, false);
    for (StateIndex s = 0; s < n; ++s) {
        if (target[s]) x[s] = 1.0;
        else active[s] = positive[s];
    }
    auto update = [&](StateIndex s) {
        if (const Choice* c = chosen(s)) return detail::choice_value(space, *c, x);
        return space.is_markovian(s) ? jump_value(space, s, x) : 0.0;
    };
    const auto [it, residual] = gauss_seidel(x, active, cfg, update, true);

    ValueResult r;
    r.value = x[space.initial()];
    r.iterations = it;
    r.residual = residual;
    r.scheduler = scheduler;
    r.state_values = std::move(x);
    return r;
}

ValueResult check(const StateSpace& space, const Property& property, const SolverConfig& cfg)
{
    check_compatible(property, space.model_class());
    if (!property.target) throw SolverError("property has no target predicate");
    const StateSet target = space.satisfying(property.target);
    switch (property.kind) {
    case PropertyKind::ReachProb:
        return reach_prob(space, target, property.direction, cfg);
    case PropertyKind::StepBoundedReachProb: {
        const CdfResult cdf = step_bounded_cdf(space, target, property.direction, property.step_bound, cfg);
        ValueResult r;
        r.value = cdf.values.back();
        r.iterations = property.step_bound;
        return r;
    }
    case PropertyKind::TimeBoundedReachProb:
        return ma_time_bounded(space, target, property.direction, property.time_bound, cfg);
    case PropertyKind::ExpectedTime:
        return ma_expected_time(space, target, property.direction, cfg);
    }
    throw SolverError("unknown property kind");
}

} // namespace qmv::numeric
