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

#include "qmv/core/model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace qmv {

const char* to_string(ModelClass c)
{
    switch (c) {
    case ModelClass::Dtmc: return "dtmc";
    case ModelClass::Mdp: return "mdp";
    case ModelClass::Ma: return "ma";
    }
    return "?";
}

const char* to_string(Direction d) { return d == Direction::Min ? "min" : "max"; }

const char* to_string(PropertyKind k)
{
    switch (k) {
    case PropertyKind::ReachProb: return "reach-prob";
    case PropertyKind::StepBoundedReachProb: return "step-bounded-reach-prob";
    case PropertyKind::TimeBoundedReachProb: return "time-bounded-reach-prob";
    case PropertyKind::ExpectedTime: return "expected-time";
    }
    return "?";
}

Distribution Distribution::from_weights(std::span<const Branch> weighted)
{
    std::vector<Branch> merged;
    merged.reserve(weighted.size());
    double total = 0.0;
    for (const Branch& b : weighted) {
        if (!(b.probability >= 0.0) || !std::isfinite(b.probability)) {
            throw ModelError("distribution weight must be finite and nonnegative");
        }
        if (b.probability == 0.0) {
            continue;
        }
        total += b.probability;
        merged.push_back(b);
    }
    if (merged.empty() || total <= 0.0) {
        throw ModelError("distribution has no positive weight");
    }
    std::stable_sort(merged.begin(), merged.end(),
                     [](const Branch& a, const Branch& b) { return a.target < b.target; });
    Distribution d;
    for (const Branch& b : merged) {
        if (!d.branches_.empty() && d.branches_.back().target == b.target) {
            d.branches_.back().probability += b.probability;
        } else {
            d.branches_.push_back(b);
        }
    }
    for (Branch& b : d.branches_) {
        b.probability /= total;
    }
    return d;
}

Distribution Distribution::dirac(StateIndex target)
{
    Distribution d;
    d.branches_.push_back({1.0, target});
    return d;
}

Distribution Distribution::unchecked(std::vector<Branch> branches)
{
    Distribution d;
    d.branches_ = std::move(branches);
    return d;
}

double Distribution::total() const
{
    double sum = 0.0;
    for (const Branch& b : branches_) {
        sum += b.probability;
    }
    return sum;
}

std::optional<VarIndex> StateSpace::find_variable(std::string_view name) const
{
    for (VarIndex i = 0; i < variables_.size(); ++i) {
        if (variables_[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::vector<bool> StateSpace::satisfying(const Predicate& p) const
{
    std::vector<bool> out(num_states());
    for (StateIndex s = 0; s < num_states(); ++s) {
        out[s] = p(valuation(s));
    }
    return out;
}

std::string StateSpace::describe_state(StateIndex s) const
{
    std::ostringstream os;
    Valuation v = valuation(s);
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        if (i > 0) {
            os << ", ";
        }
        os << variables_[i].name << '=';
        if (variables_[i].is_bool) {
            os << (v[i] != 0 ? "true" : "false");
        } else {
            os << v[i];
        }
    }
    return os.str();
}

StateSpaceBuilder::StateSpaceBuilder(ModelClass c, std::vector<VariableInfo> variables,
                                     std::vector<ComponentInfo> components)
{
    space_.class_ = c;
    space_.variables_ = std::move(variables);
    space_.components_ = std::move(components);
}

StateIndex StateSpaceBuilder::add_state(std::span<const Value> valuation)
{
    if (valuation.size() != space_.variables_.size()) {
        throw ModelError("valuation width does not match the variable layout");
    }
    if (open_) {
        close_state();
    }
    open_ = true;
    space_.valuations_.insert(space_.valuations_.end(), valuation.begin(), valuation.end());
    space_.exit_rates_.push_back(0.0);
    return static_cast<StateIndex>(space_.exit_rates_.size() - 1);
}

std::uint32_t StateSpaceBuilder::intern_action(std::string_view name)
{
    auto it = std::find(space_.actions_.begin(), space_.actions_.end(), name);
    if (it != space_.actions_.end()) {
        return static_cast<std::uint32_t>(it - space_.actions_.begin());
    }
    space_.actions_.emplace_back(name);
    return static_cast<std::uint32_t>(space_.actions_.size() - 1);
}

void StateSpaceBuilder::add_choice(std::string_view action, ComponentIndex owner, const Distribution& d)
{
    if (!open_) {
        throw ModelError("add_choice before add_state");
    }
    Choice c;
    c.action = intern_action(action);
    c.owner = owner;
    c.first_branch = static_cast<std::uint32_t>(space_.branches_.size());
    c.branch_count = static_cast<std::uint32_t>(d.size());
    space_.branches_.insert(space_.branches_.end(), d.branches().begin(), d.branches().end());
    space_.choices_.push_back(c);
}

void StateSpaceBuilder::add_rate(double rate, StateIndex target)
{
    if (!open_) {
        throw ModelError("add_rate before add_state");
    }
    pending_rates_.push_back({rate, target});
}

void StateSpaceBuilder::add_label(std::string name, Predicate p)
{
    space_.labels_[std::move(name)] = std::move(p);
}

void StateSpaceBuilder::close_state()
{
    std::stable_sort(pending_rates_.begin(), pending_rates_.end(),
                     [](const RateEntry& a, const RateEntry& b) { return a.target < b.target; });
    double exit = 0.0;
    const std::size_t first = space_.rates_.size();
    for (const RateEntry& r : pending_rates_) {
        exit += r.rate;
        if (space_.rates_.size() > first && space_.rates_.back().target == r.target) {
            space_.rates_.back().rate += r.rate;
        } else {
            space_.rates_.push_back(r);
        }
    }
    pending_rates_.clear();
    space_.exit_rates_.back() = exit;
    space_.rate_begin_.push_back(static_cast<std::uint32_t>(space_.rates_.size()));
    const auto nchoices = space_.choices_.size() - space_.choice_begin_.back();
    space_.choice_begin_.push_back(static_cast<std::uint32_t>(space_.choices_.size()));
    space_.masked_.push_back(space_.class_ == ModelClass::Ma && nchoices > 0 ? 1 : 0);
    open_ = false;
}

StateSpace StateSpaceBuilder::build() &&
{
    if (open_) {
        close_state();
    }
    return std::move(space_);
}

namespace {

std::string state_label(StateIndex s)
{
    return "state " + std::to_string(s);
}

} // namespace

std::vector<Violation> validate(const StateSpace& space)
{
    std::vector<Violation> out;
    const std::size_t n = space.num_states();
    auto add = [&](std::optional<StateIndex> s, std::string rule, std::string detail) {
        out.push_back({s, std::move(rule), std::move(detail)});
    };

    if (n == 0) {
        add(std::nullopt, "non-empty", "state space has no states");
        return out;
    }
    if (space.initial() >= n) {
        add(std::nullopt, "initial-state", "initial state index out of range");
    }

    for (StateIndex s = 0; s < n; ++s) {
        const auto choices = space.choices(s);
        const auto rates = space.rates(s);
        for (std::size_t ci = 0; ci < choices.size(); ++ci) {
            const Choice& c = choices[ci];
            if (c.owner != kNoOwner && c.owner >= space.components().size()) {
                add(s, "choice-owner", "choice " + std::to_string(ci) + " has undeclared owner");
            }
            double sum = 0.0;
            std::vector<StateIndex> seen;
            for (const Branch& b : space.branches(c)) {
                sum += b.probability;
                if (!(b.probability > 0.0 && b.probability <= 1.0 + kProbabilityTolerance)) {
                    add(s, "probability-range", "branch probability " + std::to_string(b.probability));
                }
                if (b.target >= n) {
                    add(s, "branch-target", "target " + std::to_string(b.target) + " out of range");
                }
                if (std::find(seen.begin(), seen.end(), b.target) != seen.end()) {
                    add(s, "duplicate-target", "target " + std::to_string(b.target) + " repeated");
                }
                seen.push_back(b.target);
            }
            if (std::abs(sum - 1.0) > kProbabilityTolerance) {
                std::ostringstream os;
                os << "probabilities sum " << sum << " in choice " << ci;
                add(s, "distribution-sum", os.str());
            }
        }

        double rate_sum = 0.0;
        for (const RateEntry& r : rates) {
            rate_sum += r.rate;
            if (!(r.rate > 0.0)) {
                add(s, "rate-positive", "non-positive rate");
            }
            if (r.target >= n) {
                add(s, "rate-target", "target " + std::to_string(r.target) + " out of range");
            }
        }
        if (std::abs(rate_sum - space.exit_rate(s)) > kProbabilityTolerance) {
            add(s, "exit-rate", "exit rate differs from the sum of rates");
        }

        switch (space.model_class()) {
        case ModelClass::Dtmc:
            if (choices.size() != 1) {
                add(s, "dtmc-single-choice", std::to_string(choices.size()) + " choices");
            }
            if (!rates.empty()) {
                add(s, "dtmc-no-markovian", "DTMC state has rates");
            }
            break;
        case ModelClass::Mdp:
            if (choices.empty()) {
                add(s, "mdp-has-choice", "MDP state without choices");
            }
            if (!rates.empty()) {
                add(s, "mdp-no-markovian", "MDP state has rates");
            }
            break;
        case ModelClass::Ma:
            if (space.markovian_masked(s) != !choices.empty()) {
                add(s, "ma-masking", "masked flag does not match the presence of choices");
            }
            break;
        }
    }

    if (space.initial() < n) {
        std::vector<bool> seen(n, false);
        std::deque<StateIndex> queue{space.initial()};
        seen[space.initial()] = true;
        auto visit = [&](StateIndex t) {
            if (t < n && !seen[t]) {
                seen[t] = true;
                queue.push_back(t);
            }
        };
        while (!queue.empty()) {
            const StateIndex s = queue.front();
            queue.pop_front();
            for (const Choice& c : space.choices(s)) {
                for (const Branch& b : space.branches(c)) {
                    visit(b.target);
                }
            }
            for (const RateEntry& r : space.rates(s)) {
                visit(r.target);
            }
        }
        for (StateIndex s = 0; s < n; ++s) {
            if (!seen[s]) {
                add(s, "reachable", state_label(s) + " unreachable from the initial state");
            }
        }
    }
    return out;
}

void check_compatible(const Property& p, ModelClass c)
{
    switch (p.kind) {
    case PropertyKind::ReachProb:
        return;
    case PropertyKind::StepBoundedReachProb:
        if (c == ModelClass::Ma) {
            throw ModelError("step-bounded reachability is defined for DTMC and MDP only");
        }
        return;
    case PropertyKind::TimeBoundedReachProb:
    case PropertyKind::ExpectedTime:
        if (c != ModelClass::Ma) {
            throw ModelError(std::string(to_string(p.kind)) + " requires a Markov automaton");
        }
        return;
    }
}

} // namespace qmv
