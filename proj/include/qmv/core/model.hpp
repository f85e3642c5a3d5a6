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
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmv {

enum class ModelClass { Dtmc, Mdp, Ma };

const char* to_string(ModelClass c);

using StateIndex = std::uint32_t;
using ComponentIndex = std::uint32_t;
using VarIndex = std::uint32_t;
using Value = std::int64_t;

/// Owner of implicit self-loops added at deadlocks; never a declared component.
inline constexpr ComponentIndex kNoOwner = std::numeric_limits<ComponentIndex>::max();
/// Owner of global variables.
inline constexpr ComponentIndex kGlobal = std::numeric_limits<ComponentIndex>::max();

inline constexpr double kProbabilityTolerance = 1e-9;

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Branch {
    double probability = 0.0;
    StateIndex target = 0;

    bool operator==(const Branch&) const = default;
};

/// Canonical discrete distribution: targets are unique and sorted, probabilities sum to one.
class Distribution {
public:
    Distribution() = default;

    /// Normalizes nonnegative weights and merges duplicate targets; zero weights are dropped.
    static Distribution from_weights(std::span<const Branch> weighted);
    static Distribution dirac(StateIndex target);
    /// Takes branches verbatim. Only useful for building deliberately malformed spaces.
    static Distribution unchecked(std::vector<Branch> branches);

    std::span<const Branch> branches() const { return branches_; }
    std::size_t size() const { return branches_.size(); }
    double total() const;

    bool operator==(const Distribution&) const = default;

private:
    std::vector<Branch> branches_;
};

struct RateEntry {
    double rate = 0.0;
    StateIndex target = 0;

    bool operator==(const RateEntry&) const = default;
};

struct VariableInfo {
    std::string name;
    Value lower = 0;
    Value upper = 0;
    bool is_bool = false;
    ComponentIndex owner = kGlobal;
};

struct ComponentInfo {
    std::string name;
    std::vector<VarIndex> observes;
};

/// A choice as stored in the state space: its distribution lives in the flat branch array.
struct Choice {
    std::uint32_t action = 0; ///< index into StateSpace::actions(); 0 is the internal action
    ComponentIndex owner = kNoOwner;
    std::uint32_t first_branch = 0;
    std::uint32_t branch_count = 0;
};

using Valuation = std::span<const Value>;
using Predicate = std::function<bool(Valuation)>;

class StateSpaceBuilder;

/// Explicit DTMC/MDP/MA in sparse row form. Immutable once built.
class StateSpace {
public:
    ModelClass model_class() const { return class_; }
    std::size_t num_states() const { return choice_begin_.size() - 1; }
    std::size_t num_choices() const { return choices_.size(); }
    std::size_t num_branches() const { return branches_.size(); }
    std::size_t num_rate_entries() const { return rates_.size(); }
    StateIndex initial() const { return initial_; }

    std::span<const Choice> choices(StateIndex s) const
    {
        return {choices_.data() + choice_begin_[s], choices_.data() + choice_begin_[s + 1]};
    }
    std::span<const Branch> branches(const Choice& c) const
    {
        return {branches_.data() + c.first_branch, c.branch_count};
    }
    std::span<const RateEntry> rates(StateIndex s) const
    {
        return {rates_.data() + rate_begin_[s], rates_.data() + rate_begin_[s + 1]};
    }
    double exit_rate(StateIndex s) const { return exit_rates_[s]; }
    /// Maximal progress: markovian transitions of a state with immediate choices are ignored.
    bool markovian_masked(StateIndex s) const { return masked_[s] != 0; }
    /// True for MA states whose behaviour is given by their (unmasked) rates.
    bool is_markovian(StateIndex s) const
    {
        return class_ == ModelClass::Ma && choices(s).empty() && exit_rates_[s] > 0.0;
    }

    const std::vector<std::string>& actions() const { return actions_; }
    const std::string& action_name(const Choice& c) const { return actions_[c.action]; }

    const std::vector<VariableInfo>& variables() const { return variables_; }
    const std::vector<ComponentInfo>& components() const { return components_; }
    std::optional<VarIndex> find_variable(std::string_view name) const;

    Valuation valuation(StateIndex s) const
    {
        return {valuations_.data() + s * variables_.size(), variables_.size()};
    }

    const std::map<std::string, Predicate>& labels() const { return labels_; }

    std::vector<bool> satisfying(const Predicate& p) const;

    /// "x=1, b=true" in layout order.
    std::string describe_state(StateIndex s) const;

private:
    friend class StateSpaceBuilder;

    ModelClass class_ = ModelClass::Dtmc;
    StateIndex initial_ = 0;
    std::vector<std::uint32_t> choice_begin_{0};
    std::vector<Choice> choices_;
    std::vector<Branch> branches_;
    std::vector<std::uint32_t> rate_begin_{0};
    std::vector<RateEntry> rates_;
    std::vector<double> exit_rates_;
    std::vector<std::uint8_t> masked_;
    std::vector<std::string> actions_{""};
    std::vector<VariableInfo> variables_;
    std::vector<ComponentInfo> components_;
    std::vector<Value> valuations_;
    std::map<std::string, Predicate> labels_;
};

/// States must be added in index order; each state's choices and rates are added
/// before the next state is opened.
class StateSpaceBuilder {
public:
    explicit StateSpaceBuilder(ModelClass c, std::vector<VariableInfo> variables = {},
                               std::vector<ComponentInfo> components = {});

    StateIndex add_state(std::span<const Value> valuation = {});
    std::uint32_t intern_action(std::string_view name);
    void add_choice(std::string_view action, ComponentIndex owner, const Distribution& d);
    void add_rate(double rate, StateIndex target);
    void set_initial(StateIndex s) { space_.initial_ = s; }
    void add_label(std::string name, Predicate p);

    std::size_t num_states() const { return space_.exit_rates_.size(); }

    StateSpace build() &&;

private:
    void close_state();

    StateSpace space_;
    bool open_ = false;
    std::vector<RateEntry> pending_rates_;
};

struct Violation {
    std::optional<StateIndex> state;
    std::string rule;
    std::string detail;
};

/// Checks every structural invariant; returns an empty list iff the space is well formed.
std::vector<Violation> validate(const StateSpace& space);

enum class Direction { Min, Max };

const char* to_string(Direction d);

enum class PropertyKind { ReachProb, StepBoundedReachProb, TimeBoundedReachProb, ExpectedTime };

const char* to_string(PropertyKind k);

struct Property {
    PropertyKind kind = PropertyKind::ReachProb;
    Direction direction = Direction::Max;
    Predicate target;
    std::uint64_t step_bound = 0;
    double time_bound = 0.0;
    std::string text;
};

/// Throws ModelError if kind and model class do not fit together.
void check_compatible(const Property& p, ModelClass c);

using Scheduler = std::vector<std::int32_t>; ///< per state: chosen choice index, -1 if none

struct ValueResult {
    double value = 0.0; ///< +infinity marks an unreachable target for expected time
    bool infinite = false;
    std::uint64_t iterations = 0;
    double residual = 0.0;
    std::optional<Scheduler> scheduler;
    std::vector<double> state_values;
    std::optional<double> error_bound; ///< a-priori bound, time-bounded MA only
};

} // namespace qmv
