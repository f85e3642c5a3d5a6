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

#include "qmv/lang/explore.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "qmv/lang/parser.hpp"

namespace qmv::lang {

namespace {

Value eval_const_int(const ExprPtr& e, const Scope& constants, const std::string& what)
{
    const Scalar s = CompiledExpr::compile(e, constants).eval({});
    if (s.type == Type::Bool) throw SemanticError(what + " must be an integer");
    if (s.type == Type::Real) {
        if (s.r != std::floor(s.r)) throw SemanticError(what + " must be an integer");
        return static_cast<Value>(s.r);
    }
    return s.i;
}

std::pair<VariableInfo, Value> resolve_variable(const VariableDecl& d, ComponentIndex owner,
                                                const Scope& constants)
{
    VariableInfo v;
    v.name = d.name;
    v.owner = owner;
    v.is_bool = d.is_bool;
    Value init = 0;
    if (d.is_bool) {
        v.lower = 0;
        v.upper = 1;
        if (d.init) {
            const Scalar s = CompiledExpr::compile(d.init, constants).eval({});
            if (s.type != Type::Bool) throw SemanticError("initial value of '" + d.name + "' must be boolean");
            init = s.i;
        }
    } else {
        v.lower = eval_const_int(d.lower, constants, "lower bound of '" + d.name + "'");
        v.upper = eval_const_int(d.upper, constants, "upper bound of '" + d.name + "'");
        if (v.lower > v.upper) throw SemanticError("empty range for variable '" + d.name + "'");
        init = d.init ? eval_const_int(d.init, constants, "initial value of '" + d.name + "'") : v.lower;
        if (init < v.lower || init > v.upper) {
            throw SemanticError("initial value " + std::to_string(init) + " of '" + d.name + "' outside [" +
                                std::to_string(v.lower) + ".." + std::to_string(v.upper) + "]");
        }
    }
    return {v, init};
}

void collect_reads(const ExprPtr& e, const SymbolicModel& m, std::vector<std::string>& out, int depth = 0)
{
    if (!e) return;
    if (e->kind == Expr::Kind::Name) out.push_back(e->name);
    if (e->kind == Expr::Kind::Label && depth < 64) {
        for (const LabelDecl& l : m.labels) {
            if (l.name == e->name) collect_reads(l.expr, m, out, depth + 1);
        }
    }
    for (const auto& a : e->args) collect_reads(a, m, out, depth);
}

} // namespace

Layout make_layout(const SymbolicModel& m)
{
    const Scope constants = constant_scope(m);
    Layout layout;
    for (const VariableDecl& d : m.globals) {
        auto [info, init] = resolve_variable(d, kGlobal, constants);
        layout.variables.push_back(std::move(info));
        layout.initial.push_back(init);
    }
    for (ComponentIndex p = 0; p < m.processes.size(); ++p) {
        for (const VariableDecl& d : m.processes[p].locals) {
            auto [info, init] = resolve_variable(d, p, constants);
            layout.variables.push_back(std::move(info));
            layout.initial.push_back(init);
        }
    }
    auto index_of = [&](const std::string& name) -> std::optional<VarIndex> {
        for (VarIndex i = 0; i < layout.variables.size(); ++i) {
            if (layout.variables[i].name == name) return i;
        }
        return std::nullopt;
    };
    for (ComponentIndex p = 0; p < m.processes.size(); ++p) {
        const ProcessDecl& proc = m.processes[p];
        std::set<VarIndex> obs;
        for (VarIndex i = 0; i < layout.variables.size(); ++i) {
            if (layout.variables[i].owner == p) obs.insert(i);
        }
        if (proc.observes) {
            for (const std::string& n : *proc.observes) {
                auto i = index_of(n);
                if (!i) throw SemanticError("module " + proc.name + " observes undeclared variable '" + n + "'");
                obs.insert(*i);
            }
        } else {
            std::vector<std::string> reads;
            for (const Command& c : proc.commands) {
                collect_reads(c.guard, m, reads);
                collect_reads(c.rate, m, reads);
                for (const UpdateBranch& b : c.branches) {
                    collect_reads(b.weight, m, reads);
                    for (const Assignment& a : b.assignments) collect_reads(a.value, m, reads);
                }
            }
            for (const std::string& n : reads) {
                auto i = index_of(n);
                if (i && layout.variables[*i].owner == kGlobal) obs.insert(*i);
            }
        }
        layout.components.push_back({proc.name, std::vector<VarIndex>(obs.begin(), obs.end())});
    }
    return layout;
}

Scope full_scope(const SymbolicModel& m)
{
    Scope scope = constant_scope(m);
    const Layout layout = make_layout(m);
    for (VarIndex i = 0; i < layout.variables.size(); ++i) {
        const VariableInfo& v = layout.variables[i];
        if (scope.constants.count(v.name)) throw SemanticError("'" + v.name + "' declared as constant and variable");
        scope.variables[v.name] = {i, v.is_bool ? Type::Bool : Type::Int};
    }
    for (const LabelDecl& l : m.labels) scope.labels[l.name] = l.expr;
    return scope;
}

Predicate compile_predicate(const ExprPtr& e, const SymbolicModel& model)
{
    CompiledExpr c = CompiledExpr::compile(e, full_scope(model));
    if (c.type() != Type::Bool) throw SemanticError("predicate '" + print(e) + "' is not boolean");
    return [c](Valuation v) { return c.eval(v).as_bool(); };
}

Predicate compile_predicate(std::string_view text, const SymbolicModel& model)
{
    return compile_predicate(parse_expression(text), model);
}

namespace {

struct CompiledBranch {
    CompiledExpr weight; ///< invalid: weight 1
    std::vector<std::pair<VarIndex, CompiledExpr>> assignments;
};

struct CompiledCommand {
    ComponentIndex process = 0;
    std::size_t index = 0;
    std::string action;
    std::optional<CompiledExpr> rate;
    CompiledExpr guard;
    std::vector<CompiledBranch> branches;
    int line = 0;
};

/// A command's branches resolved in one state.
struct Outcome {
    double probability = 0.0;
    std::vector<std::pair<VarIndex, Value>> writes;
};

struct ValuationHash {
    std::size_t operator()(const std::vector<Value>& v) const noexcept
    {
        std::uint64_t h = 1469598103934665603ULL;
        for (Value x : v) {
            h ^= static_cast<std::uint64_t>(x);
            h *= 1099511628211ULL;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

class Explorer {
public:
    Explorer(const SymbolicModel& m, const ExploreOptions& opt) : model_(m), options_(opt)
    {
        layout_ = make_layout(m);
        scope_ = full_scope(m);
        for (ComponentIndex p = 0; p < m.processes.size(); ++p) {
            const ProcessDecl& proc = m.processes[p];
            for (std::size_t ci = 0; ci < proc.commands.size(); ++ci) {
                const Command& c = proc.commands[ci];
                CompiledCommand cc;
                cc.process = p;
                cc.index = ci;
                cc.action = c.action;
                cc.line = c.line;
                cc.guard = CompiledExpr::compile(c.guard, scope_);
                if (c.rate) cc.rate = CompiledExpr::compile(c.rate, scope_);
                for (const UpdateBranch& b : c.branches) {
                    CompiledBranch cb;
                    if (b.weight) cb.weight = CompiledExpr::compile(b.weight, scope_);
                    for (const Assignment& a : b.assignments) {
                        cb.assignments.emplace_back(scope_.variables.at(a.variable).first,
                                                    CompiledExpr::compile(a.value, scope_));
                    }
                    cc.branches.push_back(std::move(cb));
                }
                if (!c.markovian() && !c.action.empty()) {
                    auto& parts = participants_[c.action];
                    if (parts.empty() || parts.back() != p) parts.push_back(p);
                }
                commands_.push_back(std::move(cc));
            }
        }
    }

    StateSpace run()
    {
        StateSpaceBuilder builder(model_.model_class, layout_.variables, layout_.components);
        const std::size_t width = layout_.variables.size();
        intern(layout_.initial);
        std::vector<Value> current(width);
        std::vector<Value> succ(width);
        std::vector<std::int32_t> writer(width, -1);

        for (std::size_t k = 0; k < count_; ++k) {
            std::copy_n(store_.begin() + static_cast<std::ptrdiff_t>(k * width), width, current.begin());
            const StateIndex self = builder.add_state(current);
            const Valuation v(current);

            // Enabled immediate commands per process, resolved to outcomes.
            std::vector<std::vector<std::size_t>> enabled(model_.processes.size());
            std::unordered_map<std::size_t, std::vector<Outcome>> outcomes;
            std::vector<std::size_t> enabled_markov;
            for (std::size_t ci = 0; ci < commands_.size(); ++ci) {
                const CompiledCommand& c = commands_[ci];
                if (!c.guard.eval(v).as_bool()) continue;
                if (c.rate) {
                    enabled_markov.push_back(ci);
                } else {
                    enabled[c.process].push_back(ci);
                    outcomes[ci] = resolve(c, v);
                }
            }

            std::size_t choice_count = 0;
            for (ComponentIndex p = 0; p < model_.processes.size(); ++p) {
                for (std::size_t ci : enabled[p]) {
                    const CompiledCommand& c = commands_[ci];
                    std::vector<std::size_t> parts{ci};
                    if (c.action.empty()) {
                        add_combination(builder, parts, outcomes, current, succ, writer, p, "");
                        ++choice_count;
                        continue;
                    }
                    const std::vector<ComponentIndex>& others = participants_.at(c.action);
                    if (others.front() != p) continue;
                    // Odometer over the enabled same-label commands of the other participants;
                    // the last participant varies fastest.
                    std::vector<std::vector<std::size_t>> partners;
                    bool blocked = false;
                    for (std::size_t oi = 1; oi < others.size() && !blocked; ++oi) {
                        std::vector<std::size_t> same;
                        for (std::size_t cj : enabled[others[oi]]) {
                            if (commands_[cj].action == c.action) same.push_back(cj);
                        }
                        blocked = same.empty();
                        partners.push_back(std::move(same));
                    }
                    if (blocked) continue;
                    std::vector<std::size_t> pos(partners.size(), 0);
                    for (bool more = true; more;) {
                        parts.resize(1);
                        for (std::size_t j = 0; j < partners.size(); ++j) parts.push_back(partners[j][pos[j]]);
                        add_combination(builder, parts, outcomes, current, succ, writer, p, c.action);
                        ++choice_count;
                        more = false;
                        for (std::size_t j = partners.size(); j-- > 0;) {
                            if (++pos[j] < partners[j].size()) {
                                more = true;
                                break;
                            }
                            pos[j] = 0;
                        }
                    }
                }
            }

            if (model_.model_class == ModelClass::Dtmc && choice_count > 1) {
                throw ExplorationError("nondeterminism in DTMC: " + std::to_string(choice_count) +
                                       " enabled choices in state (" + describe(current) + ")");
            }

            for (std::size_t ci : enabled_markov) {
                const CompiledCommand& c = commands_[ci];
                const double rate = c.rate->eval(v).as_real();
                if (!(rate > 0.0) || !std::isfinite(rate)) {
                    throw ExplorationError("non-positive rate " + std::to_string(rate) + " at line " +
                                           std::to_string(c.line) + " in state (" + describe(current) + ")");
                }
                for (const Outcome& o : resolve(c, v)) {
                    apply(current, succ, writer, {&o}, c.line);
                    builder.add_rate(rate * o.probability, intern(succ));
                }
            }

            if (choice_count == 0 && model_.model_class != ModelClass::Ma) {
                builder.add_choice("", kNoOwner, Distribution::dirac(self));
            }
        }

        for (const LabelDecl& l : model_.labels) {
            builder.add_label(l.name, compile_predicate(l.expr, model_));
        }
        builder.set_initial(0);
        return std::move(builder).build();
    }

private:
    std::string describe(const std::vector<Value>& v) const
    {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i > 0) s += ", ";
            s += layout_.variables[i].name + "=" + std::to_string(v[i]);
        }
        return s;
    }

    StateIndex intern(const std::vector<Value>& v)
    {
        auto [it, inserted] = index_.try_emplace(v, static_cast<StateIndex>(count_));
        if (inserted) {
            if (count_ >= options_.state_cap) {
                throw StateCapExceeded("state space exceeds the cap of " + std::to_string(options_.state_cap) +
                                       " states");
            }
            ++count_;
            store_.insert(store_.end(), v.begin(), v.end());
        }
        return it->second;
    }

    std::vector<Outcome> resolve(const CompiledCommand& c, Valuation v) const
    {
        std::vector<Outcome> out;
        double total = 0.0;
        for (const CompiledBranch& b : c.branches) {
            Outcome o;
            o.probability = b.weight.valid() ? b.weight.eval(v).as_real() : 1.0;
            if (!(o.probability > 0.0) || !std::isfinite(o.probability)) {
                throw ExplorationError("non-positive weight at line " + std::to_string(c.line) + " in state (" +
                                       describe(std::vector<Value>(v.begin(), v.end())) + ")");
            }
            total += o.probability;
            for (const auto& [slot, expr] : b.assignments) {
                const Scalar s = expr.eval(v);
                Value value = s.i;
                if (s.type == Type::Real) {
                    if (s.r != std::floor(s.r)) {
                        throw ExplorationError("non-integral value assigned to '" + layout_.variables[slot].name +
                                               "' at line " + std::to_string(c.line));
                    }
                    value = static_cast<Value>(s.r);
                }
                o.writes.emplace_back(slot, value);
            }
            out.push_back(std::move(o));
        }
        for (Outcome& o : out) o.probability /= total;
        return out;
    }

    void apply(const std::vector<Value>& current, std::vector<Value>& succ, std::vector<std::int32_t>& writer,
               const std::vector<const Outcome*>& parts, int line) const
    {
        succ = current;
        std::fill(writer.begin(), writer.end(), -1);
        for (std::size_t pi = 0; pi < parts.size(); ++pi) {
            for (const auto& [slot, value] : parts[pi]->writes) {
                if (writer[slot] >= 0 && writer[slot] != static_cast<std::int32_t>(pi)) {
                    throw ExplorationError("conflicting synchronized writes to '" + layout_.variables[slot].name +
                                           "' in state (" + describe(current) + ")");
                }
                writer[slot] = static_cast<std::int32_t>(pi);
                const VariableInfo& var = layout_.variables[slot];
                if (value < var.lower || value > var.upper) {
                    throw ExplorationError("assignment " + var.name + "=" + std::to_string(value) + " outside [" +
                                           std::to_string(var.lower) + ".." + std::to_string(var.upper) +
                                           "] (line " + std::to_string(line) + ") in state (" + describe(current) +
                                           ")");
                }
                succ[slot] = value;
            }
        }
    }

    void add_combination(StateSpaceBuilder& builder, const std::vector<std::size_t>& parts,
                         std::unordered_map<std::size_t, std::vector<Outcome>>& outcomes,
                         const std::vector<Value>& current, std::vector<Value>& succ,
                         std::vector<std::int32_t>& writer, ComponentIndex owner,
                         const std::string& action)
    {
        std::vector<const std::vector<Outcome>*> lists;
        for (std::size_t ci : parts) lists.push_back(&outcomes.at(ci));
        std::vector<std::size_t> pos(lists.size(), 0);
        std::vector<Branch> weighted;
        std::vector<const Outcome*> chosen(lists.size());
        for (;;) {
            double p = 1.0;
            for (std::size_t j = 0; j < lists.size(); ++j) {
                chosen[j] = &(*lists[j])[pos[j]];
                p *= chosen[j]->probability;
            }
            apply(current, succ, writer, chosen, commands_[parts.front()].line);
            weighted.push_back({p, intern(succ)});
            std::size_t j = lists.size();
            bool done = true;
            while (j > 0) {
                --j;
                if (++pos[j] < lists[j]->size()) {
                    done = false;
                    break;
                }
                pos[j] = 0;
            }
            if (done) break;
        }
        builder.add_choice(action, owner, Distribution::from_weights(weighted));
    }

    const SymbolicModel& model_;
    ExploreOptions options_;
    Layout layout_;
    Scope scope_;
    std::vector<CompiledCommand> commands_;
    std::map<std::string, std::vector<ComponentIndex>> participants_;
    std::unordered_map<std::vector<Value>, StateIndex, ValuationHash> index_;
    std::vector<Value> store_;
    std::size_t count_ = 0;
};

} // namespace

StateSpace explore(const SymbolicModel& model, const ExploreOptions& options)
{
    Explorer e(model, options);
    return e.run();
}

std::vector<StateIndex> check_good_for_distribution(const StateSpace& space)
{
    std::vector<StateIndex> out;
    for (StateIndex s = 0; s < space.num_states(); ++s) {
        const auto choices = space.choices(s);
        if (choices.size() < 2) continue;
        const ComponentIndex owner = choices.front().owner;
        for (const Choice& c : choices) {
            if (c.owner != owner) {
                out.push_back(s);
                break;
            }
        }
    }
    return out;
}

} // namespace qmv::lang
