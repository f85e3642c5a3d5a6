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

#include "qmv/lang/ast.hpp"

namespace qmv::lang {

namespace {

std::shared_ptr<Expr> make(Expr::Kind k)
{
    auto e = std::make_shared<Expr>();
    e->kind = k;
    return e;
}

} // namespace

ExprPtr Expr::integer(Value v)
{
    auto e = make(Kind::Int);
    e->int_value = v;
    return e;
}

ExprPtr Expr::real(double v)
{
    auto e = make(Kind::Real);
    e->real_value = v;
    return e;
}

ExprPtr Expr::boolean(bool v)
{
    auto e = make(Kind::Bool);
    e->bool_value = v;
    return e;
}

ExprPtr Expr::identifier(std::string n)
{
    auto e = make(Kind::Name);
    e->name = std::move(n);
    return e;
}

ExprPtr Expr::label(std::string n)
{
    auto e = make(Kind::Label);
    e->name = std::move(n);
    return e;
}

ExprPtr Expr::unary(std::string op, ExprPtr x)
{
    auto e = make(Kind::Unary);
    e->name = std::move(op);
    e->args.push_back(std::move(x));
    return e;
}

ExprPtr Expr::binary(std::string op, ExprPtr l, ExprPtr r)
{
    auto e = make(Kind::Binary);
    e->name = std::move(op);
    e->args.push_back(std::move(l));
    e->args.push_back(std::move(r));
    return e;
}

ExprPtr Expr::ite(ExprPtr c, ExprPtr a, ExprPtr b)
{
    auto e = make(Kind::Ite);
    e->args = {std::move(c), std::move(a), std::move(b)};
    return e;
}

ExprPtr Expr::call(std::string fn, std::vector<ExprPtr> a)
{
    auto e = make(Kind::Call);
    e->name = std::move(fn);
    e->args = std::move(a);
    return e;
}

bool equal(const ExprPtr& a, const ExprPtr& b)
{
    if (!a || !b) {
        return !a && !b;
    }
    if (a->kind != b->kind || a->name != b->name || a->args.size() != b->args.size()) {
        return false;
    }
    switch (a->kind) {
    case Expr::Kind::Int:
        if (a->int_value != b->int_value) return false;
        break;
    case Expr::Kind::Real:
        if (a->real_value != b->real_value) return false;
        break;
    case Expr::Kind::Bool:
        if (a->bool_value != b->bool_value) return false;
        break;
    default:
        break;
    }
    for (std::size_t i = 0; i < a->args.size(); ++i) {
        if (!equal(a->args[i], b->args[i])) {
            return false;
        }
    }
    return true;
}

namespace {

bool equal_vars(const std::vector<VariableDecl>& a, const std::vector<VariableDecl>& b)
{
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].name != b[i].name || a[i].is_bool != b[i].is_bool || !equal(a[i].lower, b[i].lower) ||
            !equal(a[i].upper, b[i].upper) || !equal(a[i].init, b[i].init)) {
            return false;
        }
    }
    return true;
}

bool equal_commands(const std::vector<Command>& a, const std::vector<Command>& b)
{
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Command& x = a[i];
        const Command& y = b[i];
        if (x.action != y.action || !equal(x.rate, y.rate) || !equal(x.guard, y.guard) ||
            x.branches.size() != y.branches.size()) {
            return false;
        }
        for (std::size_t j = 0; j < x.branches.size(); ++j) {
            const UpdateBranch& u = x.branches[j];
            const UpdateBranch& v = y.branches[j];
            if (!equal(u.weight, v.weight) || u.assignments.size() != v.assignments.size()) return false;
            for (std::size_t k = 0; k < u.assignments.size(); ++k) {
                if (u.assignments[k].variable != v.assignments[k].variable ||
                    !equal(u.assignments[k].value, v.assignments[k].value)) {
                    return false;
                }
            }
        }
    }
    return true;
}

} // namespace

bool structurally_equal(const SymbolicModel& a, const SymbolicModel& b)
{
    if (a.model_class != b.model_class || a.actions != b.actions || a.constants.size() != b.constants.size() ||
        a.processes.size() != b.processes.size() || a.labels.size() != b.labels.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.constants.size(); ++i) {
        if (a.constants[i].name != b.constants[i].name || a.constants[i].type != b.constants[i].type ||
            !equal(a.constants[i].value, b.constants[i].value)) {
            return false;
        }
    }
    if (!equal_vars(a.globals, b.globals)) return false;
    for (std::size_t i = 0; i < a.processes.size(); ++i) {
        const ProcessDecl& p = a.processes[i];
        const ProcessDecl& q = b.processes[i];
        if (p.name != q.name || p.observes != q.observes || !equal_vars(p.locals, q.locals) ||
            !equal_commands(p.commands, q.commands)) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
        if (a.labels[i].name != b.labels[i].name || !equal(a.labels[i].expr, b.labels[i].expr)) {
            return false;
        }
    }
    return true;
}

} // namespace qmv::lang
