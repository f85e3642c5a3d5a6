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

#include "qmv/lang/expr.hpp"

#include <cmath>
#include <set>

#include "qmv/lang/parser.hpp"

namespace qmv::lang {

const char* to_string(Type t)
{
    switch (t) {
    case Type::Int: return "int";
    case Type::Real: return "real";
    case Type::Bool: return "bool";
    }
    return "?";
}

namespace {

enum class Op {
    Const, Var, Neg, Not, Add, Sub, Mul, Div, Mod,
    Lt, Le, Gt, Ge, Eq, Ne, And, Or, Implies, Ite,
    Min, Max, Abs, Floor, Ceil, Pow,
};

} // namespace

struct CompiledExpr::Node {
    Op op = Op::Const;
    Type type = Type::Int;
    Scalar constant;
    VarIndex slot = 0;
    std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

using NodePtr = std::shared_ptr<const CompiledExpr::Node>;

bool numeric(Type t) { return t == Type::Int || t == Type::Real; }

Scalar eval_node(const CompiledExpr::Node& n, Valuation v);

Scalar arith(Op op, Type result, const Scalar& a, const Scalar& b)
{
    if (result == Type::Int) {
        switch (op) {
        case Op::Add: return Scalar::of_int(a.i + b.i);
        case Op::Sub: return Scalar::of_int(a.i - b.i);
        case Op::Mul: return Scalar::of_int(a.i * b.i);
        case Op::Mod:
            if (b.i == 0) throw ModelError("modulo by zero");
            return Scalar::of_int(((a.i % b.i) + b.i) % b.i);
        default: break;
        }
    }
    const double x = a.as_real();
    const double y = b.as_real();
    switch (op) {
    case Op::Add: return Scalar::of_real(x + y);
    case Op::Sub: return Scalar::of_real(x - y);
    case Op::Mul: return Scalar::of_real(x * y);
    case Op::Div:
        if (y == 0.0) throw ModelError("division by zero");
        return Scalar::of_real(x / y);
    case Op::Pow: return Scalar::of_real(std::pow(x, y));
    default: break;
    }
    throw ModelError("bad arithmetic operator");
}

bool compare(Op op, const Scalar& a, const Scalar& b)
{
    if (a.type != Type::Real && b.type != Type::Real) {
        switch (op) {
        case Op::Lt: return a.i < b.i;
        case Op::Le: return a.i <= b.i;
        case Op::Gt: return a.i > b.i;
        case Op::Ge: return a.i >= b.i;
        case Op::Eq: return a.i == b.i;
        case Op::Ne: return a.i != b.i;
        default: break;
        }
    }
    const double x = a.as_real();
    const double y = b.as_real();
    switch (op) {
    case Op::Lt: return x < y;
    case Op::Le: return x <= y;
    case Op::Gt: return x > y;
    case Op::Ge: return x >= y;
    case Op::Eq: return x == y;
    case Op::Ne: return x != y;
    default: break;
    }
    throw ModelError("bad comparison operator");
}

Scalar eval_node(const CompiledExpr::Node& n, Valuation v)
{
    switch (n.op) {
    case Op::Const: return n.constant;
    case Op::Var:
        return n.type == Type::Bool ? Scalar::of_bool(v[n.slot] != 0) : Scalar::of_int(v[n.slot]);
    case Op::Neg: {
        const Scalar a = eval_node(*n.kids[0], v);
        return a.type == Type::Int ? Scalar::of_int(-a.i) : Scalar::of_real(-a.r);
    }
    case Op::Not: return Scalar::of_bool(!eval_node(*n.kids[0], v).as_bool());
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Mod:
    case Op::Pow:
        return arith(n.op, n.type, eval_node(*n.kids[0], v), eval_node(*n.kids[1], v));
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::Eq:
    case Op::Ne:
        return Scalar::of_bool(compare(n.op, eval_node(*n.kids[0], v), eval_node(*n.kids[1], v)));
    case Op::And: return Scalar::of_bool(eval_node(*n.kids[0], v).as_bool() && eval_node(*n.kids[1], v).as_bool());
    case Op::Or: return Scalar::of_bool(eval_node(*n.kids[0], v).as_bool() || eval_node(*n.kids[1], v).as_bool());
    case Op::Implies:
        return Scalar::of_bool(!eval_node(*n.kids[0], v).as_bool() || eval_node(*n.kids[1], v).as_bool());
    case Op::Ite: {
        const Scalar r = eval_node(*n.kids[0], v).as_bool() ? eval_node(*n.kids[1], v) : eval_node(*n.kids[2], v);
        if (n.type == Type::Real && r.type != Type::Real) {
            return Scalar::of_real(r.as_real());
        }
        return r;
    }
    case Op::Min:
    case Op::Max: {
        Scalar best = eval_node(*n.kids[0], v);
        for (std::size_t k = 1; k < n.kids.size(); ++k) {
            const Scalar x = eval_node(*n.kids[k], v);
            const bool take = n.op == Op::Min ? compare(Op::Lt, x, best) : compare(Op::Gt, x, best);
            if (take) best = x;
        }
        return n.type == Type::Real ? Scalar::of_real(best.as_real()) : best;
    }
    case Op::Abs: {
        const Scalar a = eval_node(*n.kids[0], v);
        return a.type == Type::Int ? Scalar::of_int(a.i < 0 ? -a.i : a.i) : Scalar::of_real(std::abs(a.r));
    }
    case Op::Floor: return Scalar::of_int(static_cast<Value>(std::floor(eval_node(*n.kids[0], v).as_real())));
    case Op::Ceil: return Scalar::of_int(static_cast<Value>(std::ceil(eval_node(*n.kids[0], v).as_real())));
    }
    throw ModelError("bad expression node");
}

class Compiler {
public:
    explicit Compiler(const Scope& scope) : scope_(scope) {}

    NodePtr compile(const ExprPtr& e)
    {
        return build(e);
    }

private:
    [[noreturn]] void fail(const std::string& what, const ExprPtr& e)
    {
        throw SemanticError(what + " in expression '" + print(e) + "'");
    }

    static NodePtr constant(Scalar s)
    {
        auto n = std::make_shared<CompiledExpr::Node>();
        n->op = Op::Const;
        n->type = s.type;
        n->constant = s;
        return n;
    }

    static NodePtr fold(std::shared_ptr<CompiledExpr::Node> n)
    {
        if (n->op == Op::Const || n->op == Op::Var) {
            return n;
        }
        for (const auto& k : n->kids) {
            if (k->op != Op::Const) {
                return n;
            }
        }
        const Scalar s = eval_node(*n, {});
        return constant(s);
    }

    std::shared_ptr<CompiledExpr::Node> node(Op op, Type t, std::vector<NodePtr> kids)
    {
        auto n = std::make_shared<CompiledExpr::Node>();
        n->op = op;
        n->type = t;
        n->kids = std::move(kids);
        return n;
    }

    NodePtr build(const ExprPtr& e)
    {
        switch (e->kind) {
        case Expr::Kind::Int: return constant(Scalar::of_int(e->int_value));
        case Expr::Kind::Real: return constant(Scalar::of_real(e->real_value));
        case Expr::Kind::Bool: return constant(Scalar::of_bool(e->bool_value));
        case Expr::Kind::Name: {
            if (auto c = scope_.constants.find(e->name); c != scope_.constants.end()) {
                return constant(c->second);
            }
            if (auto v = scope_.variables.find(e->name); v != scope_.variables.end()) {
                auto n = node(Op::Var, v->second.second, {});
                n->slot = v->second.first;
                return n;
            }
            fail("undeclared name '" + e->name + "'", e);
        }
        case Expr::Kind::Label: {
            auto l = scope_.labels.find(e->name);
            if (l == scope_.labels.end()) {
                fail("undeclared label \"" + e->name + "\"", e);
            }
            if (!expanding_.insert(e->name).second) {
                fail("cyclic label \"" + e->name + "\"", e);
            }
            NodePtr body = compile(l->second);
            expanding_.erase(e->name);
            if (body->type != Type::Bool) {
                fail("label \"" + e->name + "\" is not boolean", e);
            }
            return body;
        }
        case Expr::Kind::Unary: {
            NodePtr a = compile(e->args[0]);
            if (e->name == "-") {
                if (!numeric(a->type)) fail("negation of non-number", e);
                return fold(node(Op::Neg, a->type, {a}));
            }
            if (a->type != Type::Bool) fail("'!' applied to non-boolean", e);
            return fold(node(Op::Not, Type::Bool, {a}));
        }
        case Expr::Kind::Binary: return binary(e);
        case Expr::Kind::Ite: {
            NodePtr c = compile(e->args[0]);
            NodePtr a = compile(e->args[1]);
            NodePtr b = compile(e->args[2]);
            if (c->type != Type::Bool) fail("condition is not boolean", e);
            Type t;
            if (a->type == b->type) {
                t = a->type;
            } else if (numeric(a->type) && numeric(b->type)) {
                t = Type::Real;
            } else {
                fail("branches of '?' have incompatible types", e);
            }
            return fold(node(Op::Ite, t, {c, a, b}));
        }
        case Expr::Kind::Call: return call(e);
        }
        fail("unknown expression", e);
    }

    NodePtr binary(const ExprPtr& e)
    {
        NodePtr a = compile(e->args[0]);
        NodePtr b = compile(e->args[1]);
        const std::string& op = e->name;
        auto need_numeric = [&] {
            if (!numeric(a->type) || !numeric(b->type)) fail("operator '" + op + "' needs numbers", e);
        };
        auto need_bool = [&] {
            if (a->type != Type::Bool || b->type != Type::Bool) fail("operator '" + op + "' needs booleans", e);
        };
        const Type widened = (a->type == Type::Int && b->type == Type::Int) ? Type::Int : Type::Real;
        Op o;
        Type t = Type::Bool;
        if (op == "+" || op == "-" || op == "*") {
            need_numeric();
            o = op == "+" ? Op::Add : op == "-" ? Op::Sub : Op::Mul;
            t = widened;
        } else if (op == "/") {
            need_numeric();
            o = Op::Div;
            t = Type::Real;
        } else if (op == "%") {
            if (a->type != Type::Int || b->type != Type::Int) fail("'%' needs integers", e);
            o = Op::Mod;
            t = Type::Int;
        } else if (op == "<" || op == "<=" || op == ">" || op == ">=") {
            need_numeric();
            o = op == "<" ? Op::Lt : op == "<=" ? Op::Le : op == ">" ? Op::Gt : Op::Ge;
        } else if (op == "=" || op == "!=") {
            if ((a->type == Type::Bool) != (b->type == Type::Bool)) fail("comparison of bool with number", e);
            o = op == "=" ? Op::Eq : Op::Ne;
        } else if (op == "&" || op == "|" || op == "=>") {
            need_bool();
            o = op == "&" ? Op::And : op == "|" ? Op::Or : Op::Implies;
        } else {
            fail("unknown operator '" + op + "'", e);
        }
        return fold(node(o, t, {a, b}));
    }

    NodePtr call(const ExprPtr& e)
    {
        std::vector<NodePtr> kids;
        bool all_int = true;
        for (const auto& a : e->args) {
            kids.push_back(compile(a));
            if (!numeric(kids.back()->type)) fail("function '" + e->name + "' needs numbers", e);
            all_int = all_int && kids.back()->type == Type::Int;
        }
        const std::string& f = e->name;
        auto arity = [&](std::size_t n) {
            if (kids.size() != n) fail("function '" + f + "' takes " + std::to_string(n) + " argument(s)", e);
        };
        if (f == "min" || f == "max") {
            if (kids.empty()) fail("function '" + f + "' needs arguments", e);
            return fold(node(f == "min" ? Op::Min : Op::Max, all_int ? Type::Int : Type::Real, std::move(kids)));
        }
        if (f == "abs") {
            arity(1);
            return fold(node(Op::Abs, kids[0]->type, std::move(kids)));
        }
        if (f == "floor" || f == "ceil") {
            arity(1);
            return fold(node(f == "floor" ? Op::Floor : Op::Ceil, Type::Int, std::move(kids)));
        }
        if (f == "pow") {
            arity(2);
            return fold(node(Op::Pow, Type::Real, std::move(kids)));
        }
        fail("unknown function '" + f + "'", e);
    }

    const Scope& scope_;
    std::set<std::string> expanding_;
};

} // namespace

CompiledExpr CompiledExpr::compile(const ExprPtr& e, const Scope& scope)
{
    if (!e) {
        throw SemanticError("missing expression");
    }
    Compiler c(scope);
    CompiledExpr out;
    out.root_ = c.compile(e);
    return out;
}

Scalar CompiledExpr::eval(Valuation v) const { return eval_node(*root_, v); }

Type CompiledExpr::type() const { return root_->type; }

Scope constant_scope(const SymbolicModel& model)
{
    Scope scope;
    for (const ConstantDecl& c : model.constants) {
        if (!c.value) {
            throw SemanticError("constant '" + c.name + "' has no value");
        }
        const Scalar v = CompiledExpr::compile(c.value, scope).eval({});
        Scalar stored;
        switch (c.type) {
        case ConstType::Bool:
            if (v.type != Type::Bool) throw SemanticError("constant '" + c.name + "' must be boolean");
            stored = v;
            break;
        case ConstType::Int:
            if (v.type == Type::Bool) throw SemanticError("constant '" + c.name + "' must be an integer");
            if (v.type == Type::Real) {
                if (v.r != std::floor(v.r)) throw SemanticError("constant '" + c.name + "' must be an integer");
                stored = Scalar::of_int(static_cast<Value>(v.r));
            } else {
                stored = v;
            }
            break;
        case ConstType::Real:
            if (v.type == Type::Bool) throw SemanticError("constant '" + c.name + "' must be a number");
            stored = Scalar::of_real(v.as_real());
            break;
        }
        scope.constants[c.name] = stored;
    }
    return scope;
}

void collect_names(const ExprPtr& e, std::vector<std::string>& out)
{
    if (!e) return;
    if (e->kind == Expr::Kind::Name) {
        out.push_back(e->name);
    }
    for (const auto& a : e->args) {
        collect_names(a, out);
    }
}

} // namespace qmv::lang
