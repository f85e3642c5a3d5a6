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

#include "qmv/lang/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "qmv/lang/explore.hpp"
#include "qmv/lang/expr.hpp"

namespace qmv::lang {

ParseError::ParseError(const std::string& message, int line, int column)
    : ModelError(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line), column_(column)
{
}

namespace {

enum class Tok { Ident, Int, Real, String, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Value int_value = 0;
    double real_value = 0.0;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t;
            t.line = line_;
            t.column = col_;
            if (pos_ >= src_.size()) {
                t.kind = Tok::End;
                out.push_back(t);
                return out;
            }
            const char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                const std::size_t start = pos_;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                    advance();
                }
                t.kind = Tok::Ident;
                t.text = std::string(src_.substr(start, pos_ - start));
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                lex_number(t);
            } else if (c == '"') {
                advance();
                const std::size_t start = pos_;
                while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
                    advance();
                }
                if (pos_ >= src_.size() || src_[pos_] != '"') {
                    throw ParseError("unterminated string", t.line, t.column);
                }
                t.kind = Tok::String;
                t.text = std::string(src_.substr(start, pos_ - start));
                advance();
            } else {
                static const char* const two[] = {"..", "<=", ">=", "!=", "->", "=>"};
                t.kind = Tok::Punct;
                for (const char* p : two) {
                    if (src_.substr(pos_, 2) == p) {
                        t.text = p;
                        advance();
                        advance();
                        break;
                    }
                }
                if (t.text.empty()) {
                    if (std::string_view("[](){};:,'=<>&|!+-*/%?").find(c) == std::string_view::npos) {
                        throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.column);
                    }
                    t.text = std::string(1, c);
                    advance();
                }
            }
            out.push_back(std::move(t));
        }
    }

private:
    void advance()
    {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space()
    {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (src_.substr(pos_, 2) == "//") {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (src_.substr(pos_, 2) == "/*") {
                const int l = line_, cl = col_;
                advance();
                advance();
                while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/") advance();
                if (pos_ >= src_.size()) throw ParseError("unterminated comment", l, cl);
                advance();
                advance();
            } else {
                break;
            }
        }
    }

    void lex_number(Token& t)
    {
        const std::size_t start = pos_;
        bool real = false;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
            real = true;
            advance();
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                real = true;
                while (pos_ < look) advance();
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        t.text = text;
        if (real) {
            t.kind = Tok::Real;
            t.real_value = std::strtod(text.c_str(), nullptr);
        } else {
            t.kind = Tok::Int;
            auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), t.int_value);
            if (ec != std::errc()) throw ParseError("integer literal out of range", t.line, t.column);
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

    SymbolicModel model()
    {
        SymbolicModel m;
        const Token& head = expect_ident();
        if (head.text == "dtmc") {
            m.model_class = ModelClass::Dtmc;
        } else if (head.text == "mdp") {
            m.model_class = ModelClass::Mdp;
        } else if (head.text == "ma") {
            m.model_class = ModelClass::Ma;
        } else {
            fail_at(head, "expected model class 'dtmc', 'mdp' or 'ma'");
        }
        while (peek().kind != Tok::End) {
            const Token& t = peek();
            if (is_word("const")) {
                m.constants.push_back(constant());
            } else if (is_word("action")) {
                next();
                do {
                    m.actions.push_back(expect_ident().text);
                } while (accept(","));
                expect(";");
            } else if (is_word("global")) {
                next();
                m.globals.push_back(variable());
            } else if (is_word("module")) {
                m.processes.push_back(process(m.model_class));
            } else if (is_word("label")) {
                next();
                LabelDecl l;
                l.name = expect(Tok::String, "label name").text;
                expect("=");
                l.expr = expression();
                expect(";");
                m.labels.push_back(std::move(l));
            } else {
                fail_at(t, "unexpected '" + t.text + "'");
            }
        }
        return m;
    }

    ExprPtr standalone_expression()
    {
        ExprPtr e = expression();
        if (peek().kind != Tok::End) fail_at(peek(), "trailing input after expression");
        return e;
    }

    ExprPtr expression() { return ternary(); }

private:
    const Token& peek(std::size_t ahead = 0) const
    {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    bool is_punct(std::string_view p, std::size_t ahead = 0) const
    {
        return peek(ahead).kind == Tok::Punct && peek(ahead).text == p;
    }
    bool is_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }

    bool accept(std::string_view p)
    {
        if (is_punct(p)) {
            next();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail_at(const Token& t, const std::string& what)
    {
        throw ParseError(what, t.line, t.column);
    }

    void expect(std::string_view p)
    {
        if (!accept(p)) {
            const Token& t = peek();
            fail_at(t, "expected '" + std::string(p) + "' but found '" + (t.kind == Tok::End ? "end of input" : t.text) + "'");
        }
    }

    const Token& expect(Tok kind, const char* what)
    {
        if (peek().kind != kind) fail_at(peek(), std::string("expected ") + what);
        return next();
    }

    const Token& expect_ident() { return expect(Tok::Ident, "identifier"); }

    void expect_word(std::string_view w)
    {
        if (!is_word(w)) fail_at(peek(), "expected '" + std::string(w) + "'");
        next();
    }

    ConstantDecl constant()
    {
        next();
        ConstantDecl c;
        if (is_word("int")) {
            next();
        } else if (is_word("bool")) {
            c.type = ConstType::Bool;
            next();
        } else if (is_word("double") || is_word("real")) {
            c.type = ConstType::Real;
            next();
        }
        c.name = expect_ident().text;
        if (accept("=")) {
            c.value = expression();
        }
        expect(";");
        return c;
    }

    VariableDecl variable()
    {
        VariableDecl v;
        v.name = expect_ident().text;
        expect(":");
        if (is_word("bool")) {
            next();
            v.is_bool = true;
        } else {
            expect("[");
            v.lower = expression();
            expect("..");
            v.upper = expression();
            expect("]");
        }
        if (is_word("init")) {
            next();
            v.init = expression();
        }
        expect(";");
        return v;
    }

    ProcessDecl process(ModelClass cls)
    {
        next();
        ProcessDecl p;
        p.name = expect_ident().text;
        while (!is_word("endmodule")) {
            const Token& t = peek();
            if (t.kind == Tok::End) fail_at(t, "missing 'endmodule'");
            if (is_word("observes")) {
                next();
                std::vector<std::string> names;
                if (!is_punct(";")) {
                    do {
                        names.push_back(expect_ident().text);
                    } while (accept(","));
                }
                expect(";");
                if (p.observes) fail_at(t, "duplicate 'observes' clause");
                p.observes = std::move(names);
            } else if (is_punct("[")) {
                p.commands.push_back(command(false, cls));
            } else if (is_word("rate") && is_punct("(", 1)) {
                p.commands.push_back(command(true, cls));
            } else if (t.kind == Tok::Ident && is_punct(":", 1)) {
                p.locals.push_back(variable());
            } else {
                fail_at(t, "expected variable, command, 'observes' or 'endmodule'");
            }
        }
        next();
        return p;
    }

    Command command(bool markovian, ModelClass cls)
    {
        Command c;
        c.line = peek().line;
        if (markovian) {
            const Token& at = next();
            if (cls != ModelClass::Ma) {
                throw SemanticError(std::to_string(at.line) + ":" + std::to_string(at.column) +
                                    ": markovian 'rate' command in a " + to_string(cls) + " model");
            }
            expect("(");
            c.rate = expression();
            expect(")");
        } else {
            expect("[");
            if (peek().kind == Tok::Ident) c.action = next().text;
            expect("]");
        }
        c.guard = expression();
        expect("->");
        do {
            c.branches.push_back(branch());
        } while (accept("+"));
        expect(";");
        return c;
    }

    bool assignment_ahead() const
    {
        return is_punct("(") && peek(1).kind == Tok::Ident && is_punct("'", 2);
    }

    UpdateBranch branch()
    {
        UpdateBranch b;
        const bool bare_true = is_word("true") && (is_punct(";", 1) || is_punct("+", 1));
        if (!bare_true && !assignment_ahead()) {
            b.weight = expression();
            expect(":");
        }
        if (is_word("true")) {
            next();
            return b;
        }
        do {
            if (!assignment_ahead()) fail_at(peek(), "expected assignment (x'=e)");
            next();
            Assignment a;
            a.variable = next().text;
            expect("'");
            expect("=");
            a.value = expression();
            expect(")");
            b.assignments.push_back(std::move(a));
        } while (accept("&"));
        return b;
    }

    ExprPtr ternary()
    {
        ExprPtr c = implication();
        if (accept("?")) {
            ExprPtr a = ternary();
            expect(":");
            ExprPtr b = ternary();
            return Expr::ite(c, a, b);
        }
        return c;
    }

    ExprPtr implication()
    {
        ExprPtr l = disjunction();
        if (accept("=>")) {
            return Expr::binary("=>", l, implication());
        }
        return l;
    }

    ExprPtr disjunction()
    {
        ExprPtr l = conjunction();
        while (accept("|")) l = Expr::binary("|", l, conjunction());
        return l;
    }

    ExprPtr conjunction()
    {
        ExprPtr l = equality();
        while (accept("&")) l = Expr::binary("&", l, equality());
        return l;
    }

    ExprPtr equality()
    {
        ExprPtr l = relational();
        for (;;) {
            if (accept("=")) {
                l = Expr::binary("=", l, relational());
            } else if (accept("!=")) {
                l = Expr::binary("!=", l, relational());
            } else {
                return l;
            }
        }
    }

    ExprPtr relational()
    {
        ExprPtr l = additive();
        for (const char* op : {"<=", ">=", "<", ">"}) {
            if (accept(op)) return Expr::binary(op, l, additive());
        }
        return l;
    }

    ExprPtr additive()
    {
        ExprPtr l = multiplicative();
        for (;;) {
            if (accept("+")) {
                l = Expr::binary("+", l, multiplicative());
            } else if (accept("-")) {
                l = Expr::binary("-", l, multiplicative());
            } else {
                return l;
            }
        }
    }

    ExprPtr multiplicative()
    {
        ExprPtr l = unary();
        for (;;) {
            if (accept("*")) {
                l = Expr::binary("*", l, unary());
            } else if (accept("/")) {
                l = Expr::binary("/", l, unary());
            } else if (accept("%")) {
                l = Expr::binary("%", l, unary());
            } else {
                return l;
            }
        }
    }

    ExprPtr unary()
    {
        if (accept("-")) {
            ExprPtr e = unary();
            if (e->kind == Expr::Kind::Int) return Expr::integer(-e->int_value);
            if (e->kind == Expr::Kind::Real) return Expr::real(-e->real_value);
            return Expr::unary("-", e);
        }
        if (accept("!")) return Expr::unary("!", unary());
        return primary();
    }

    ExprPtr primary()
    {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Int: next(); return Expr::integer(t.int_value);
        case Tok::Real: next(); return Expr::real(t.real_value);
        case Tok::String: next(); return Expr::label(t.text);
        case Tok::Ident: {
            next();
            if (t.text == "true" || t.text == "false") return Expr::boolean(t.text == "true");
            if (accept("(")) {
                std::vector<ExprPtr> args;
                if (!is_punct(")")) {
                    do {
                        args.push_back(expression());
                    } while (accept(","));
                }
                expect(")");
                return Expr::call(t.text, std::move(args));
            }
            return Expr::identifier(t.text);
        }
        case Tok::Punct:
            if (accept("(")) {
                ExprPtr e = expression();
                expect(")");
                return e;
            }
            break;
        case Tok::End:
            fail_at(t, "unexpected end of input");
        }
        fail_at(t, "unexpected '" + t.text + "' in expression");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::string format_real(double v)
{
    if (!std::isfinite(v)) throw ModelError("cannot print a non-finite literal");
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, p);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

void print_expr(std::ostream& os, const ExprPtr& e)
{
    switch (e->kind) {
    case Expr::Kind::Int: os << e->int_value; return;
    case Expr::Kind::Real: os << format_real(e->real_value); return;
    case Expr::Kind::Bool: os << (e->bool_value ? "true" : "false"); return;
    case Expr::Kind::Name: os << e->name; return;
    case Expr::Kind::Label: os << '"' << e->name << '"'; return;
    case Expr::Kind::Unary:
        os << '(' << e->name;
        print_expr(os, e->args[0]);
        os << ')';
        return;
    case Expr::Kind::Binary:
        os << '(';
        print_expr(os, e->args[0]);
        os << ' ' << e->name << ' ';
        print_expr(os, e->args[1]);
        os << ')';
        return;
    case Expr::Kind::Ite:
        os << '(';
        print_expr(os, e->args[0]);
        os << " ? ";
        print_expr(os, e->args[1]);
        os << " : ";
        print_expr(os, e->args[2]);
        os << ')';
        return;
    case Expr::Kind::Call:
        os << e->name << '(';
        for (std::size_t i = 0; i < e->args.size(); ++i) {
            if (i > 0) os << ", ";
            print_expr(os, e->args[i]);
        }
        os << ')';
        return;
    }
}

void print_variable(std::ostream& os, const VariableDecl& v)
{
    os << v.name << " : ";
    if (v.is_bool) {
        os << "bool";
    } else {
        os << '[';
        print_expr(os, v.lower);
        os << "..";
        print_expr(os, v.upper);
        os << ']';
    }
    if (v.init) {
        os << " init ";
        print_expr(os, v.init);
    }
    os << ";\n";
}

void print_command(std::ostream& os, const Command& c)
{
    if (c.markovian()) {
        os << "rate(";
        print_expr(os, c.rate);
        os << ") ";
    } else {
        os << '[' << c.action << "] ";
    }
    print_expr(os, c.guard);
    os << " -> ";
    for (std::size_t i = 0; i < c.branches.size(); ++i) {
        const UpdateBranch& b = c.branches[i];
        if (i > 0) os << " + ";
        if (b.weight) {
            print_expr(os, b.weight);
            os << " : ";
        }
        if (b.assignments.empty()) {
            os << "true";
        }
        for (std::size_t k = 0; k < b.assignments.size(); ++k) {
            if (k > 0) os << " & ";
            os << '(' << b.assignments[k].variable << "'=";
            print_expr(os, b.assignments[k].value);
            os << ')';
        }
    }
    os << ";\n";
}

} // namespace

SymbolicModel parse(std::string_view text, const ConstantOverrides& overrides)
{
    Parser p(text);
    SymbolicModel m = p.model();
    for (const auto& [name, value] : overrides) {
        bool found = false;
        for (ConstantDecl& c : m.constants) {
            if (c.name == name) {
                c.value = parse_expression(value);
                found = true;
            }
        }
        if (!found) throw SemanticError("override for undeclared constant '" + name + "'");
    }
    check(m);
    return m;
}

ExprPtr parse_expression(std::string_view text)
{
    Parser p(text);
    return p.standalone_expression();
}

std::string print(const ExprPtr& e)
{
    std::ostringstream os;
    print_expr(os, e);
    return os.str();
}

std::string print(const SymbolicModel& m)
{
    std::ostringstream os;
    os << to_string(m.model_class) << "\n\n";
    for (const ConstantDecl& c : m.constants) {
        os << "const " << (c.type == ConstType::Int ? "int" : c.type == ConstType::Bool ? "bool" : "double") << ' '
           << c.name;
        if (c.value) {
            os << " = ";
            print_expr(os, c.value);
        }
        os << ";\n";
    }
    if (!m.actions.empty()) {
        os << "action ";
        for (std::size_t i = 0; i < m.actions.size(); ++i) {
            os << (i > 0 ? ", " : "") << m.actions[i];
        }
        os << ";\n";
    }
    for (const VariableDecl& v : m.globals) {
        os << "global ";
        print_variable(os, v);
    }
    for (const ProcessDecl& p : m.processes) {
        os << "\nmodule " << p.name << '\n';
        if (p.observes) {
            os << "  observes";
            for (std::size_t i = 0; i < p.observes->size(); ++i) {
                os << (i > 0 ? ", " : " ") << (*p.observes)[i];
            }
            os << ";\n";
        }
        for (const VariableDecl& v : p.locals) {
            os << "  ";
            print_variable(os, v);
        }
        for (const Command& c : p.commands) {
            os << "  ";
            print_command(os, c);
        }
        os << "endmodule\n";
    }
    if (!m.labels.empty()) os << '\n';
    for (const LabelDecl& l : m.labels) {
        os << "label \"" << l.name << "\" = ";
        print_expr(os, l.expr);
        os << ";\n";
    }
    return os.str();
}

void check(const SymbolicModel& m)
{
    std::set<std::string> names;
    auto declare = [&](const std::string& n, const char* what) {
        if (!names.insert(n).second) throw SemanticError(std::string("duplicate ") + what + " name '" + n + "'");
    };
    for (const ConstantDecl& c : m.constants) declare(c.name, "constant");
    for (const VariableDecl& v : m.globals) declare(v.name, "variable");
    std::set<std::string> process_names;
    for (const ProcessDecl& p : m.processes) {
        if (!process_names.insert(p.name).second) throw SemanticError("duplicate module name '" + p.name + "'");
        for (const VariableDecl& v : p.locals) declare(v.name, "variable");
    }
    std::set<std::string> label_names;
    for (const LabelDecl& l : m.labels) {
        if (!label_names.insert(l.name).second) throw SemanticError("duplicate label \"" + l.name + "\"");
    }
    if (m.processes.empty()) throw SemanticError("model declares no module");

    // Bounds, initial values and observer sets are checked while building the layout.
    const Layout layout = make_layout(m);
    const Scope scope = full_scope(m);

    for (const LabelDecl& l : m.labels) {
        if (CompiledExpr::compile(l.expr, scope).type() != Type::Bool) {
            throw SemanticError("label \"" + l.name + "\" is not boolean");
        }
    }

    for (std::size_t pi = 0; pi < m.processes.size(); ++pi) {
        const ProcessDecl& p = m.processes[pi];
        for (const Command& c : p.commands) {
            const std::string where = "module " + p.name + ", line " + std::to_string(c.line);
            if (c.markovian() && m.model_class != ModelClass::Ma) {
                throw SemanticError(where + ": markovian command in a " + to_string(m.model_class) + " model");
            }
            if (CompiledExpr::compile(c.guard, scope).type() != Type::Bool) {
                throw SemanticError(where + ": guard is not boolean");
            }
            if (c.rate && CompiledExpr::compile(c.rate, scope).type() == Type::Bool) {
                throw SemanticError(where + ": rate is not a number");
            }
            for (const UpdateBranch& b : c.branches) {
                if (b.weight && CompiledExpr::compile(b.weight, scope).type() == Type::Bool) {
                    throw SemanticError(where + ": weight is not a number");
                }
                std::set<std::string> written;
                for (const Assignment& a : b.assignments) {
                    auto it = std::find_if(layout.variables.begin(), layout.variables.end(),
                                           [&](const VariableInfo& v) { return v.name == a.variable; });
                    if (it == layout.variables.end()) {
                        throw SemanticError(where + ": assignment to undeclared variable '" + a.variable + "'");
                    }
                    if (it->owner != kGlobal && it->owner != pi) {
                        throw SemanticError(where + ": variable '" + a.variable + "' belongs to another module");
                    }
                    if (!written.insert(a.variable).second) {
                        throw SemanticError(where + ": variable '" + a.variable + "' assigned twice");
                    }
                    const Type t = CompiledExpr::compile(a.value, scope).type();
                    if (it->is_bool != (t == Type::Bool)) {
                        throw SemanticError(where + ": type mismatch in assignment to '" + a.variable + "'");
                    }
                }
            }
        }
    }
}

} // namespace qmv::lang
