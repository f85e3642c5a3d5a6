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

#include "qmv/lang/property.hpp"

#include <cctype>
#include <cmath>

#include "qmv/lang/explore.hpp"
#include "qmv/lang/parser.hpp"

namespace qmv::lang {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool consume(std::string_view& s, std::string_view token)
{
    s = trim(s);
    if (s.substr(0, token.size()) == token) {
        s.remove_prefix(token.size());
        return true;
    }
    return false;
}

[[noreturn]] void bad(std::string_view text, const std::string& why)
{
    throw ParseError("property '" + std::string(text) + "': " + why, 1, 1);
}

} // namespace

Property parse_property(std::string_view text, const SymbolicModel& model)
{
    Property p;
    p.text = std::string(trim(text));
    std::string_view s = p.text;
    bool time_query = false;
    if (consume(s, "Pmax")) {
        p.direction = Direction::Max;
    } else if (consume(s, "Pmin")) {
        p.direction = Direction::Min;
    } else if (consume(s, "Tmax")) {
        p.direction = Direction::Max;
        time_query = true;
    } else if (consume(s, "Tmin")) {
        p.direction = Direction::Min;
        time_query = true;
    } else {
        bad(text, "expected Pmax, Pmin, Tmax or Tmin");
    }
    if (!consume(s, "=") || !consume(s, "?") || !consume(s, "[")) bad(text, "expected '=? ['");
    if (!consume(s, "F")) bad(text, "expected 'F'");
    s = trim(s);
    if (s.empty() || s.back() != ']') bad(text, "missing closing ']'");
    s.remove_suffix(1);

    const bool bounded = consume(s, "<=");
    ExprPtr bound_expr;
    if (bounded) {
        if (time_query) bad(text, "expected-time queries take no bound");
        // The bound is the shortest whitespace-terminated prefix that is a constant expression.
        s = trim(s);
        std::size_t split = 0;
        for (std::size_t i = 1; i <= s.size(); ++i) {
            if (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) continue;
            try {
                bound_expr = parse_expression(s.substr(0, i));
                CompiledExpr::compile(bound_expr, constant_scope(model));
                split = i;
                break;
            } catch (const ModelError&) {
                bound_expr.reset();
            }
        }
        if (!bound_expr) bad(text, "bound must be a constant expression followed by whitespace");
        s.remove_prefix(split);
    }
    p.target = compile_predicate(trim(s), model);

    if (time_query) {
        p.kind = PropertyKind::ExpectedTime;
    } else if (!bounded) {
        p.kind = PropertyKind::ReachProb;
    } else {
        const Scalar b = CompiledExpr::compile(bound_expr, constant_scope(model)).eval({});
        if (b.type == Type::Bool || b.as_real() < 0.0) bad(text, "bound must be a nonnegative number");
        if (model.model_class == ModelClass::Ma) {
            p.kind = PropertyKind::TimeBoundedReachProb;
            p.time_bound = b.as_real();
        } else {
            if (b.as_real() != std::floor(b.as_real())) bad(text, "step bound must be an integer");
            p.kind = PropertyKind::StepBoundedReachProb;
            p.step_bound = static_cast<std::uint64_t>(b.as_real());
        }
    }
    check_compatible(p, model.model_class);
    return p;
}

std::vector<std::string> split_properties(std::string_view text)
{
    std::vector<std::string> out;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const std::size_t c = line.find("//"); c != std::string_view::npos) line = line.substr(0, c);
        line = trim(line);
        if (!line.empty()) out.emplace_back(line);
    }
    return out;
}

} // namespace qmv::lang
