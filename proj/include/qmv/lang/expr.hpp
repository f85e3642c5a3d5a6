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

#include <map>
#include <memory>
#include <string>

#include "qmv/lang/ast.hpp"

namespace qmv::lang {

enum class Type { Int, Real, Bool };

const char* to_string(Type t);

struct Scalar {
    Type type = Type::Int;
    Value i = 0; ///< int and bool payload
    double r = 0.0;

    static Scalar of_int(Value v) { return {Type::Int, v, 0.0}; }
    static Scalar of_real(double v) { return {Type::Real, 0, v}; }
    static Scalar of_bool(bool v) { return {Type::Bool, v ? 1 : 0, 0.0}; }

    double as_real() const { return type == Type::Real ? r : static_cast<double>(i); }
    bool as_bool() const { return i != 0; }
};

/// Names visible to an expression: constants fold, variables resolve to layout slots.
struct Scope {
    std::map<std::string, Scalar> constants;
    std::map<std::string, std::pair<VarIndex, Type>> variables;
    std::map<std::string, ExprPtr> labels;
};

/// Expression compiled against a scope; evaluates over a valuation.
class CompiledExpr {
public:
    CompiledExpr() = default;

    /// Throws SemanticError on unknown names or type errors.
    static CompiledExpr compile(const ExprPtr& e, const Scope& scope);

    Scalar eval(Valuation v) const;
    Type type() const;
    bool valid() const { return root_ != nullptr; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
};

/// Evaluates the constant declarations in order, applying the model's defaults.
Scope constant_scope(const SymbolicModel& model);

/// Collects every identifier an expression references (labels are not expanded).
void collect_names(const ExprPtr& e, std::vector<std::string>& out);

} // namespace qmv::lang
