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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qmv/core/model.hpp"

namespace qmv::lang {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Int, Real, Bool, Name, Label, Unary, Binary, Ite, Call };

    Kind kind = Kind::Int;
    Value int_value = 0;
    double real_value = 0.0;
    bool bool_value = false;
    std::string name; ///< identifier, label name, operator or function name
    std::vector<ExprPtr> args;

    static ExprPtr integer(Value v);
    static ExprPtr real(double v);
    static ExprPtr boolean(bool v);
    static ExprPtr identifier(std::string n);
    static ExprPtr label(std::string n);
    static ExprPtr unary(std::string op, ExprPtr e);
    static ExprPtr binary(std::string op, ExprPtr l, ExprPtr r);
    static ExprPtr ite(ExprPtr c, ExprPtr a, ExprPtr b);
    static ExprPtr call(std::string fn, std::vector<ExprPtr> a);
};

bool equal(const ExprPtr& a, const ExprPtr& b);

enum class ConstType { Int, Real, Bool };

struct ConstantDecl {
    std::string name;
    ConstType type = ConstType::Int;
    ExprPtr value; ///< null when left open for an override
};

struct VariableDecl {
    std::string name;
    bool is_bool = false;
    ExprPtr lower; ///< null for booleans
    ExprPtr upper;
    ExprPtr init; ///< null: lower bound, or false
};

struct Assignment {
    std::string variable;
    ExprPtr value;
};

struct UpdateBranch {
    ExprPtr weight; ///< null: weight 1
    std::vector<Assignment> assignments;
};

struct Command {
    std::string action; ///< empty for internal commands
    ExprPtr rate;       ///< non-null for markovian commands
    ExprPtr guard;
    std::vector<UpdateBranch> branches;
    int line = 0;

    bool markovian() const { return rate != nullptr; }
};

struct ProcessDecl {
    std::string name;
    std::vector<VariableDecl> locals;
    std::optional<std::vector<std::string>> observes;
    std::vector<Command> commands;
};

struct LabelDecl {
    std::string name;
    ExprPtr expr;
};

struct SymbolicModel {
    ModelClass model_class = ModelClass::Dtmc;
    std::vector<ConstantDecl> constants;
    std::vector<std::string> actions;
    std::vector<VariableDecl> globals;
    std::vector<ProcessDecl> processes;
    std::vector<LabelDecl> labels;
};

/// Structural equality; source line numbers are ignored.
bool structurally_equal(const SymbolicModel& a, const SymbolicModel& b);

} // namespace qmv::lang
