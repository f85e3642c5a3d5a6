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
#include <string>
#include <string_view>

#include "qmv/lang/ast.hpp"

namespace qmv::lang {

class ParseError : public ModelError {
public:
    ParseError(const std::string& message, int line, int column);

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

class SemanticError : public ModelError {
public:
    using ModelError::ModelError;
};

/// Constant overrides: name -> literal text ("0.2", "6", "true").
using ConstantOverrides = std::map<std::string, std::string>;

/// Parses a `.gcm` model and runs the semantic checks.
SymbolicModel parse(std::string_view text, const ConstantOverrides& overrides = {});

/// Parses a standalone expression (no semantic checks).
ExprPtr parse_expression(std::string_view text);

/// Canonical source form; parse(print(m)) is structurally equal to m.
std::string print(const SymbolicModel& model);
std::string print(const ExprPtr& e);

/// Semantic checks only; throws SemanticError.
void check(const SymbolicModel& model);

} // namespace qmv::lang
