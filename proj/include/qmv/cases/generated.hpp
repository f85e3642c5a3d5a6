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

#include <stdexcept>
#include <string>

namespace qmv::cases {

/// Output of a generator: `<name>.gcm` and `<name>.props`.
struct GeneratedCase {
    std::string name;
    std::string model;
    std::string properties; ///< one property per line
};

class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Writes both files into `dir`; returns the model path.
std::string write_case(const GeneratedCase& c, const std::string& dir);

} // namespace qmv::cases
