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

#include <iosfwd>
#include <string>
#include <vector>

namespace qmv::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 1,      ///< parse, semantic or parameter error
    kStateCap = 2,        ///< exploration hit the state cap
    kSolverError = 3,     ///< numeric or simulation failure
    kNotDistributed = 4,  ///< distributed LSS on a model that is not good for distribution
};

/// Runs `qmv` with `args` (args[0] is the program name). Results go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qmv::cli
