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

#include <string>
#include <string_view>
#include <vector>

#include "qmv/cases/generated.hpp"

namespace qmv::cases {

struct Contact {
    std::string from;
    std::string to;
    int slot = 1;
    double p = 1.0;
};

struct ContactPlan {
    std::vector<std::string> nodes;
    int slots = 0;
    std::vector<Contact> contacts;
    std::string source;
    std::string target;
    int copies = 1;
};

/// Throws ParameterError on a violated invariant.
void validate(const ContactPlan& plan);

/// JSON plan; throws ParameterError on malformed input or invalid plans.
ContactPlan parse_contact_plan(std::string_view json);
std::string to_json(const ContactPlan& plan);

/// Copy-routing MDP. Contacts run one per epoch in slot order (input order within a
/// slot); at each contact the sender chooses how many copies to transmit, and all of
/// them arrive with probability p or are lost together.
GeneratedCase gen_contact_mdp(const ContactPlan& plan);

/// Name of the global copy counter of `node`.
std::string counter_name(std::string_view node);

} // namespace qmv::cases
