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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qmv::cli {

inline constexpr const char* kVersion = "0.1.0";

struct ModelStats {
    std::string model_class;
    std::uint64_t states = 0;
    std::uint64_t choices = 0;
    std::uint64_t branches = 0;
    std::uint64_t rate_entries = 0;
    std::optional<double> explore_seconds;

    bool operator==(const ModelStats&) const = default;
};

struct DecisionEntry {
    std::uint64_t state = 0;
    std::string valuation;
    std::string action;

    bool operator==(const DecisionEntry&) const = default;
};

struct SchedulerEntry {
    std::uint32_t id = 0;
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;

    bool operator==(const SchedulerEntry&) const = default;
};

struct PropertyReport {
    std::string property;
    std::optional<double> value; ///< absent when infinite
    bool infinite = false;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    std::optional<std::uint64_t> iterations;
    std::optional<std::uint64_t> runs;
    std::optional<std::uint64_t> truncated_runs;
    std::optional<double> error_bound;
    std::optional<std::uint32_t> best_scheduler;
    std::vector<SchedulerEntry> schedulers;
    std::vector<DecisionEntry> decisions;
    std::vector<double> cdf;
    std::optional<double> wall_seconds;

    bool operator==(const PropertyReport&) const = default;
};

struct RunReport {
    std::string tool_version = kVersion;
    std::vector<std::string> command;
    std::optional<ModelStats> model;
    std::vector<PropertyReport> results;
    std::map<std::string, std::uint64_t> seeds;

    bool operator==(const RunReport&) const = default;
};

nlohmann::ordered_json to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::json& j);

/// Drops timing fields, which are the only nondeterministic part of a report.
nlohmann::json without_timing(nlohmann::json j);

/// Aligned human-readable rendering; not a stable format.
std::string to_text(const RunReport& r);

} // namespace qmv::cli
