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

#include "qmv/cli/report.hpp"

#include <iomanip>
#include <sstream>

namespace qmv::cli {

namespace {

template <class T, class J>
void put(J& j, const char* key, const std::optional<T>& v)
{
    if (v) j[key] = *v;
}

template <class T>
void get(const nlohmann::json& j, const char* key, std::optional<T>& v)
{
    if (j.contains(key)) v = j.at(key).get<T>();
}

std::string number(double x)
{
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

} // namespace

nlohmann::ordered_json to_json(const RunReport& r)
{
    nlohmann::ordered_json j;
    j["tool_version"] = r.tool_version;
    j["command"] = r.command;
    if (r.model) {
        nlohmann::ordered_json m;
        m["class"] = r.model->model_class;
        m["states"] = r.model->states;
        m["choices"] = r.model->choices;
        m["branches"] = r.model->branches;
        m["rate_entries"] = r.model->rate_entries;
        put(m, "explore_seconds", r.model->explore_seconds);
        j["model"] = std::move(m);
    }
    j["results"] = nlohmann::ordered_json::array();
    for (const PropertyReport& p : r.results) {
        nlohmann::ordered_json o;
        o["property"] = p.property;
        if (p.infinite) o["value"] = "inf";
        else put(o, "value", p.value);
        put(o, "ci_low", p.ci_low);
        put(o, "ci_high", p.ci_high);
        put(o, "iterations", p.iterations);
        put(o, "runs", p.runs);
        put(o, "truncated_runs", p.truncated_runs);
        put(o, "error_bound", p.error_bound);
        put(o, "best_scheduler", p.best_scheduler);
        if (!p.schedulers.empty()) {
            auto& t = o["schedulers"] = nlohmann::ordered_json::array();
            for (const SchedulerEntry& e : p.schedulers) {
                t.push_back({{"id", e.id}, {"mean", e.mean}, {"ci_low", e.ci_low}, {"ci_high", e.ci_high}});
            }
        }
        if (!p.decisions.empty()) {
            auto& t = o["decisions"] = nlohmann::ordered_json::array();
            for (const DecisionEntry& d : p.decisions) {
                t.push_back({{"state", d.state}, {"valuation", d.valuation}, {"action", d.action}});
            }
        }
        if (!p.cdf.empty()) o["cdf"] = p.cdf;
        put(o, "wall_seconds", p.wall_seconds);
        j["results"].push_back(std::move(o));
    }
    j["seeds"] = r.seeds;
    return j;
}

RunReport report_from_json(const nlohmann::json& j)
{
    RunReport r;
    j.at("tool_version").get_to(r.tool_version);
    j.at("command").get_to(r.command);
    if (j.contains("model")) {
        const auto& m = j.at("model");
        ModelStats s;
        m.at("class").get_to(s.model_class);
        m.at("states").get_to(s.states);
        m.at("choices").get_to(s.choices);
        m.at("branches").get_to(s.branches);
        m.at("rate_entries").get_to(s.rate_entries);
        get(m, "explore_seconds", s.explore_seconds);
        r.model = s;
    }
    for (const auto& o : j.at("results")) {
        PropertyReport p;
        o.at("property").get_to(p.property);
        if (o.contains("value")) {
            if (o.at("value").is_string()) p.infinite = true;
            else p.value = o.at("value").get<double>();
        }
        get(o, "ci_low", p.ci_low);
        get(o, "ci_high", p.ci_high);
        get(o, "iterations", p.iterations);
        get(o, "runs", p.runs);
        get(o, "truncated_runs", p.truncated_runs);
        get(o, "error_bound", p.error_bound);
        get(o, "best_scheduler", p.best_scheduler);
        if (o.contains("schedulers")) {
            for (const auto& e : o.at("schedulers")) {
                p.schedulers.push_back({e.at("id").get<std::uint32_t>(), e.at("mean").get<double>(),
                                        e.at("ci_low").get<double>(), e.at("ci_high").get<double>()});
            }
        }
        if (o.contains("decisions")) {
            for (const auto& d : o.at("decisions")) {
                p.decisions.push_back({d.at("state").get<std::uint64_t>(), d.at("valuation").get<std::string>(),
                                       d.at("action").get<std::string>()});
            }
        }
        if (o.contains("cdf")) o.at("cdf").get_to(p.cdf);
        get(o, "wall_seconds", p.wall_seconds);
        r.results.push_back(std::move(p));
    }
    j.at("seeds").get_to(r.seeds);
    return r;
}

nlohmann::json without_timing(nlohmann::json j)
{
    if (j.contains("model")) j["model"].erase("explore_seconds");
    if (j.contains("results")) {
        for (auto& o : j["results"]) o.erase("wall_seconds");
    }
    return j;
}

std::string to_text(const RunReport& r)
{
    std::ostringstream os;
    if (r.model) {
        os << "model: " << r.model->model_class << ", " << r.model->states << " states, " << r.model->choices
           << " choices, " << r.model->branches << " branches, " << r.model->rate_entries << " rates\n";
    }
    std::size_t width = 0;
    for (const PropertyReport& p : r.results) width = std::max(width, p.property.size());
    for (const PropertyReport& p : r.results) {
        os << std::left << std::setw(static_cast<int>(width)) << p.property << "  "
           << (p.infinite ? std::string("inf") : p.value ? number(*p.value) : std::string("-"));
        if (p.ci_low && p.ci_high) os << "  [" << number(*p.ci_low) << ", " << number(*p.ci_high) << "]";
        if (p.runs) os << "  runs=" << *p.runs;
        if (p.iterations) os << "  iterations=" << *p.iterations;
        if (p.error_bound) os << "  error<=" << number(*p.error_bound);
        if (p.best_scheduler) os << "  best=" << *p.best_scheduler;
        os << "\n";
        for (const SchedulerEntry& e : p.schedulers) {
            os << "  scheduler " << std::setw(10) << e.id << "  " << number(e.mean) << "  [" << number(e.ci_low)
               << ", " << number(e.ci_high) << "]\n";
        }
        for (const DecisionEntry& d : p.decisions) os << "  [" << d.valuation << "] -> " << d.action << "\n";
    }
    return os.str();
}

} // namespace qmv::cli
