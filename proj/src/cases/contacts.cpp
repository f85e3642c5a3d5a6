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

#include "qmv/cases/contacts.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <tuple>

#include "format.hpp"
#include "json.hpp"

namespace qmv::cases {

namespace {

bool is_identifier(std::string_view s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string module_name(std::string_view node) { return "node_" + std::string(node); }

} // namespace

std::string counter_name(std::string_view node) { return "c_" + std::string(node); }

void validate(const ContactPlan& plan)
{
    std::set<std::string> nodes;
    for (const std::string& n : plan.nodes) {
        if (!is_identifier(n)) throw ParameterError("node name '" + n + "' is not an identifier");
        if (!nodes.insert(n).second) throw ParameterError("duplicate node '" + n + "'");
    }
    auto known = [&](const std::string& n, const char* what) {
        if (!nodes.count(n)) throw ParameterError(std::string(what) + " '" + n + "' is not a declared node");
    };
    known(plan.source, "source");
    known(plan.target, "target");
    if (plan.slots < 0) throw ParameterError("slot count must be nonnegative");
    if (plan.copies < 1) throw ParameterError("the source needs at least one copy");
    std::set<std::tuple<std::string, std::string, int>> seen;
    for (const Contact& c : plan.contacts) {
        known(c.from, "contact sender");
        known(c.to, "contact receiver");
        if (c.from == c.to) throw ParameterError("contact from '" + c.from + "' to itself");
        if (c.slot < 1 || c.slot > plan.slots) {
            throw ParameterError("contact slot " + std::to_string(c.slot) + " outside 1.." + std::to_string(plan.slots));
        }
        if (!(c.p > 0.0 && c.p <= 1.0)) throw ParameterError("contact probability " + detail::real(c.p) + " outside (0,1]");
        if (!seen.emplace(c.from, c.to, c.slot).second) {
            throw ParameterError("duplicate contact " + c.from + " -> " + c.to + " in slot " + std::to_string(c.slot));
        }
    }
}

ContactPlan parse_contact_plan(std::string_view json)
{
    ContactPlan plan;
    try {
        const auto j = nlohmann::json::parse(json);
        j.at("nodes").get_to(plan.nodes);
        j.at("slots").get_to(plan.slots);
        for (const auto& c : j.at("contacts")) {
            Contact contact;
            c.at("from").get_to(contact.from);
            c.at("to").get_to(contact.to);
            c.at("slot").get_to(contact.slot);
            c.at("p").get_to(contact.p);
            plan.contacts.push_back(std::move(contact));
        }
        j.at("source").get_to(plan.source);
        j.at("target").get_to(plan.target);
        j.at("copies").get_to(plan.copies);
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("malformed contact plan: ") + e.what());
    }
    validate(plan);
    return plan;
}

std::string to_json(const ContactPlan& plan)
{
    nlohmann::ordered_json j;
    j["nodes"] = plan.nodes;
    j["slots"] = plan.slots;
    j["contacts"] = nlohmann::ordered_json::array();
    for (const Contact& c : plan.contacts) {
        j["contacts"].push_back({{"from", c.from}, {"to", c.to}, {"slot", c.slot}, {"p", c.p}});
    }
    j["source"] = plan.source;
    j["target"] = plan.target;
    j["copies"] = plan.copies;
    return j.dump(2) + "\n";
}

GeneratedCase gen_contact_mdp(const ContactPlan& plan)
{
    validate(plan);
    std::vector<Contact> order = plan.contacts;
    std::stable_sort(order.begin(), order.end(), [](const Contact& a, const Contact& b) { return a.slot < b.slot; });
    const int n = plan.copies;

    std::ostringstream m;
    m << "// Copy routing over an uncertain contact plan: one contact per epoch, in slot order.\n"
      << "mdp\n\n"
      << "const int N = " << n << ";\n\n"
      << "global epoch : [0.." << order.size() << "] init 0;\n";
    for (const std::string& node : plan.nodes) {
        m << "global " << counter_name(node) << " : [0..N] init " << (node == plan.source ? "N" : "0") << ";\n";
    }
    for (const std::string& node : plan.nodes) {
        const std::string cu = counter_name(node);
        m << "\nmodule " << module_name(node) << "\n"
          << "  observes epoch, " << cu << ";\n";
        for (std::size_t k = 0; k < order.size(); ++k) {
            const Contact& c = order[k];
            if (c.from != node) continue;
            const std::string cv = counter_name(c.to);
            m << "  // slot " << c.slot << ": " << c.from << " -> " << c.to << ", p = " << detail::real(c.p) << "\n";
            for (int copies = 0; copies <= n; ++copies) {
                const std::string act = "e" + std::to_string(k + 1) + "_send" + std::to_string(copies);
                const std::string next = "(epoch'=" + std::to_string(k + 1) + ")";
                m << "  [" << act << "] epoch=" << k << " & " << cu << ">=" << copies << " -> ";
                if (copies == 0) {
                    m << next << ";\n";
                    continue;
                }
                const std::string take = "(" + cu + "'=" + cu + "-" + std::to_string(copies) + ")";
                const std::string give = "(" + cv + "'=" + cv + "+" + std::to_string(copies) + ")";
                if (c.p >= 1.0) {
                    m << take << " & " << give << " & " << next << ";\n";
                } else {
                    m << detail::real(c.p) << ": " << take << " & " << give << " & " << next << " + "
                      << "1-" << detail::real(c.p) << ": " << take << " & " << next << ";\n";
                }
            }
        }
        m << "endmodule\n";
    }
    m << "\nlabel \"delivered\" = " << counter_name(plan.target) << " >= 1;\n";

    GeneratedCase out;
    out.name = "contacts";
    out.model = m.str();
    out.properties = "Pmax=? [ F \"delivered\" ]\n";
    return out;
}

} // namespace qmv::cases
