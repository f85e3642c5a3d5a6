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

#include <algorithm>

#include "doctest.h"
#include "qmv/cases/bitcoin.hpp"
#include "qmv/cases/contacts.hpp"
#include "qmv/lang/explore.hpp"
#include "qmv/lang/parser.hpp"
#include "oracles.hpp"

using namespace qmv;
using namespace qmv::lang;

namespace {

Value var(const StateSpace& s, StateIndex st, const char* name)
{
    return s.valuation(st)[*s.find_variable(name)];
}

} // namespace

TEST_SUITE("explore") {

TEST_CASE("one-state model")
{
    const StateSpace s = explore(parse("dtmc module m x : [0..0] init 0; [] x=0 -> 1:(x'=0); endmodule"));
    CHECK(s.num_states() == 1);
    CHECK(s.num_choices() == 1);
    CHECK(validate(s).empty());
}

TEST_CASE("synchronization multiplies probabilities and merges writes")
{
    const StateSpace s = explore(parse("mdp action go;\n"
                                       "module a x : [0..1] init 0; [go] x=0 -> 0.5:(x'=1) + 0.5:(x'=0); endmodule\n"
                                       "module b y : [0..1] init 0; [go] y=0 -> 0.25:(y'=1) + 0.75:(y'=0); endmodule\n"));
    CHECK(validate(s).empty());
    const auto c = s.choices(s.initial());
    REQUIRE(c.size() == 1);
    CHECK(s.action_name(c[0]) == "go");
    const auto br = s.branches(c[0]);
    REQUIRE(br.size() == 4);
    for (const Branch& b : br) {
        const double px = var(s, b.target, "x") == 1 ? 0.5 : 0.5;
        const double py = var(s, b.target, "y") == 1 ? 0.25 : 0.75;
        CHECK(b.probability == doctest::Approx(px * py));
    }
}

TEST_CASE("a blocked partner blocks the synchronization")
{
    const StateSpace s = explore(parse("mdp action go;\n"
                                       "module a x : [0..1] init 0; [go] true -> (x'=1); [] true -> (x'=x); endmodule\n"
                                       "module b y : [0..1] init 0; [go] y=1 -> (y'=0); endmodule\n"));
    CHECK(s.num_states() == 1);
    REQUIRE(s.choices(0).size() == 1);
    CHECK(s.action_name(s.choices(0)[0]).empty());
}

TEST_CASE("conflicting synchronized writes are an error")
{
    CHECK_THROWS_AS(explore(parse("mdp action go; global g : [0..2] init 0;\n"
                                  "module a [go] true -> (g'=1); endmodule\n"
                                  "module b [go] true -> (g'=2); endmodule\n")),
                    ExplorationError);
}

TEST_CASE("out-of-bounds assignment is an error")
{
    CHECK_THROWS_AS(explore(parse("dtmc module m x : [0..1] init 0; [] true -> (x'=x+1); endmodule")),
                    ExplorationError);
}

TEST_CASE("state cap")
{
    const SymbolicModel m = parse("dtmc module m x : [0..100] init 0; [] x<100 -> (x'=x+1); endmodule");
    CHECK(explore(m).num_states() == 101);
    CHECK_THROWS_AS(explore(m, {50}), StateCapExceeded);
}

TEST_CASE("choice order is by module then command")
{
    const StateSpace s = explore(parse("mdp\n"
                                       "module a x : [0..1] init 0; [] true -> (x'=1); [] true -> (x'=0); endmodule\n"
                                       "module b y : [0..1] init 0; [] true -> (y'=1); endmodule\n"));
    const auto c = s.choices(s.initial());
    REQUIRE(c.size() == 3);
    CHECK(c[0].owner == 0);
    CHECK(c[1].owner == 0);
    CHECK(c[2].owner == 1);
    CHECK(var(s, s.branches(c[0])[0].target, "x") == 1);
    CHECK(var(s, s.branches(c[1])[0].target, "x") == 0);
}

TEST_CASE("exploration is deterministic")
{
    const SymbolicModel m = parse(cases::gen_contact_mdp(oracle::four_node_plan(2)).model);
    const StateSpace a = explore(m);
    const StateSpace b = explore(m);
    REQUIRE(a.num_states() == b.num_states());
    REQUIRE(a.num_choices() == b.num_choices());
    for (StateIndex s = 0; s < a.num_states(); ++s) {
        CHECK(std::equal(a.valuation(s).begin(), a.valuation(s).end(), b.valuation(s).begin()));
        REQUIRE(a.choices(s).size() == b.choices(s).size());
        for (std::size_t i = 0; i < a.choices(s).size(); ++i) {
            CHECK(a.action_name(a.choices(s)[i]) == b.action_name(b.choices(s)[i]));
        }
    }
}

TEST_CASE("markovian commands race and are masked by immediate ones")
{
    const StateSpace s = explore(parse("ma\n"
                                       "module a x : [0..2] init 0; rate(2) x=0 -> (x'=1); [] x=1 -> (x'=2); endmodule\n"
                                       "module b y : [0..1] init 0; rate(3) y=0 -> (y'=1); endmodule\n"));
    CHECK(validate(s).empty());
    CHECK(s.exit_rate(s.initial()) == doctest::Approx(5.0));
    CHECK(s.is_markovian(s.initial()));
    for (StateIndex st = 0; st < s.num_states(); ++st) {
        CHECK(s.markovian_masked(st) == !s.choices(st).empty());
        for (const VariableInfo& v : s.variables()) {
            const Value x = s.valuation(st)[*s.find_variable(v.name)];
            CHECK(x >= v.lower);
            CHECK(x <= v.upper);
        }
    }
}

TEST_CASE("Bitcoin CD=1 state count matches hand enumeration")
{
    cases::BitcoinParams p;
    p.CD = 1;
    p.DB = 1;
    const StateSpace s = explore(parse(cases::gen_bitcoin(p).model));
    CHECK(validate(s).empty());
    CHECK(s.num_states() == oracle::bitcoin_cd1_states());
}

TEST_CASE("good for distribution")
{
    const StateSpace dtmc = explore(parse("dtmc module m x : [0..3] init 0; [] x<3 -> 0.5:(x'=x+1) + 0.5:(x'=x); endmodule"));
    CHECK(check_good_for_distribution(dtmc).empty());

    const StateSpace plan = explore(parse(cases::gen_contact_mdp(oracle::four_node_plan(2)).model));
    CHECK(check_good_for_distribution(plan).empty());

    const StateSpace bad = explore(parse("mdp\n"
                                         "module A a : [0..1] init 0; [] a=0 -> (a'=1); endmodule\n"
                                         "module B b : [0..1] init 0; [] b=0 -> (b'=1); endmodule\n"));
    const auto v = check_good_for_distribution(bad);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == bad.initial());
}

}
