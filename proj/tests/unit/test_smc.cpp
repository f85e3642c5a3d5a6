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

#include <cmath>
#include <string>

#include "doctest.h"
#include "qmv/cases/contacts.hpp"
#include "qmv/lang/explore.hpp"
#include "qmv/lang/parser.hpp"
#include "qmv/lang/property.hpp"
#include "qmv/numeric/solver.hpp"
#include "qmv/smc/lss.hpp"
#include "oracles.hpp"

using namespace qmv;
using namespace qmv::smc;

namespace {

std::vector<std::uint8_t> bytes(const std::string& s) { return {s.begin(), s.end()}; }

Query reach(const std::vector<bool>& target)
{
    Query q;
    q.target = target;
    return q;
}

Resolver first() { return [](StateIndex) { return 0u; }; }

} // namespace

TEST_SUITE("smc") {

TEST_CASE("FNV-1a test vectors")
{
    CHECK(fnv1a64({}) == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64(bytes("a")) == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64(bytes("foobar")) == 0x85944171f73967e8ULL);
    for (const char* s : {"", "a", "foobar", "qmv"}) CHECK(fnv1a64(bytes(s)) == oracle::fnv1a64(bytes(s)));
}

TEST_CASE("little-endian encoding")
{
    std::vector<std::uint8_t> out;
    append_le64(out, 0x0102030405060708ULL);
    CHECK(out == std::vector<std::uint8_t>{8, 7, 6, 5, 4, 3, 2, 1});
    out.clear();
    append_le64(out, static_cast<std::uint64_t>(Value{-1}));
    CHECK(out == std::vector<std::uint8_t>(8, 0xff));
}

TEST_CASE("encode_state follows the layout and projection")
{
    const StateSpace s = lang::explore(lang::parse("dtmc global a : [-3..3] init -2;\n"
                                                   "module m b : [0..9] init 7; [] true -> (b'=b); endmodule\n"));
    std::vector<std::uint8_t> expect;
    append_le64(expect, static_cast<std::uint64_t>(Value{-2}));
    append_le64(expect, 7);
    CHECK(encode_state(s, s.initial()) == expect);
    const std::vector<VarIndex> proj{1, 0, 1};
    CHECK(encode_state(s, s.initial(), proj) == expect);
    const std::vector<VarIndex> only_b{1};
    CHECK(encode_state(s, s.initial(), only_b) == std::vector<std::uint8_t>(expect.begin() + 8, expect.end()));
}

TEST_CASE("lss_decide hashes id then state")
{
    CHECK(lss_decide(0, {}, 7) == oracle::fnv1a64({0, 0, 0, 0}) % 7);
    const std::vector<std::uint8_t> st{1, 2, 3};
    CHECK(lss_decide(0x01020304u, st, 3) == oracle::fnv1a64({4, 3, 2, 1, 1, 2, 3}) % 3);
    CHECK_THROWS_AS(lss_decide(1, st, 0), std::invalid_argument);
}

TEST_CASE("run seeds")
{
    std::vector<std::uint8_t> b;
    append_le64(b, 42);
    append_le64(b, 5);
    CHECK(run_seed(42, 5) == oracle::fnv1a64(b));
}

TEST_CASE("Okamoto run count")
{
    CHECK(okamoto_runs(0.01, 0.05) == 18445);
    CHECK(okamoto_runs(0.01, 0.05) == oracle::okamoto(0.01, 0.05));
    SmcConfig cfg;
    cfg.epsilon = 0.01;
    cfg.delta = 0.05;
    CHECK(run_count(cfg) == 18445);
    cfg.runs = 10;
    CHECK_THROWS_AS(run_count(cfg), SmcError);
    SmcConfig bad;
    bad.epsilon = 0.01;
    CHECK_THROWS_AS(run_count(bad), SmcError);
}

TEST_CASE("coin estimate and interval")
{
    const auto c = oracle::coin();
    SmcConfig cfg;
    cfg.runs = 20000;
    cfg.master_seed = 3;
    const SmcEstimate e = estimate(c.space, first(), reach(c.target), cfg);
    CHECK(e.runs == 20000);
    CHECK(std::abs(e.mean - 0.5) <= 0.02);
    CHECK(e.ci_low <= e.mean);
    CHECK(e.ci_high >= e.mean);
    CHECK(e.half_width() == doctest::Approx(1.96 * std::sqrt(e.mean * (1 - e.mean) / 20000.0)));
    CHECK_FALSE(e.okamoto);
}

TEST_CASE("results do not depend on the worker count")
{
    const auto m = oracle::random_mdp(11, 50);
    const Resolver r = lss_resolver(m.space, 1234, LssMode::Global);
    SmcConfig cfg;
    cfg.runs = 3001;
    cfg.master_seed = 99;
    cfg.workers = 1;
    const SmcEstimate one = estimate(m.space, r, reach(m.target), cfg);
    for (unsigned w : {2u, 3u, 8u}) {
        cfg.workers = w;
        CHECK(estimate(m.space, r, reach(m.target), cfg) == one);
    }
    cfg.master_seed = 100;
    CHECK_FALSE(estimate(m.space, r, reach(m.target), cfg) == one);
}

TEST_CASE("time-bounded simulation of an exponential delay")
{
    const auto e = oracle::rate_chain({1.0});
    Query q = reach(e.target);
    q.kind = PropertyKind::TimeBoundedReachProb;
    q.time_bound = 1.0;
    SmcConfig cfg;
    cfg.runs = 40000;
    cfg.master_seed = 5;
    CHECK(std::abs(estimate(e.space, first(), q, cfg).mean - (1.0 - std::exp(-1.0))) <= 0.01);
}

TEST_CASE("step-bounded and truncated runs")
{
    const auto g = oracle::geometric(0.5);
    Query q = reach(g.target);
    q.kind = PropertyKind::StepBoundedReachProb;
    q.step_bound = 2;
    SmcConfig cfg;
    cfg.runs = 40000;
    CHECK(std::abs(estimate(g.space, first(), q, cfg).mean - 0.75) <= 0.01);

    const auto never = oracle::geometric(0.5);
    std::vector<bool> none(2, false);
    cfg.max_steps = 10;
    cfg.runs = 100;
    const SmcEstimate t = estimate(never.space, first(), reach(none), cfg);
    CHECK(t.hits == 0);
    // Absorbing states end a run without truncation.
    CHECK(t.truncated < 100);
}

TEST_CASE("expected-time properties are rejected")
{
    const auto e = oracle::rate_chain({1.0});
    Property p;
    p.kind = PropertyKind::ExpectedTime;
    p.target = [](Valuation v) { return v[0] == 1; };
    CHECK_THROWS_AS(make_query(e.space, p), SmcError);
}

TEST_CASE("LSS ids and resolver")
{
    const auto ids = sample_ids(7, 5);
    REQUIRE(ids.size() == 5);
    std::mt19937_64 rng(7);
    for (SchedulerId id : ids) CHECK(id == static_cast<SchedulerId>(rng() & 0xffffffffu));

    const auto m = oracle::two_action(0.9, 0.1);
    const Resolver r = lss_resolver(m.space, ids[0], LssMode::Global);
    CHECK(r(0) == lss_decide(ids[0], encode_state(m.space, 0), 2));
}

TEST_CASE("LSS finds the better action and stays sound")
{
    const auto m = oracle::two_action(0.9, 0.1);
    LssConfig cfg;
    cfg.m = 20;
    cfg.inner.runs = 500;
    cfg.inner.master_seed = 1;
    cfg.sampler_seed = 2;
    const LssResult r = lss(m.space, reach(m.target), cfg);
    CHECK(r.table.size() == 20);
    CHECK(std::abs(r.best.mean - 0.9) <= 0.05);
    CHECK(r.best.mean <= 0.9 + 3 * r.best.half_width() + 1e-9);
}

TEST_CASE("distributed LSS refuses models that are not good for distribution")
{
    const StateSpace bad = lang::explore(lang::parse("mdp\n"
                                                     "module A a : [0..1] init 0; [] a=0 -> (a'=1); endmodule\n"
                                                     "module B b : [0..1] init 0; [] b=0 -> (b'=1); endmodule\n"));
    LssConfig cfg;
    cfg.mode = LssMode::Distributed;
    cfg.m = 2;
    cfg.inner.runs = 10;
    std::vector<bool> target(bad.num_states(), false);
    try {
        lss(bad, reach(target), cfg);
        FAIL("expected NotGoodForDistribution");
    } catch (const NotGoodForDistribution& e) {
        CHECK(e.states() == std::vector<StateIndex>{bad.initial()});
    }
}

TEST_CASE("distributed decisions depend only on the observer projection")
{
    const auto gen = cases::gen_contact_mdp(oracle::four_node_plan(2));
    const StateSpace s = lang::explore(lang::parse(gen.model));
    const Resolver r = lss_resolver(s, 77, LssMode::Distributed);
    for (StateIndex st = 0; st < s.num_states(); ++st) {
        const auto c = s.choices(st);
        if (c.size() < 2) continue;
        const auto& obs = s.components()[c[0].owner].observes;
        CHECK(r(st) == lss_decide(77, encode_state(s, st, obs), static_cast<std::uint32_t>(c.size())));
    }
}

}
