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

#include "qmv/cli/app.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qmv/cases/bitcoin.hpp"
#include "qmv/cases/contacts.hpp"
#include "qmv/cases/noc.hpp"
#include "qmv/cli/report.hpp"
#include "qmv/lang/explore.hpp"
#include "qmv/lang/parser.hpp"
#include "qmv/lang/property.hpp"
#include "qmv/numeric/solver.hpp"
#include "qmv/smc/lss.hpp"
#include "qmv/smc/simulate.hpp"

namespace qmv::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Aborts a command with an exit code; the message goes to stderr.
struct Failure {
    int code;
    std::string message;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kInputError, "cannot read " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string shortest(double x)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

struct ModelOptions {
    std::string model_path;
    std::string prop;
    std::optional<std::size_t> prop_index;
    std::vector<std::string> constants;
    std::size_t state_cap = lang::ExploreOptions{}.state_cap;
    bool json = false;
    bool timing = false;
};

void add_model_options(CLI::App& sub, ModelOptions& o)
{
    sub.add_option("model", o.model_path, "model file (.gcm)")->required();
    sub.add_option("-p,--prop", o.prop, "property text or .props file (default: <model>.props)");
    sub.add_option("--prop-index", o.prop_index, "select one property (0-based)");
    sub.add_option("-c,--const", o.constants, "constant override NAME=VALUE")->take_all();
    sub.add_option("--state-cap", o.state_cap, "abort exploration beyond this many states");
    sub.add_flag("--json", o.json, "JSON report");
    sub.add_flag("--timing", o.timing, "include wall-clock fields in the report");
}

struct Loaded {
    lang::SymbolicModel model;
    StateSpace space;
    std::vector<std::string> properties;
    ModelStats stats;
};

Loaded load(const ModelOptions& o)
{
    lang::ConstantOverrides overrides;
    for (const std::string& c : o.constants) {
        const auto eq = c.find('=');
        if (eq == std::string::npos || eq == 0) throw Failure{kInputError, "constant override must be NAME=VALUE: " + c};
        overrides[c.substr(0, eq)] = c.substr(eq + 1);
    }
    const std::string text = read_file(o.model_path);

    std::vector<std::string> props;
    if (!o.prop.empty()) {
        if (std::filesystem::is_regular_file(o.prop)) props = lang::split_properties(read_file(o.prop));
        else props = lang::split_properties(o.prop);
    } else {
        const auto sibling = std::filesystem::path(o.model_path).replace_extension(".props");
        if (!std::filesystem::is_regular_file(sibling)) {
            throw Failure{kInputError, "no property given and " + sibling.string() + " does not exist"};
        }
        props = lang::split_properties(read_file(sibling.string()));
    }
    if (props.empty()) throw Failure{kInputError, "no properties"};
    if (o.prop_index) {
        if (*o.prop_index >= props.size()) {
            throw Failure{kInputError, "property index " + std::to_string(*o.prop_index) + " out of range (have " +
                                           std::to_string(props.size()) + ")"};
        }
        props = {props[*o.prop_index]};
    }

    lang::SymbolicModel model;
    try {
        model = lang::parse(text, overrides);
    } catch (const ModelError& e) {
        throw Failure{kInputError, o.model_path + ": " + e.what()};
    }
    const auto t0 = Clock::now();
    std::optional<StateSpace> space;
    try {
        space = lang::explore(model, {o.state_cap});
    } catch (const lang::StateCapExceeded& e) {
        throw Failure{kStateCap, e.what()};
    } catch (const ModelError& e) {
        throw Failure{kInputError, o.model_path + ": " + e.what()};
    }
    ModelStats stats;
    stats.model_class = to_string(space->model_class());
    stats.states = space->num_states();
    stats.choices = space->num_choices();
    stats.branches = space->num_branches();
    stats.rate_entries = space->num_rate_entries();
    if (o.timing) stats.explore_seconds = seconds_since(t0);
    return {std::move(model), std::move(*space), std::move(props), stats};
}

Property property_of(const Loaded& l, const std::string& text)
{
    try {
        return lang::parse_property(text, l.model);
    } catch (const ModelError& e) {
        throw Failure{kInputError, e.what()};
    }
}

void emit(std::ostream& out, const RunReport& r, bool json)
{
    if (json) out << to_json(r).dump(2) << "\n";
    else out << to_text(r);
}

// ---- check ---------------------------------------------------------------

struct CheckOptions {
    ModelOptions model;
    numeric::SolverConfig solver;
    bool scheduler = false;
};

int cmd_check(const CheckOptions& o, RunReport& report)
{
    const Loaded l = load(o.model);
    report.model = l.stats;
    for (const std::string& text : l.properties) {
        const Property p = property_of(l, text);
        const auto t0 = Clock::now();
        ValueResult v;
        try {
            v = numeric::check(l.space, p, o.solver);
        } catch (const ModelError& e) {
            throw Failure{kSolverError, p.text + ": " + e.what()};
        }
        PropertyReport pr;
        pr.property = p.text;
        pr.infinite = v.infinite;
        if (!v.infinite) pr.value = v.value;
        pr.iterations = v.iterations;
        pr.error_bound = v.error_bound;
        if (o.scheduler && v.scheduler) {
            for (const auto& row : numeric::describe_scheduler(l.space, *v.scheduler)) {
                pr.decisions.push_back({row.state, row.valuation, row.action});
            }
        }
        if (o.model.timing) pr.wall_seconds = seconds_since(t0);
        report.results.push_back(std::move(pr));
    }
    return kOk;
}

// ---- cdf -----------------------------------------------------------------

struct CdfOptions {
    ModelOptions model;
    numeric::SolverConfig solver;
    std::optional<std::uint64_t> horizon;
    std::string out;
};

int cmd_cdf(const CdfOptions& o, RunReport& report)
{
    const Loaded l = load(o.model);
    report.model = l.stats;
    if (l.properties.size() != 1) throw Failure{kInputError, "cdf needs exactly one property (use --prop-index)"};
    const Property p = property_of(l, l.properties.front());
    if (p.kind != PropertyKind::ReachProb && p.kind != PropertyKind::StepBoundedReachProb) {
        throw Failure{kInputError, "cdf needs a step-bounded or unbounded probability property"};
    }
    std::uint64_t horizon = 0;
    if (o.horizon) horizon = *o.horizon;
    else if (p.kind == PropertyKind::StepBoundedReachProb) horizon = p.step_bound;
    else throw Failure{kInputError, "cdf needs --horizon for an unbounded property"};

    const auto t0 = Clock::now();
    numeric::CdfResult cdf;
    try {
        cdf = numeric::step_bounded_cdf(l.space, l.space.satisfying(p.target), p.direction, horizon, o.solver);
    } catch (const ModelError& e) {
        throw Failure{kSolverError, e.what()};
    }
    if (!cdf.monotone) throw Failure{kSolverError, "computed CDF is not monotone"};

    std::ostringstream csv;
    csv << "t,probability\n";
    for (std::size_t t = 0; t < cdf.values.size(); ++t) csv << t << "," << shortest(cdf.values[t]) << "\n";
    if (!o.out.empty()) {
        std::ofstream f(o.out, std::ios::binary);
        if (!f || !(f << csv.str())) throw Failure{kInputError, "cannot write " + o.out};
    }
    PropertyReport pr;
    pr.property = p.text;
    pr.value = cdf.values.back();
    pr.iterations = horizon;
    pr.cdf = cdf.values;
    if (o.model.timing) pr.wall_seconds = seconds_since(t0);
    report.results.push_back(std::move(pr));
    return kOk;
}

// ---- simulate / lss --------------------------------------------------------

struct SmcOptions {
    ModelOptions model;
    std::optional<std::uint64_t> runs;
    std::optional<double> eps;
    std::optional<double> delta;
    std::uint64_t seed = 0;
    std::uint64_t max_steps = 100'000;
    unsigned workers = 0;
    std::string mode = "global";
    std::optional<std::uint32_t> scheduler_id;
    std::uint64_t schedulers = 100;
    std::optional<std::uint64_t> sampler_seed;
    std::optional<std::uint64_t> confirm_runs;
    bool table = false;
};

void add_smc_options(CLI::App& sub, SmcOptions& o)
{
    add_model_options(sub, o.model);
    auto* runs = sub.add_option("--runs", o.runs, "number of runs");
    auto* eps = sub.add_option("--eps", o.eps, "half-width of the (eps, delta) guarantee");
    auto* delta = sub.add_option("--delta", o.delta, "confidence parameter of the (eps, delta) guarantee");
    eps->needs(delta);
    delta->needs(eps);
    runs->excludes(eps);
    sub.add_option("--seed", o.seed, "master seed");
    sub.add_option("--max-steps", o.max_steps, "truncate runs after this many steps");
    sub.add_option("--workers", o.workers, "worker threads (0: all cores)");
    sub.add_option("--mode", o.mode, "scheduler information: global or distributed")
        ->check(CLI::IsMember({"global", "distributed"}));
}

smc::SmcConfig smc_config(const SmcOptions& o)
{
    smc::SmcConfig c;
    c.runs = o.runs;
    c.epsilon = o.eps;
    c.delta = o.delta;
    if (!c.runs && !c.epsilon) c.runs = 10'000;
    c.master_seed = o.seed;
    c.max_steps = o.max_steps;
    c.workers = o.workers;
    return c;
}

smc::LssMode mode_of(const SmcOptions& o)
{
    return o.mode == "distributed" ? smc::LssMode::Distributed : smc::LssMode::Global;
}

void fill(PropertyReport& pr, const smc::SmcEstimate& e)
{
    pr.value = e.mean;
    pr.ci_low = e.ci_low;
    pr.ci_high = e.ci_high;
    pr.runs = e.runs;
    pr.truncated_runs = e.truncated;
}

[[noreturn]] void not_distributed(const StateSpace& space, const smc::NotGoodForDistribution& e)
{
    std::string msg = "model is not good for distribution; violating states:";
    for (StateIndex s : e.states()) msg += "\n  " + std::to_string(s) + ": " + space.describe_state(s);
    throw Failure{kNotDistributed, msg};
}

int cmd_simulate(const SmcOptions& o, RunReport& report)
{
    const Loaded l = load(o.model);
    report.model = l.stats;
    report.seeds["master"] = o.seed;
    const smc::SmcConfig cfg = smc_config(o);
    smc::Resolver resolver;
    if (o.scheduler_id) {
        if (mode_of(o) == smc::LssMode::Distributed) {
            const auto bad = lang::check_good_for_distribution(l.space);
            if (!bad.empty()) not_distributed(l.space, smc::NotGoodForDistribution(bad));
        }
        resolver = smc::lss_resolver(l.space, *o.scheduler_id, mode_of(o));
    }
    for (const std::string& text : l.properties) {
        const Property p = property_of(l, text);
        const auto t0 = Clock::now();
        PropertyReport pr;
        pr.property = p.text;
        try {
            fill(pr, smc::estimate(l.space, resolver, smc::make_query(l.space, p), cfg));
        } catch (const ModelError& e) {
            throw Failure{kSolverError, p.text + ": " + e.what()};
        }
        if (o.model.timing) pr.wall_seconds = seconds_since(t0);
        report.results.push_back(std::move(pr));
    }
    return kOk;
}

int cmd_lss(const SmcOptions& o, RunReport& report)
{
    const Loaded l = load(o.model);
    report.model = l.stats;
    const std::uint64_t sampler = o.sampler_seed.value_or(o.seed);
    report.seeds["master"] = o.seed;
    report.seeds["sampler"] = sampler;
    for (const std::string& text : l.properties) {
        const Property p = property_of(l, text);
        smc::LssConfig cfg;
        cfg.m = o.schedulers;
        cfg.mode = mode_of(o);
        cfg.direction = p.direction;
        cfg.inner = smc_config(o);
        cfg.sampler_seed = sampler;
        cfg.confirm_runs = o.confirm_runs;
        const auto t0 = Clock::now();
        smc::LssResult r;
        try {
            r = smc::lss(l.space, smc::make_query(l.space, p), cfg);
        } catch (const smc::NotGoodForDistribution& e) {
            not_distributed(l.space, e);
        } catch (const ModelError& e) {
            throw Failure{kSolverError, p.text + ": " + e.what()};
        }
        PropertyReport pr;
        pr.property = p.text;
        fill(pr, r.best);
        pr.best_scheduler = r.best_id;
        if (o.table) {
            for (const auto& row : r.table) {
                pr.schedulers.push_back({row.id, row.estimate.mean, row.estimate.ci_low, row.estimate.ci_high});
            }
        }
        if (o.model.timing) pr.wall_seconds = seconds_since(t0);
        report.results.push_back(std::move(pr));
    }
    return kOk;
}

// ---- gen -------------------------------------------------------------------

struct GenOptions {
    std::string out_dir = ".";
    cases::BitcoinParams bitcoin;
    std::optional<int> db;
    std::string plan;
    std::optional<int> copies;
    cases::NocParams noc;
    std::string pattern = "every-other";
    std::string kind = "either";
    std::optional<int> unfold;
};

int cmd_gen(const std::string& which, GenOptions& o, std::ostream& out)
{
    cases::GeneratedCase c;
    try {
        if (which == "bitcoin") {
            o.bitcoin.DB = o.db;
            c = cases::gen_bitcoin(o.bitcoin);
        } else if (which == "contacts") {
            cases::ContactPlan plan = cases::parse_contact_plan(read_file(o.plan));
            if (o.copies) plan.copies = *o.copies;
            c = cases::gen_contact_mdp(plan);
        } else {
            o.noc.pattern = o.pattern == "bursty" ? cases::FlitPattern::Bursty : cases::FlitPattern::EveryOtherCycle;
            o.noc.kind = o.kind == "resistive"   ? cases::NoiseKind::Resistive
                         : o.kind == "inductive" ? cases::NoiseKind::Inductive
                                                 : cases::NoiseKind::Either;
            o.noc.unfold = o.unfold;
            c = cases::gen_noc(o.noc);
        }
        // Generated sources must load; catch generator bugs here rather than downstream.
        lang::parse(c.model);
    } catch (const cases::ParameterError& e) {
        throw Failure{kInputError, e.what()};
    } catch (const ModelError& e) {
        throw Failure{kInputError, std::string("generated model does not parse: ") + e.what()};
    }
    const std::string path = cases::write_case(c, o.out_dir);
    out << path << "\n" << std::filesystem::path(path).replace_extension(".props").string() << "\n";
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"qmv: quantitative model checking and scheduler sampling"};
    app.name("qmv");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("qmv ") + kVersion);

    CheckOptions check;
    auto* c = app.add_subcommand("check", "numerical model checking");
    add_model_options(*c, check.model);
    c->add_option("--epsilon", check.solver.epsilon, "value iteration residual");
    c->add_option("--time-bound-error", check.solver.time_bound_error, "digitization error for MA time bounds");
    c->add_option("--max-iterations", check.solver.max_iterations, "value iteration sweep limit");
    c->add_flag("--scheduler", check.scheduler, "report the decisions of the optimal scheduler");

    CdfOptions cdf;
    auto* d = app.add_subcommand("cdf", "probabilities for every step bound up to a horizon");
    add_model_options(*d, cdf.model);
    d->add_option("--horizon", cdf.horizon, "largest step bound");
    d->add_option("--out", cdf.out, "CSV file (t,probability)");
    d->add_option("--epsilon", cdf.solver.epsilon, "value iteration residual");

    SmcOptions sim;
    auto* s = app.add_subcommand("simulate", "statistical model checking");
    add_smc_options(*s, sim);
    s->add_option("--scheduler-id", sim.scheduler_id, "resolve nondeterminism with this sampled scheduler");

    SmcOptions lss;
    auto* l = app.add_subcommand("lss", "lightweight scheduler sampling");
    add_smc_options(*l, lss);
    l->add_option("-m,--schedulers", lss.schedulers, "number of sampled schedulers")->check(CLI::PositiveNumber);
    l->add_option("--sampler-seed", lss.sampler_seed, "seed for drawing scheduler ids (default: --seed)");
    l->add_option("--confirm-runs", lss.confirm_runs, "runs for re-estimating the best scheduler");
    l->add_flag("--table", lss.table, "report every sampled scheduler");

    GenOptions gen;
    auto* g = app.add_subcommand("gen", "write a case-study model and its properties");
    g->require_subcommand(1);
    g->add_option("-o,--out-dir", gen.out_dir, "output directory");
    auto* gb = g->add_subcommand("bitcoin", "trust attack Markov automaton");
    gb->add_option("--M", gen.bitcoin.M, "attacker hash-rate fraction");
    gb->add_option("--CD", gen.bitcoin.CD, "confirmation depth");
    gb->add_option("--DB", gen.db, "give-up distance (default: CD)");
    gb->add_option("--goal", gen.bitcoin.goal, "goal predicate");
    gb->add_option("--time-bound", gen.bitcoin.time_bound, "minutes for the time-bounded property");
    auto* gc = g->add_subcommand("contacts", "contact-plan routing MDP");
    gc->add_option("--plan", gen.plan, "contact plan JSON")->required();
    gc->add_option("--copies", gen.copies, "override the number of copies");
    auto* gn = g->add_subcommand("noc", "2x2 network-on-chip DTMC");
    gn->add_option("--pattern", gen.pattern, "every-other or bursty")->check(CLI::IsMember({"every-other", "bursty"}));
    gn->add_option("--burst-length", gen.noc.burst_length, "bursty: injecting cycles per period");
    gn->add_option("--burst-period", gen.noc.burst_period, "bursty: period");
    gn->add_option("--buffer", gen.noc.buffer, "buffer capacity");
    gn->add_option("--k-res", gen.noc.k_res, "transmitters for a resistive event");
    gn->add_option("--k-ind", gen.noc.k_ind, "transmitter change for an inductive event");
    gn->add_option("--kind", gen.kind, "resistive, inductive or either")
        ->check(CLI::IsMember({"resistive", "inductive", "either"}));
    gn->add_option("--events", gen.noc.events, "n");
    gn->add_option("--horizon", gen.noc.horizon, "t");
    gn->add_option("--unfold", gen.unfold, "unfold a cycle counter up to this bound");

    // CLI11 consumes its argument vector from the back; the program name is skipped.
    std::vector<std::string> reversed;
    if (!args.empty()) reversed.assign(args.rbegin(), args.rend() - 1);
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << "qmv " << kVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        // Subcommand help requests arrive here too.
        if (e.get_exit_code() == 0) {
            out << e.what() << "\n";
            return kOk;
        }
        err << "qmv: " << e.what() << "\n";
        return kInputError;
    }

    RunReport report;
    report.command = args;
    bool json = false;
    try {
        int code = kOk;
        if (c->parsed()) {
            code = cmd_check(check, report);
            json = check.model.json;
        } else if (d->parsed()) {
            code = cmd_cdf(cdf, report);
            json = cdf.model.json;
        } else if (s->parsed()) {
            code = cmd_simulate(sim, report);
            json = sim.model.json;
        } else if (l->parsed()) {
            code = cmd_lss(lss, report);
            json = lss.model.json;
        } else {
            const std::string which = gb->parsed() ? "bitcoin" : gc->parsed() ? "contacts" : "noc";
            return cmd_gen(which, gen, out);
        }
        emit(out, report, json);
        return code;
    } catch (const Failure& f) {
        err << "qmv: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        err << "qmv: internal error: " << e.what() << "\n";
        return kSolverError;
    }
}

} // namespace qmv::cli
