#include "cli.hpp"

#include "bench.hpp"
#include "gantt.hpp"
#include "report.hpp"

#include "ltlcoord/planner.hpp"
#include "ltlcoord/sim.hpp"

#include "CLI11.hpp"
#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace ltlcoord::cli {

namespace fs = std::filesystem;

scenario::Scenario resolve_scenario(const std::string& name)
{
    if (auto s = scenario::builtin(name))
        return *s;
    if (fs::is_regular_file(name))
        return scenario::load_scenario(name);
    if (const char* dir = std::getenv(kScenarioDirEnv)) {
        for (const fs::path& p : {fs::path(dir) / name, fs::path(dir) / (name + ".json")}) {
            if (fs::is_regular_file(p))
                return scenario::load_scenario(p);
        }
    }
    throw scenario::ScenarioError(std::vector<scenario::Violation>{
        {name, "not a built-in scenario or readable file (built-ins: canopies_9, scale_90)"}});
}

namespace {

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream f(p, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + p.string());
    f << text;
}

std::string read_file(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot read " + p.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::size_t> parse_list(const std::string& s)
{
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        std::size_t used = 0;
        const unsigned long v = std::stoul(item, &used);
        if (used != item.size() || v == 0)
            throw CLI::ValidationError("list", "expected positive integers, got '" + s + "'");
        out.push_back(v);
    }
    if (out.empty())
        throw CLI::ValidationError("list", "empty list");
    return out;
}

sim::DelayModel parse_model(const std::string& text)
{
    auto m = sim::parse_delay(text);
    if (!m || !m->validate().empty())
        throw CLI::ValidationError("delay", "expected none, fixed:X or uniform:LO:HI, got '" + text + "'");
    return *m;
}

// ---------------------------------------------------------------------------

struct PlanArgs {
    std::string scenario;
    std::string agent;
};

int cmd_plan(const PlanArgs& a, std::ostream& out)
{
    const auto s = resolve_scenario(a.scenario);
    const auto report = scenario::validate(s);
    if (!report.ok())
        throw scenario::ScenarioError(report.errors);
    const auto agents = scenario::compile(s);

    out << "Motion and agent transition systems\n";
    out << fmt::format("{:<14}{:>6}{:>6}{:>9}{:>13}{:>11}\n", "class", "rois", "fts", "grid", "grid_states",
                       "reduction");
    std::set<std::string> seen;
    for (const auto& ag : agents) {
        if (!seen.insert(ag.config.cls).second)
            continue;
        const auto* cls = s.find_class(ag.config.cls);
        std::string grid = "-";
        std::string grid_states = "-";
        std::string red = "-";
        if (cls->grid) {
            const auto g = models::grid_state_count(cls->grid->first, cls->grid->second);
            grid = fmt::format("{}x{}", cls->grid->first, cls->grid->second);
            grid_states = std::to_string(g);
            red = fmt::format("{:.1f}%", 100.0 * models::reduction(ag.motion.rois.size(), g));
        }
        out << fmt::format("{:<14}{:>6}{:>6}{:>9}{:>13}{:>11}\n", cls->name, ag.motion.rois.size(), ag.fts.size(),
                           grid, grid_states, red);
    }

    out << "\nProducts\n";
    out << fmt::format("{:<16}{:<14}{:>6}{:>6}{:>9}{:>11}{:>11}{:>11}{:>9}{:>9}\n", "agent", "class", "fts", "nba",
                       "product", "reachable", "red_full", "red_reach", "prefix", "suffix");
    std::vector<std::pair<const scenario::CompiledAgent*, planner::Plan>> plans;
    for (const auto& ag : agents) {
        if (!a.agent.empty() && ag.config.id != a.agent)
            continue;
        planner::Product product;
        try {
            product = planner::build_product(ag.fts, ag.nba);
        } catch (const planner::InfeasibleTask& e) {
            throw planner::InfeasibleTask("agent " + ag.config.id + ": " + e.what());
        }
        const auto run = planner::optimal_run(product);
        auto plan = planner::plan_of(ag.fts, product, run);
        out << fmt::format("{:<16}{:<14}{:>6}{:>6}{:>9}{:>11}{:>10.1f}%{:>10.1f}%{:>9.1f}{:>9.1f}\n", ag.config.id,
                           ag.config.cls, ag.fts.size(), ag.nba.num_states, product.full_size, product.size(),
                           100.0 * models::reduction(ag.fts.size(), product.full_size),
                           100.0 * models::reduction(ag.fts.size(), product.size()), plan.prefix_cost,
                           plan.suffix_cost);
        plans.emplace_back(&ag, std::move(plan));
    }
    if (!a.agent.empty() && plans.empty())
        throw scenario::ScenarioError(std::vector<scenario::Violation>{{a.agent, "no such agent"}});

    for (const auto& [ag, plan] : plans) {
        out << fmt::format("\nPlan {} : {}\n", ag->config.id, ag->task.to_string());
        for (std::size_t k = 0; k < plan.size(); ++k) {
            if (k == 0 && plan.suffix_start > 0)
                out << "  prefix\n";
            if (k == plan.suffix_start)
                out << "  suffix\n";
            const auto& st = plan.rho[k];
            out << fmt::format("    {:>3}  {:<12} {} -> {}  {:.1f}\n", k, st.action, ag->fts.state_name(st.from),
                               ag->fts.state_name(st.to), st.duration);
        }
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct RunArgs {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::size_t cycles = 3;
    std::string out = "run_out";
    std::string delay;
    std::string latency;
    std::optional<double> max_time;
};

int cmd_run(const RunArgs& a, std::ostream& out)
{
    const auto s = resolve_scenario(a.scenario);
    sim::SimOptions opt;
    opt.cycles = a.cycles;
    opt.seed = a.seed;
    opt.max_time = a.max_time;
    if (!a.delay.empty())
        opt.delays = sim::DelayConfig::all(parse_model(a.delay));
    if (!a.latency.empty())
        opt.latency = parse_model(a.latency);

    const auto r = sim::run_simulation(s, opt);
    const fs::path dir(a.out);
    fs::create_directories(dir);
    // Effective scenario: flags folded in, so the directory reproduces the run.
    auto effective = s;
    effective.seed = r.seed;
    if (opt.delays)
        effective.delays = *opt.delays;
    if (opt.latency)
        effective.latency = *opt.latency;
    if (opt.max_time)
        effective.max_time = *opt.max_time;
    write_file(dir / "scenario.json", scenario::serialize_scenario(effective));
    write_file(dir / "trace.csv", sim::trace_csv(r));
    write_file(dir / "collaborations.csv", sim::collaborations_csv(r));
    write_file(dir / "report.json", sim::report_json(r));
    write_file(dir / "gantt.csv", gantt_csv(r));
    write_file(dir / "gantt.svg", gantt_svg(r));

    double max_spread = 0.0;
    for (const auto& c : r.collaborations)
        max_spread = std::max(max_spread, c.spread());
    out << fmt::format("scenario {} seed {}: stopped on {} at t={:.3f} after {} events\n", r.scenario, r.seed,
                       r.stop_reason, r.end_time, r.events);
    if (!r.diagnosis.empty())
        out << "  " << r.diagnosis << "\n";
    out << fmt::format("collaborations {} (unstarted {}), max start spread {:.6f}\n", r.collaborations.size(),
                       r.unstarted_collaborations(), max_spread);
    out << fmt::format("protocol violations {}, sentinel violations {}, double bookings {}\n", r.protocol_violations,
                       r.sentinel_violations, r.double_bookings);
    out << fmt::format("{:<16}{:>8}{:>8}{:>8}{:>10}{:>9}{:>9}{:>8}\n", "agent", "cycles", "hits", "steps", "requests",
                       "retries", "delay", "assists");
    for (const auto& ag : r.agents)
        out << fmt::format("{:<16}{:>8}{:>8}{:>8}{:>10}{:>9}{:>9.1f}{:>8}\n", ag.id, ag.cycles, ag.accepting_hits,
                           ag.steps, ag.requests, ag.retries, ag.added_delay, ag.assists);
    for (const auto& w : r.warnings)
        out << "warning: " << w << "\n";
    out << "artifacts in " << dir.string() << "\n";

    if (r.deadlocked())
        return kDeadlock;
    return r.stop_reason == "cycles" ? kOk : kUnsatisfied;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
    std::string agents = "10,50,150,350";
    std::string actions = "1,2,3";
    std::size_t trials = 5;
    std::uint64_t seed = 1;
    std::string out = "bench_out";
    bool no_timing = false;
};

int cmd_bench(const BenchArgs& a, std::ostream& out)
{
    BenchOptions opt;
    opt.agents = parse_list(a.agents);
    opt.actions = parse_list(a.actions);
    opt.trials = a.trials;
    opt.seed = a.seed;
    opt.timing = !a.no_timing;
    const auto cells = bench_filtering(opt);

    const fs::path dir(a.out);
    fs::create_directories(dir);
    write_file(dir / "filtering.csv", filtering_csv(cells));
    if (opt.timing)
        write_file(dir / "timing.csv", timing_csv(cells));

    out << fmt::format("{:>5}{:>3}{:>9}{:>7}{:>14}{:>14}{:>14}{:>10}\n", "N", "M", "kept", "equal", "unfiltered_s",
                       "filtered_s", "ingest_s", "ratio");
    bool ok = true;
    for (const auto& c : cells) {
        ok = ok && c.costs_equal && c.bound_ok;
        const double ratio = c.unfiltered > 0.0 ? c.filtered / c.unfiltered : 0.0;
        out << fmt::format("{:>5}{:>3}{:>9}{:>7}{:>14.3e}{:>14.3e}{:>14.3e}{:>10.4f}\n", c.N, c.M,
                           fmt::format("{}-{}", c.kept_min, c.kept_max), c.costs_equal ? "yes" : "NO", c.unfiltered,
                           c.filtered, c.ingest, ratio);
    }
    out << "artifacts in " << dir.string() << "\n";
    return ok ? kOk : kUnsatisfied;
}

// ---------------------------------------------------------------------------

struct ReportArgs {
    std::string trace;
    std::string scenario;
    std::size_t min_hits = 1;
};

int cmd_report(const ReportArgs& a, std::ostream& out)
{
    const fs::path trace(a.trace);
    scenario::Scenario s;
    if (!a.scenario.empty()) {
        s = resolve_scenario(a.scenario);
    } else if (fs::is_regular_file(trace.parent_path() / "scenario.json")) {
        s = scenario::load_scenario(trace.parent_path() / "scenario.json");
    } else {
        throw CLI::ValidationError("--scenario", "required when the trace has no sibling scenario.json");
    }
    const auto agents = scenario::compile(s);
    const auto rows = parse_trace_csv(read_file(trace));

    const auto verdicts = verify_trace(agents, rows, a.min_hits);
    out << fmt::format("{:<16}{:>8}{:>8}  {}\n", "agent", "steps", "hits", "verdict");
    bool all = true;
    for (const auto& v : verdicts) {
        all = all && v.satisfied;
        out << fmt::format("{:<16}{:>8}{:>8}  {}\n", v.agent, v.steps, v.hits,
                           v.satisfied ? "satisfied" : v.rejected ? "violated" : "unsatisfied");
    }

    const auto spreads = sync_spreads(rows);
    double max_spread = 0.0;
    out << fmt::format("\n{:<20}{:>14}{:>14}{:>12}\n", "collaboration", "participants", "start", "spread");
    for (const auto& sp : spreads) {
        max_spread = std::max(max_spread, sp.spread);
        out << fmt::format("{:<20}{:>14}{:>14.6f}{:>12.6f}\n", sp.collab_id, sp.participants, sp.start, sp.spread);
    }
    out << fmt::format("\n{} collaborations, max spread {:.6f}\n", spreads.size(), max_spread);
    return all ? kOk : kUnsatisfied;
}

} // namespace

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Plan, simulate and benchmark multi-agent temporal-logic task coordination", "ltlcoord"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", "ltlcoord 0.1.0");

    PlanArgs plan;
    auto* p = app.add_subcommand("plan", "Synthesize per-agent plans and print state counts");
    p->add_option("--scenario", plan.scenario, "Built-in name or scenario file")->required();
    p->add_option("--agent", plan.agent, "Only this agent");

    RunArgs run;
    auto* r = app.add_subcommand("run", "Simulate a scenario and write trace, collaboration and Gantt artifacts");
    r->add_option("--scenario", run.scenario, "Built-in name or scenario file")->required();
    r->add_option("--seed", run.seed, "RNG seed (default: the scenario's)");
    r->add_option("--cycles", run.cycles, "Plan cycles per agent")->capture_default_str()->check(CLI::PositiveNumber);
    r->add_option("--out", run.out, "Output directory")->capture_default_str();
    r->add_option("--delay", run.delay, "Action delay model for every step kind: none | fixed:X | uniform:LO:HI");
    r->add_option("--latency", run.latency, "Message latency model");
    r->add_option("--max-time", run.max_time, "Simulated time limit")->check(CLI::PositiveNumber);

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "Benchmarks");
    b->require_subcommand(1, 1);
    auto* bf = b->add_subcommand("filtering", "Assignment solve time with and without agent filtering");
    bf->add_option("--agents", bench.agents, "Comma-separated agent counts")->capture_default_str();
    bf->add_option("--actions", bench.actions, "Comma-separated assisting-action counts")->capture_default_str();
    bf->add_option("--trials", bench.trials, "Instances per cell")->capture_default_str()->check(CLI::PositiveNumber);
    bf->add_option("--seed", bench.seed, "Instance seed")->capture_default_str();
    bf->add_option("--out", bench.out, "Output directory")->capture_default_str();
    bf->add_flag("--no-timing", bench.no_timing, "Only the deterministic checks");

    ReportArgs report;
    auto* rp = app.add_subcommand("report", "Check a trace against the agents' tasks and list start spreads");
    rp->add_option("--trace", report.trace, "trace.csv written by run")->required()->check(CLI::ExistingFile);
    rp->add_option("--scenario", report.scenario, "Scenario (default: scenario.json next to the trace)");
    rp->add_option("--min-hits", report.min_hits, "Accepting visits required per agent")->capture_default_str();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(std::move(rev));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (p->parsed())
            return cmd_plan(plan, out);
        if (r->parsed())
            return cmd_run(run, out);
        if (bf->parsed())
            return cmd_bench(bench, out);
        return cmd_report(report, out);
    } catch (const scenario::ScenarioError& e) {
        err << "invalid scenario:\n";
        for (const auto& v : e.violations())
            err << "  " << v.to_string() << "\n";
        return kValidation;
    } catch (const CLI::Error& e) {
        err << e.what() << "\n";
        return kValidation;
    } catch (const planner::InfeasibleTask& e) {
        err << "infeasible task: " << e.what() << "\n";
        return kInfeasible;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUnsatisfied;
    }
}

} // namespace ltlcoord::cli
