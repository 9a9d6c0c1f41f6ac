// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include "oracles.hpp"

#include "bench.hpp"
#include "cli.hpp"
#include "report.hpp"

#include "ltlcoord/planner.hpp"
#include "ltlcoord/protocol.hpp"
#include "ltlcoord/scenario.hpp"
#include "ltlcoord/sim.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace ltlcoord;
namespace fs = std::filesystem;

namespace {

class Check {
public:
    void expect(bool ok, const std::string& what)
    {
        if (!ok && failures_.size() < 8)
            failures_.push_back(what);
        ok_ = ok_ && ok;
    }
    void note(const std::string& s) { notes_.push_back(s); }
    bool ok() const { return ok_; }
    const std::vector<std::string>& failures() const { return failures_; }
    const std::vector<std::string>& notes() const { return notes_; }

private:
    bool ok_ = true;
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

std::string fmt_double(double v, int prec = 3)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

struct Criterion {
    int id;
    const char* title;
    double budget_s;  // 0 = no runtime bound
    std::function<void(Check&)> body;
};

const scenario::Scenario& busy_helper()
{
    static const auto s = scenario::load_scenario(std::string(LTLCOORD_SOURCE_DIR) + "/scenarios/busy_helper.json");
    return s;
}

// Shared by criteria 4 and 5.
const sim::SimReport& canopies_run()
{
    static const auto r = sim::run_simulation(scenario::canopies_9(), {.cycles = 3});
    return r;
}

void c1_motion_counts(Check& c)
{
    const auto s = scenario::canopies_9();
    const auto* rosie = s.find_class("Rosie");
    const auto* bot = s.find_class("Turtlebot");
    c.expect(rosie && bot, "built-in classes present");
    if (!rosie || !bot)
        return;
    const auto rm = rosie->motion(rosie->rois.front().id);
    const auto tm = bot->motion(bot->rois.front().id);
    const auto rg = models::grid_state_count(6, 7);
    const auto tg = models::grid_state_count(20, 25);
    const auto rr = fmt_double(100.0 * models::reduction(rm.rois.size(), rg), 1);
    const auto tr = fmt_double(100.0 * models::reduction(tm.rois.size(), tg), 1);
    c.expect(rm.rois.size() == 8, "Rosie motion states " + std::to_string(rm.rois.size()));
    c.expect(tm.rois.size() == 18, "Turtlebot motion states " + std::to_string(tm.rois.size()));
    c.expect(rg == 42 && tg == 500, "grid comparators");
    c.expect(rr == "81.0", "Rosie reduction " + rr);
    c.expect(tr == "96.4", "Turtlebot reduction " + tr);
    c.note("Rosie 8/42 " + rr + "%, Turtlebot 18/500 " + tr + "%");
}

void c2_fts_and_products(Check& c)
{
    const auto agents = scenario::compile(scenario::canopies_9());
    std::string line;
    for (const auto& a : agents) {
        const bool rosie = a.config.cls == "Rosie";
        c.expect(a.fts.size() == (rosie ? 18u : 37u), a.config.id + " FTS size " + std::to_string(a.fts.size()));
        const auto p = planner::build_product(a.fts, a.nba);
        const double red = models::reduction(a.fts.size(), p.full_size);
        c.expect(red > 0.60, a.config.id + " reduction " + fmt_double(100 * red, 1) + "%");
        line += a.config.id + "=" + std::to_string(p.full_size) + "/" + std::to_string(p.size()) + " ";
    }
    c.note("product full/reachable: " + line);
}

void c3_filter_theorem(Check& c)
{
    oracle::Gen g(31337);
    std::size_t kept_max_ratio_hits = 0;
    for (int i = 0; i < 500; ++i) {
        const std::size_t M = 1 + g.below(4);
        const std::size_t N = M + g.below(31 - M);
        const auto inst = oracle::random_instance(g, N, M, true, i % 4 == 0);
        const auto fr = protocol::filter_agents(inst);
        const double brute = oracle::brute_force_assignment(inst);
        const double filtered = oracle::brute_force_assignment(fr.instance);
        c.expect(brute == filtered, "instance " + std::to_string(i) + ": " + fmt_double(brute) + " vs " +
                                        fmt_double(filtered));
        c.expect(fr.kept.size() >= M && fr.kept.size() <= M * M,
                 "instance " + std::to_string(i) + ": |N_F| = " + std::to_string(fr.kept.size()));
        c.expect(protocol::solve_assignment(fr.instance).cost == brute, "solver optimum on instance " +
                                                                             std::to_string(i));
        kept_max_ratio_hits += fr.kept.size() == M * M ? 1 : 0;
    }
    c.note("500 instances; |N_F| = M^2 in " + std::to_string(kept_max_ratio_hits));
}

void c4_synchronization(Check& c)
{
    const auto& r = canopies_run();
    c.expect(r.stop_reason == "cycles", "stop reason " + r.stop_reason + " " + r.diagnosis);
    c.expect(!r.collaborations.empty(), "no collaborations happened");
    std::size_t completed = 0;
    for (const auto& col : r.collaborations) {
        c.expect(col.started(), col.id + " confirmed but never started");
        if (col.started()) {
            ++completed;
            c.expect(col.spread() == 0.0, col.id + " spread " + fmt_double(col.spread(), 6));
        }
    }
    c.expect(r.protocol_violations == 0, "protocol violations");
    c.expect(r.double_bookings == 0, "double bookings");
    for (const auto& a : r.agents)
        c.expect(a.cycles >= 3, a.id + " closed " + std::to_string(a.cycles) + " cycles");
    c.note(std::to_string(completed) + " collaborations, all spread 0, end time " + fmt_double(r.end_time, 1));
}

void c5_task_satisfaction(Check& c)
{
    const auto& r = canopies_run();
    std::size_t modified = 0;
    for (const auto& a : r.agents) {
        c.expect(a.accepting_hits >= 3 && !a.monitor_rejected,
                 a.id + " hits " + std::to_string(a.accepting_hits));
        modified += (a.assists > 0 || a.retries > 0) ? 1 : 0;
    }
    c.expect(modified > 0, "no agent had its plan modified");

    // Independent replay of the written trace.
    const auto rows = cli::parse_trace_csv(sim::trace_csv(r));
    const auto verdicts = cli::verify_trace(scenario::compile(scenario::canopies_9()), rows, 3);
    std::size_t min_hits = 1000000;
    for (const auto& v : verdicts) {
        c.expect(v.satisfied, v.agent + " replay hits " + std::to_string(v.hits));
        min_hits = std::min(min_hits, v.hits);
    }
    c.note(std::to_string(modified) + " agents with detours or retries, min replay hits " +
           std::to_string(min_hits));
}

void c6_retry(Check& c)
{
    const auto r = sim::run_simulation(busy_helper(), {});
    const sim::AgentSummary* w = nullptr;
    for (const auto& a : r.agents)
        if (a.id == "worker_1")
            w = &a;
    c.expect(w != nullptr, "worker_1 missing");
    if (!w)
        return;
    const double T_delay = busy_helper().agents[1].t_delay.value_or(0.0);
    const sim::CollabRecord* first = nullptr;
    for (const auto& col : r.collaborations)
        if (col.requester == "worker_1" && !first)
            first = &col;
    c.expect(first && first->started(), "worker_1 collaboration never started");
    if (!first)
        return;
    c.expect(first->retries >= 1, "first collaboration needed no retry");
    const double k = w->added_delay / T_delay;
    c.expect(std::abs(k - std::round(k)) < 1e-9 && k >= 1 && k <= 5, "added delay " + fmt_double(w->added_delay));
    c.expect(first->spread() == 0.0, "spread " + fmt_double(first->spread(), 6));
    c.note("retries " + std::to_string(first->retries) + ", added delay " + fmt_double(w->added_delay, 1) +
           " = " + fmt_double(k, 0) + " x " + fmt_double(T_delay, 1));
}

void c7_filter_timing(Check& c)
{
    cli::BenchOptions o;
    o.trials = 5;
    const auto cells = cli::bench_filtering(o);
    std::map<std::size_t, std::vector<const cli::BenchCell*>> by_m;
    for (const auto& cell : cells) {
        c.expect(cell.costs_equal && cell.bound_ok, "cost or bound check failed at N=" + std::to_string(cell.N));
        c.expect(cell.filtered <= cell.unfiltered, "N=" + std::to_string(cell.N) + " M=" + std::to_string(cell.M) +
                                                       " filtered slower");
        by_m[cell.M].push_back(&cell);
    }
    std::string ratios;
    for (auto& [M, row] : by_m) {
        std::sort(row.begin(), row.end(), [](auto* a, auto* b) { return a->N < b->N; });
        double prev = 0.0;
        for (const auto* cell : row) {
            const double ratio = cell->unfiltered / cell->filtered;
            c.expect(ratio > prev, "ratio not increasing at M=" + std::to_string(M) + " N=" + std::to_string(cell->N));
            prev = ratio;
            ratios += fmt_double(ratio, 1) + " ";
            if (M == 1 && cell->N == 350) {
                c.expect(ratio >= 10.0, "M=1 N=350 speedup " + fmt_double(ratio, 1));
                c.note("M=1 N=350: unfiltered " + fmt_double(cell->unfiltered * 1e9, 0) + " ns, filtered " +
                       fmt_double(cell->filtered * 1e9, 0) + " ns");
            }
        }
        ratios += "| ";
    }
    c.note("ratios by M: " + ratios);
}

void c8_scale(Check& c)
{
    const auto r = sim::run_simulation(scenario::scale_90(), {.cycles = 2});
    c.expect(r.stop_reason == "cycles", "stop reason " + r.stop_reason + " " + r.diagnosis);
    c.expect(r.all_synchronized(), "unsynchronized collaboration");
    c.expect(r.unstarted_collaborations() == 0, "unstarted collaborations");
    c.expect(r.agents.size() == 90, "agent count");
    c.note(std::to_string(r.collaborations.size()) + " collaborations over 90 agents");
}

void c9_oracles(Check& c)
{
    using logic::PathFormula;
    std::size_t checks = 0;

    // Finite-word automata, depth <= 3, up to 3 props, words up to length 5.
    for (std::size_t np : {2, 3}) {
        std::vector<std::string> props{"a", "b", "c"};
        props.resize(np);
        const auto words = oracle::all_words(props, 0, 5);
        oracle::Gen g(100 + np);
        for (int i = 0; i < (np == 2 ? 150 : 12); ++i) {
            const auto f = g.formula(3, props);
            const auto nfa = logic::nfa_of(f);
            for (const auto& w : words) {
                c.expect(nfa.accepts(w) == oracle::holds_finite(f, w, 0), "NFA " + f.to_string());
                ++checks;
            }
        }
    }

    // Lassos: all |u|, |v| <= 4 over 2 props; sampled over 3.
    {
        const std::vector<std::string> props{"a", "b"};
        const auto us = oracle::all_words(props, 0, 4);
        const auto vs = oracle::all_words(props, 1, 4);
        oracle::Gen g(200);
        for (int i = 0; i < 6; ++i) {
            const auto f = g.recurring(2, props);
            const auto nba = logic::nba_of(f);
            for (const auto& u : us)
                for (const auto& v : vs) {
                    c.expect(logic::accepts_lasso(nba, u, v) == oracle::accepts_lasso(f, u, v), "NBA " + f.to_string());
                    ++checks;
                }
        }
        const std::vector<std::string> p3{"a", "b", "c"};
        for (int i = 0; i < 200; ++i) {
            const auto f = g.recurring(2, p3);
            const auto nba = logic::nba_of(f);
            for (int k = 0; k < 100; ++k) {
                const auto u = g.word(g.below(5), p3);
                const auto v = g.word(1 + g.below(4), p3);
                c.expect(logic::accepts_lasso(nba, u, v) == oracle::accepts_lasso(f, u, v), "NBA " + f.to_string());
                ++checks;
            }
        }
    }

    // Lasso planner against the full-product reference.
    {
        oracle::Gen g(300);
        std::size_t compared = 0;
        for (int i = 0; i < 2000 && compared < 400; ++i) {
            const auto t = oracle::random_toy(g);
            if (t.fts.size() * t.nba.num_states > 40)
                continue;
            const double ref = oracle::reference_lasso_cost(t.fts, t.nba);
            try {
                const auto plan = planner::synthesize(t.fts, t.nba);
                c.expect(std::abs(plan.prefix_cost + plan.suffix_cost - ref) < 1e-9,
                         "lasso cost " + t.task.to_string());
                c.expect(planner::plan_satisfies(t.fts, t.nba, plan), "plan violates " + t.task.to_string());
            } catch (const planner::InfeasibleTask&) {
                c.expect(std::isinf(ref), "reported infeasible: " + t.task.to_string());
            }
            ++compared;
        }
        c.expect(compared == 400, "only " + std::to_string(compared) + " small products");
        checks += compared;
    }

    // Dijkstra on the Turtlebot FTS against exhaustive walks.
    {
        const auto s = scenario::canopies_9();
        const auto* bot = s.find_class("Turtlebot");
        const auto fts = models::build_agent_fts(bot->motion("P1"), bot->action_model(1.0)).fts;
        c.expect(fts.size() == 37, "Turtlebot FTS size");
        for (std::size_t a = 0; a < fts.size(); ++a)
            for (std::size_t b = 0; b < fts.size(); ++b) {
                const auto sp = planner::dijkstra_with_costs(fts, a, b);
                c.expect(sp && sp->total() == oracle::bounded_walk_cost(fts, a, b, 4),
                         "Dijkstra " + fts.state_name(a) + " -> " + fts.state_name(b));
                ++checks;
            }
    }
    c.note(std::to_string(checks) + " comparisons");
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void c10_determinism(Check& c)
{
    const auto root = fs::temp_directory_path() / "ltlcoord_acceptance_det";
    fs::remove_all(root);
    const std::string busy = std::string(LTLCOORD_SOURCE_DIR) + "/scenarios/busy_helper.json";
    const std::vector<std::vector<std::string>> commands = {
        {"plan", "--scenario", "canopies_9"},
        {"run", "--scenario", "canopies_9", "--seed", "3", "--cycles", "3"},
        {"run", "--scenario", busy},
        {"run", "--scenario", "scale_90", "--cycles", "1"},
        {"bench", "filtering", "--agents", "10,50,150", "--actions", "1,2", "--trials", "3", "--no-timing"},
    };
    // Both runs use the same flags, so the same --out directory; artifacts
    // are snapshotted between them.
    std::size_t files = 0;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        std::string stdout_of[2];
        std::map<std::string, std::string> artifacts[2];
        const auto dir = root / std::to_string(i);
        for (int rep = 0; rep < 2; ++rep) {
            fs::remove_all(dir);
            auto args = commands[i];
            if (args[0] != "plan") {
                args.push_back("--out");
                args.push_back(dir.string());
            }
            std::ostringstream out, err;
            cli::execute(args, out, err);
            stdout_of[rep] = out.str();
            if (fs::exists(dir))
                for (const auto& e : fs::directory_iterator(dir))
                    artifacts[rep][e.path().filename().string()] = slurp(e.path());
        }
        c.expect(stdout_of[0] == stdout_of[1], "stdout differs for " + commands[i][0]);
        c.expect(artifacts[0].size() == artifacts[1].size(), commands[i][0] + " artifact sets differ");
        for (const auto& [name, bytes] : artifacts[0]) {
            c.expect(artifacts[1].contains(name) && artifacts[1].at(name) == bytes,
                     commands[i][0] + " artifact differs: " + name);
            ++files;
        }
    }
    fs::remove_all(root);
    c.note(std::to_string(commands.size()) + " commands, " + std::to_string(files) + " artifacts compared");
}

} // namespace

int main()
{
    const std::vector<Criterion> criteria = {
        {1, "motion state counts and grid reductions", 1.0, c1_motion_counts},
        {2, "agent FTS sizes and product reductions", 0.0, c2_fts_and_products},
        {3, "filtering preserves the optimum", 30.0, c3_filter_theorem},
        {4, "synchronized collaborations in canopies_9", 10.0, c4_synchronization},
        {5, "task satisfaction in the canopies_9 run", 0.0, c5_task_satisfaction},
        {6, "busy assister served after delay retries", 0.0, c6_retry},
        {7, "filtered confirmation solve timing", 0.0, c7_filter_timing},
        {8, "scale_90 with two cycles", 300.0, c8_scale},
        {9, "automata, planner and shortest-path oracles", 0.0, c9_oracles},
        {10, "byte-identical reruns", 0.0, c10_determinism},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        Check c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.body(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (cr.budget_s > 0.0)
            c.expect(secs < cr.budget_s, "took " + fmt_double(secs, 2) + " s, budget " + fmt_double(cr.budget_s, 0));
        std::printf("[%s] criterion %2d: %s (%.2f s)\n", c.ok() ? "PASS" : "FAIL", cr.id, cr.title, secs);
        for (const auto& n : c.notes())
            std::printf("      %s\n", n.c_str());
        for (const auto& f : c.failures())
            std::printf("      failure: %s\n", f.c_str());
        failed += c.ok() ? 0 : 1;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
