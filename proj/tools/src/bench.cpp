#include "bench.hpp"

#include "ltlcoord/protocol.hpp"
#include "ltlcoord/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>

namespace ltlcoord::cli {
namespace {

volatile double g_sink = 0.0;

// Seconds per call of f, with enough repetitions to cover about a millisecond.
template <class F>
double time_per_call(F&& f)
{
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    g_sink = g_sink + f();
    const double once = std::chrono::duration<double>(clock::now() - t0).count();
    const std::size_t reps = once >= 1e-3 ? 1 : std::min<std::size_t>(1000000, static_cast<std::size_t>(1e-3 / std::max(once, 1e-9)) + 1);
    t0 = clock::now();
    for (std::size_t r = 0; r < reps; ++r)
        g_sink = g_sink + f();
    return std::chrono::duration<double>(clock::now() - t0).count() / static_cast<double>(reps);
}

double median(std::vector<double> v)
{
    if (v.empty())
        return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

std::vector<BenchCell> bench_filtering(const BenchOptions& opt)
{
    std::vector<BenchCell> cells;
    for (std::size_t M : opt.actions) {
        for (std::size_t N : opt.agents) {
            BenchCell cell;
            cell.N = N;
            cell.M = M;
            cell.trials = opt.trials;
            cell.kept_min = N;
            std::vector<double> tu, tf, ti;
            double cost_sum = 0.0;
            for (std::size_t trial = 0; trial < opt.trials; ++trial) {
                const std::uint64_t seed = opt.seed * 1000003ULL + N * 1009ULL + M * 101ULL + trial;
                const auto pop = scenario::bench_filtering(N, M, seed);
                const double T_c = pop.request.T_c();
                const auto full = protocol::instance_from_replies(pop.request, pop.replies);

                auto ingest = [&] {
                    protocol::StreamingFilter f(M);
                    for (const auto& r : pop.replies)
                        f.add(r, T_c);
                    return f;
                };
                const protocol::StreamingFilter filter = ingest();
                const auto fr = filter.result();
                const auto a_full = protocol::solve_assignment(full);
                const auto a_filt = protocol::solve_assignment(fr.instance);

                const std::size_t kept = fr.instance.size();
                cell.kept_min = std::min(cell.kept_min, kept);
                cell.kept_max = std::max(cell.kept_max, kept);
                cell.bound_ok = cell.bound_ok && kept >= M && kept <= M * M;
                cell.costs_equal = cell.costs_equal && a_full.feasible == a_filt.feasible && a_full.cost == a_filt.cost;
                cost_sum += a_full.cost;

                if (opt.timing) {
                    tu.push_back(time_per_call([&] { return protocol::solve_assignment(full).cost; }));
                    tf.push_back(time_per_call([&] { return protocol::solve_assignment(fr.instance).cost; }));
                    ti.push_back(time_per_call([&] { return static_cast<double>(ingest().result().instance.size()); }));
                }
            }
            cell.mean_cost = opt.trials ? cost_sum / static_cast<double>(opt.trials) : 0.0;
            cell.unfiltered = median(tu);
            cell.filtered = median(tf);
            cell.ingest = median(ti);
            cells.push_back(cell);
        }
    }
    return cells;
}

std::string filtering_csv(const std::vector<BenchCell>& cells)
{
    std::string out = "N,M,trials,kept_min,kept_max,bound_ok,costs_equal,mean_cost\n";
    for (const auto& c : cells)
        out += fmt::format("{},{},{},{},{},{},{},{:.6f}\n", c.N, c.M, c.trials, c.kept_min, c.kept_max,
                           c.bound_ok ? 1 : 0, c.costs_equal ? 1 : 0, c.mean_cost);
    return out;
}

std::string timing_csv(const std::vector<BenchCell>& cells)
{
    std::string out = "N,M,unfiltered_s,filtered_s,ingest_s,ratio\n";
    for (const auto& c : cells) {
        const double ratio = c.unfiltered > 0.0 ? c.filtered / c.unfiltered : 0.0;
        out += fmt::format("{},{},{:.3e},{:.3e},{:.3e},{:.4f}\n", c.N, c.M, c.unfiltered, c.filtered, c.ingest, ratio);
    }
    return out;
}

} // namespace ltlcoord::cli
