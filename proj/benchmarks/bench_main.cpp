#include "ltlcoord/planner.hpp"
#include "ltlcoord/protocol.hpp"
#include "ltlcoord/scenario.hpp"
#include "ltlcoord/sim.hpp"

#include <benchmark/benchmark.h>

using namespace ltlcoord;

namespace {

void BM_SolveUnfiltered(benchmark::State& st)
{
    const auto N = static_cast<std::size_t>(st.range(0));
    const auto M = static_cast<std::size_t>(st.range(1));
    const auto pop = scenario::bench_filtering(N, M, 1);
    const auto inst = protocol::instance_from_replies(pop.request, pop.replies);
    for (auto _ : st)
        benchmark::DoNotOptimize(protocol::solve_assignment(inst));
}

void BM_SolveFiltered(benchmark::State& st)
{
    const auto N = static_cast<std::size_t>(st.range(0));
    const auto M = static_cast<std::size_t>(st.range(1));
    const auto pop = scenario::bench_filtering(N, M, 1);
    const auto fr = protocol::filter_agents(protocol::instance_from_replies(pop.request, pop.replies));
    for (auto _ : st)
        benchmark::DoNotOptimize(protocol::solve_assignment(fr.instance));
}

void BM_StreamingFilter(benchmark::State& st)
{
    const auto N = static_cast<std::size_t>(st.range(0));
    const auto M = static_cast<std::size_t>(st.range(1));
    const auto pop = scenario::bench_filtering(N, M, 1);
    for (auto _ : st) {
        protocol::StreamingFilter f(M);
        for (const auto& r : pop.replies)
            f.add(r, pop.request.T_c());
        benchmark::DoNotOptimize(f.result());
    }
}

void solver_args(benchmark::internal::Benchmark* b)
{
    for (int M : {1, 2, 3})
        for (int N : {10, 50, 150, 350})
            b->Args({N, M});
}

void BM_Synthesize(benchmark::State& st)
{
    const auto agents = scenario::compile(scenario::canopies_9());
    const auto& a = agents.at(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st)
        benchmark::DoNotOptimize(planner::synthesize(a.fts, a.nba));
    st.SetLabel(a.config.id);
}

void BM_RunCanopies(benchmark::State& st)
{
    const auto s = scenario::canopies_9();
    for (auto _ : st)
        benchmark::DoNotOptimize(sim::run_simulation(s, {}));
}

void BM_RunScale(benchmark::State& st)
{
    const auto s = scenario::scale_90(static_cast<std::size_t>(st.range(0)));
    sim::SimOptions o;
    o.cycles = 2;
    for (auto _ : st)
        benchmark::DoNotOptimize(sim::run_simulation(s, o));
}

} // namespace

BENCHMARK(BM_SolveUnfiltered)->Apply(solver_args);
BENCHMARK(BM_SolveFiltered)->Apply(solver_args);
BENCHMARK(BM_StreamingFilter)->Apply(solver_args);
BENCHMARK(BM_Synthesize)->DenseRange(0, 8);
BENCHMARK(BM_RunCanopies)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunScale)->Arg(1)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK_MAIN();
