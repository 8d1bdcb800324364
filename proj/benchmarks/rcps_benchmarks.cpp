#include "rcps/experiments.hpp"
#include "rcps/kernel.hpp"
#include "rcps/metrics.hpp"
#include "rcps/observer.hpp"
#include "rcps/rng.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>
#include <utility>
#include <vector>

using namespace rcps;
using namespace rcps::literals;

namespace
{
    void BM_KernelDispatch(benchmark::State& state)
    {
        const auto n = state.range(0);
        for (auto _ : state)
        {
            Kernel k(1);
            k.set_logging(false);
            std::int64_t fired = 0;
            for (std::int64_t i = 0; i < n; ++i)
            {
                k.schedule(Time::from_ticks((i * 7919) % 100000), "T", "tick", "", [&fired] { ++fired; });
            }
            k.run_until(Time::from_ticks(100000));
            benchmark::DoNotOptimize(fired);
        }
        state.SetItemsProcessed(state.iterations() * n);
    }
    BENCHMARK(BM_KernelDispatch)->Arg(1000)->Arg(100000);

    void BM_TimedObserverStep(benchmark::State& state)
    {
        Contract c;
        c.id = "T";
        c.inputs = {{"in", PortDomain::boolean, Direction::in}};
        c.guarantee = TimingGuarantee{150.0, 10.0};
        TimedObserver obs("T", c);
        Time t = Time::zero();
        bool sample = true;
        for (auto _ : state)
        {
            t += sample ? 145_ms : 5_ms;
            obs.step_event({sample ? ObsEventKind::sample : ObsEventKind::complete, {}}, t);
            sample = !sample;
        }
        benchmark::DoNotOptimize(obs.verdict());
    }
    BENCHMARK(BM_TimedObserverStep);

    void BM_HybridObserverSecond(benchmark::State& state)
    {
        Contract c;
        c.id = "E";
        c.inputs = {{"p", PortDomain::real, Direction::in}};
        c.guarantee = EnvelopeGuarantee{"p", -0.5, 100.0, 0.05};
        for (auto _ : state)
        {
            HybridObserver obs("E", c);
            obs.step_event({ObsEventKind::start, {}}, Time::zero());
            obs.advance_time(1000_ms);
            benchmark::DoNotOptimize(obs.expected());
        }
    }
    BENCHMARK(BM_HybridObserverSecond);

    void BM_PerformanceCombine(benchmark::State& state)
    {
        const auto n = state.range(0);
        Rng rng(5);
        std::vector<std::pair<Time, double>> a{{Time::zero(), 1.0}};
        std::vector<std::pair<Time, double>> d{{Time::zero(), 0.5}};
        for (std::int64_t i = 1; i < n; ++i)
        {
            a.emplace_back(Time::from_ticks(i * 10), rng.unit());
            d.emplace_back(Time::from_ticks(i * 10 + 5), rng.unit());
        }
        const Time end = Time::from_ticks(n * 10 + 10);
        const auto at = StepTrace::from_changes(a, end);
        const auto dt = StepTrace::from_changes(d, end);
        for (auto _ : state)
        {
            benchmark::DoNotOptimize(performance(at, dt));
        }
        state.SetItemsProcessed(state.iterations() * n);
    }
    BENCHMARK(BM_PerformanceCombine)->Arg(100)->Arg(10000);

    void BM_Experiment1(benchmark::State& state)
    {
        for (auto _ : state)
        {
            benchmark::DoNotOptimize(run_experiment_1());
        }
    }
    BENCHMARK(BM_Experiment1)->Unit(benchmark::kMillisecond);

    void BM_Experiment2(benchmark::State& state)
    {
        for (auto _ : state)
        {
            benchmark::DoNotOptimize(run_experiment_2());
        }
    }
    BENCHMARK(BM_Experiment2)->Unit(benchmark::kMillisecond);
} // namespace
BENCHMARK_MAIN();
