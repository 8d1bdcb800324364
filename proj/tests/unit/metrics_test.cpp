#include "rcps/metrics.hpp"
#include "rcps/rng.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <sstream>

using namespace rcps;
using namespace rcps::literals;
using rcps::oracle::random_trace;

namespace
{
    // Left Riemann sum at single-tick resolution, which is exact for a step function.
    double riemann(const StepTrace& t, Time from, Time to)
    {
        double sum = 0.0;
        for (auto k = from.ticks(); k < to.ticks(); ++k)
        {
            sum += t.value_at(Time::from_ticks(k));
        }
        return sum;
    }
} // namespace

TEST(StepTrace, RejectsMalformedSegments)
{
    EXPECT_THROW(StepTrace({Segment{5_tick, 5_tick, 0.5}}), MetricError);
    EXPECT_THROW(StepTrace({Segment{0_tick, 5_tick, 1.5}}), MetricError);
    EXPECT_THROW(StepTrace({Segment{0_tick, 5_tick, 0.5}, Segment{6_tick, 8_tick, 0.5}}), MetricError);
    EXPECT_THROW((void)StepTrace().start(), MetricError);
}

TEST(StepTrace, ValueLookupUsesHalfOpenSegments)
{
    const auto t = StepTrace::from_changes({{0_tick, 1.0}, {10_tick, 0.25}, {10_tick, 0.5}, {20_tick, 0.0}}, 30_tick);
    ASSERT_EQ(t.segments().size(), 3u);
    EXPECT_EQ(t.value_at(9_tick), 1.0);
    EXPECT_EQ(t.value_at(10_tick), 0.5);
    EXPECT_EQ(t.value_at(29_tick), 0.0);
    EXPECT_THROW((void)t.value_at(30_tick), MetricError);
}

TEST(StepTrace, IntegralMatchesRiemannSum)
{
    Rng rng(5);
    for (int n = 0; n < 200; ++n)
    {
        const auto t = random_trace(rng, 400_tick, 1 + static_cast<int>(rng.uniform_int(0, 8)));
        const Time a = Time::from_ticks(rng.uniform_int(0, 399));
        const Time b = Time::from_ticks(rng.uniform_int(a.ticks() + 1, 400));
        EXPECT_NEAR(t.integral(a, b), riemann(t, a, b), 1e-9);
    }
}

TEST(StepTrace, CompactionMergesEqualNeighbours)
{
    const StepTrace t({Segment{0_tick, 5_tick, 1.0}, Segment{5_tick, 8_tick, 1.0}, Segment{8_tick, 9_tick, 0.5}});
    const auto c = t.compacted();
    ASSERT_EQ(c.segments().size(), 2u);
    EXPECT_EQ(c.segments()[0], (Segment{0_tick, 8_tick, 1.0}));
}

TEST(Metrics, SixSegmentPairFollowsEachBranch)
{
    // (a, d) per segment and the hand-evaluated p and u.
    const std::vector<std::tuple<double, double, double, double>> rows{
        {1.0, 1.0, 1.0, 1.0},   // a = d
        {0.5, 1.0, 0.5, 1.0},   // shortage: p = a/d
        {1.0, 0.25, 1.0, 0.25}, // surplus: u = d/a
        {0.0, 0.5, 0.0, 1.0},   // outage under demand
        {0.0, 0.0, 1.0, 1.0},   // nothing needed, nothing offered
        {0.8, 0.0, 1.0, 0.0},   // idle resource
    };
    std::vector<Segment> a;
    std::vector<Segment> d;
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        const Time s = Time::from_ticks(static_cast<std::int64_t>(i) * 10);
        const Time e = s + 10_tick;
        a.push_back(Segment{s, e, std::get<0>(rows[i])});
        d.push_back(Segment{s, e, std::get<1>(rows[i])});
    }
    const auto p = performance(StepTrace(a), StepTrace(d));
    const auto u = utilization(StepTrace(a), StepTrace(d));
    ASSERT_EQ(p.segments().size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        EXPECT_DOUBLE_EQ(p.segments()[i].value, std::get<2>(rows[i])) << "segment " << i;
        EXPECT_DOUBLE_EQ(u.segments()[i].value, std::get<3>(rows[i])) << "segment " << i;
    }
}

TEST(Metrics, CombineRefinesMisalignedBreakpoints)
{
    const auto a = StepTrace::from_changes({{0_tick, 1.0}, {7_tick, 0.5}}, 20_tick);
    const auto d = StepTrace::from_changes({{0_tick, 0.5}, {12_tick, 1.0}}, 20_tick);
    const auto p = performance(a, d);
    ASSERT_EQ(p.segments().size(), 3u);
    EXPECT_EQ(p.segments()[1], (Segment{7_tick, 12_tick, 1.0}));
    EXPECT_EQ(p.segments()[2], (Segment{12_tick, 20_tick, 0.5}));
    EXPECT_THROW(performance(a, StepTrace::constant(0_tick, 19_tick, 1.0)), MetricError);
}

TEST(Metrics, RandomTracesKeepPerformanceAndUtilizationInUnitRange)
{
    Rng rng(2024);
    for (int n = 0; n < 10000; ++n)
    {
        const auto a = random_trace(rng, 1000_tick, 1 + static_cast<int>(rng.uniform_int(0, 6)));
        const auto d = random_trace(rng, 1000_tick, 1 + static_cast<int>(rng.uniform_int(0, 6)));
        const auto p = performance(a, d);
        const auto u = utilization(a, d);
        for (std::size_t i = 0; i < p.segments().size(); ++i)
        {
            const auto& ps = p.segments()[i];
            const double av = a.value_at(ps.start);
            const double dv = d.value_at(ps.start);
            const double uv = u.segments()[i].value;
            ASSERT_GE(ps.value, 0.0);
            ASSERT_LE(ps.value, 1.0);
            ASSERT_GE(uv, 0.0);
            ASSERT_LE(uv, 1.0);
            ASSERT_EQ(ps.value == 1.0 && uv == 1.0, av == dv);
        }
    }
}

TEST(Metrics, ResilienceOfTwoThirdsPerformance)
{
    const auto norm = StepTrace::constant(0_tick, 3000_tick, 1.0);
    const auto fault = StepTrace::constant(0_tick, 3000_tick, 2.0 / 3.0);
    EXPECT_NEAR(resilience(fault, norm, 0_tick, 3000_tick), 0.6667, 1e-4);
    EXPECT_NEAR(resilience(fault, norm, 100_tick, 2000_tick), 2.0 / 3.0, 1e-9);
    EXPECT_DOUBLE_EQ(resilience(norm, norm, 0_tick, 3000_tick), 1.0);
    EXPECT_DOUBLE_EQ(resilience(StepTrace::constant(0_tick, 3000_tick, 0.0), norm, 0_tick, 3000_tick), 0.0);
}

TEST(Metrics, ResilienceHandlesZeroNormalPerformance)
{
    const auto zero = StepTrace::constant(0_tick, 10_tick, 0.0);
    EXPECT_DOUBLE_EQ(resilience(zero, zero, 0_tick, 10_tick), 1.0);
    EXPECT_THROW(resilience(StepTrace::constant(0_tick, 10_tick, 0.5), zero, 0_tick, 10_tick), MetricError);
    EXPECT_THROW(resilience(zero, zero, 5_tick, 5_tick), MetricError);
    EXPECT_THROW(resilience(zero, zero, 0_tick, 11_tick), MetricError);
}

TEST(Metrics, RecoveryPeriodOnFixtureTimeline)
{
    const std::vector<VerdictRecord> v{
        {Time::from_ms(310), "C1", "C1_timing", "violated", "missed_deadline"},
        {Time::from_ms(310), "C1", "-", "switch", "Beh1->Beh2"},
        {Time::from_ms(760.5), "C1", "C1_timing", "recovered", "behaviour=Beh2"},
    };
    const std::vector<FaultRecord> f{{Time::from_ms(300), "N1", "begin", "transient", "slowdown"}};
    const auto rec = recovery_period(v, f);
    ASSERT_EQ(rec.size(), 1u);
    EXPECT_EQ(rec[0].period_from_fault_ms(), 460.5);
    EXPECT_EQ(rec[0].period_from_detection_ms(), 450.5);
}

TEST(Metrics, TwoDisjointEpisodesGiveTwoRecords)
{
    const std::vector<VerdictRecord> v{
        {100_ms, "C1", "T", "violated", ""}, {105_ms, "C1", "T", "violated", "probe"},
        {200_ms, "C1", "T", "recovered", ""}, {500_ms, "C1", "T", "violated", ""},
        {650_ms, "C1", "T", "recovered", ""}, {700_ms, "C3", "M", "violated", ""},
    };
    const std::vector<FaultRecord> f{{90_ms, "N1", "begin", "transient", "down"},
                                     {95_ms, "N1", "end", "transient", "down"},
                                     {480_ms, "N1", "begin", "transient", "down"}};
    const auto rec = recovery_period(v, f);
    ASSERT_EQ(rec.size(), 3u);
    EXPECT_EQ(rec[0].period_from_fault_ms(), 110.0);
    EXPECT_EQ(rec[1].period_from_fault_ms(), 170.0);
    EXPECT_EQ(rec[1].period_from_detection_ms(), 150.0);
    EXPECT_FALSE(rec[2].recovered_at.has_value());
    EXPECT_FALSE(rec[2].period_from_detection_ms().has_value());
    EXPECT_THROW(recovery_period({}, f), MetricError);
}

TEST(Metrics, RecoveryWithoutFaultRecordHasNoFaultTime)
{
    const std::vector<VerdictRecord> v{{10_ms, "C3", "M", "violated", ""}, {20_ms, "C3", "M", "recovered", ""}};
    const auto rec = recovery_period(v, {});
    EXPECT_FALSE(rec[0].fault_at.has_value());
    EXPECT_FALSE(rec[0].period_from_fault_ms().has_value());
    EXPECT_EQ(rec[0].period_from_detection_ms(), 10.0);
}

TEST(Metrics, ReportRoundTripsThroughJsonAndTraceFiles)
{
    const auto a = StepTrace::from_changes({{0_tick, 1.0}, {30000_tick, 91.0 / 2592.0}, {40000_tick, 1.0}}, 400000_tick);
    const auto d = StepTrace::constant(0_tick, 400000_tick, 0.7);
    const std::vector<VerdictRecord> v{{310_ms, "C1", "C1_timing", "violated", ""},
                                       {750_ms, "C1", "C1_timing", "recovered", ""}};
    const std::vector<FaultRecord> f{{300_ms, "N1", "begin", "transient", "slowdown"}};
    const auto report = compute_report(a, d, std::nullopt, v, f);
    EXPECT_EQ(report_from_json(report_to_json(report)), report);

    std::stringstream buf;
    write_trace(buf, a);
    EXPECT_EQ(read_trace(buf), a);
    std::stringstream empty;
    EXPECT_THROW(read_trace(empty), MetricError);
    std::stringstream bad("0,10,zz\n");
    EXPECT_THROW(read_trace(bad), MetricError);
}

TEST(Metrics, ReportUsesFaultFreePerformanceAsDefaultNorm)
{
    const auto a = StepTrace::from_changes({{0_tick, 1.0}, {50_tick, 0.0}}, 100_tick);
    const auto d = StepTrace::constant(0_tick, 100_tick, 0.5);
    const auto r = compute_report(a, d, std::nullopt, {}, {});
    EXPECT_DOUBLE_EQ(r.resilience, 0.5);
    EXPECT_TRUE(r.recovery.empty());
}
