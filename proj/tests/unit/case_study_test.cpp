#include "rcps/contract_parser.hpp"
#include "rcps/experiments.hpp"

#include <gtest/gtest.h>

using namespace rcps;
using namespace rcps::literals;

namespace
{
    std::vector<std::string> dispatch_lines(const RunLogs& logs)
    {
        std::vector<std::string> out;
        for (const auto& d : logs.dispatch)
        {
            out.push_back(d.to_line());
        }
        return out;
    }

    std::size_t count_transitions(const RunLogs& logs, const std::string& contract, const std::string& transition)
    {
        std::size_t n = 0;
        for (const auto& v : logs.verdicts)
        {
            n += (v.contract == contract && v.transition == transition) ? 1 : 0;
        }
        return n;
    }
} // namespace

TEST(CaseStudy, ComponentSetAndContractTexts)
{
    CaseStudyConfig cfg;
    const auto specs = case_study_components(cfg);
    std::vector<std::string> ids;
    for (const auto& s : specs)
    {
        ids.push_back(s.id);
    }
    EXPECT_EQ(ids, (std::vector<std::string>{"C1", "C2", "C3", "C4", "C5.E1", "C5.E2", "C5.E3", "C6", "C7"}));
    const Contract c1 = parse_contract(c1_contract_text(cfg));
    EXPECT_EQ(std::get<TimingGuarantee>(c1.guarantee), (TimingGuarantee{150.0, 10.0}));
    EXPECT_TRUE(validate_contract(parse_contract(c3_contract_text())).empty());
    EXPECT_TRUE(validate_contract(parse_contract(c6_contract_text())).empty());
    EXPECT_TRUE(validate_contract(parse_contract(c7_contract_text(cfg))).empty());
}

TEST(CaseStudy, Experiment1SortsTheRedPieceWithinTheDeadline)
{
    const Exp1Result r = run_experiment_1();
    EXPECT_EQ(r.beh1_cost, Time::from_ms(9.1));
    EXPECT_EQ(r.compute_send, Time::from_ms(9.72));
    ASSERT_TRUE(r.delay);
    EXPECT_NEAR(r.delay->ms(), 3800.0, 50.0);
    EXPECT_EQ(*r.delay, Time::from_ms(3760.72));
    EXPECT_TRUE(r.within_deadline);
    EXPECT_EQ(r.bin, 1);
    EXPECT_EQ(r.expected_bin, 1);
    EXPECT_TRUE(r.logs.verdicts.empty());
}

TEST(CaseStudy, Experiment1EveryColourReachesItsBin)
{
    for (Colour c : {Colour::red, Colour::blue, Colour::white})
    {
        Exp1Options o;
        o.colour = c;
        o.until = 10000_ms;
        const Exp1Result r = run_experiment_1(o);
        EXPECT_EQ(r.bin, colour_bin(c)) << colour_name(c);
        // Only E1 is close enough to LS0 for the end-to-end deadline.
        EXPECT_EQ(r.within_deadline, c == Colour::red) << colour_name(c);
    }
}

TEST(CaseStudy, Experiment2FollowsTheHandDerivedSchedule)
{
    const Exp2Result r = run_experiment_2();
    // Fault at 300 stretches the activation started at 300 to 559.2 ms.
    EXPECT_EQ(r.detected_at, 310_ms);
    EXPECT_EQ(r.switched_at, 310_ms);
    EXPECT_EQ(r.dropped_pulses, (std::vector<Time>{450_ms}));
    EXPECT_EQ(r.first_beh2_at, 600_ms);
    EXPECT_EQ(r.first_beh2_pulse, 5);
    EXPECT_EQ(r.recovered_at, 750_ms);
    EXPECT_FALSE(r.escalated_at);
    ASSERT_EQ(r.recovery.size(), 1u);
    EXPECT_DOUBLE_EQ(*r.recovery[0].period_from_fault_ms(), 450.0);
    EXPECT_DOUBLE_EQ(*r.recovery[0].period_from_detection_ms(), 440.0);
    EXPECT_EQ(r.final_count + 1, static_cast<std::int64_t>(r.true_steps));
    ASSERT_TRUE(r.report);
    EXPECT_GT(r.report->resilience, 0.97);
    EXPECT_LT(r.report->resilience, 1.0);
}

TEST(CaseStudy, Experiment2DroppedPulseMakesThePieceMissItsEjector)
{
    Exp2Options o;
    o.until = 8000_ms;
    const Exp2Result r = run_experiment_2(o);
    ASSERT_TRUE(r.piece_status);
    EXPECT_EQ(*r.piece_status, PieceStatus::missed);
}

TEST(CaseStudy, Experiment2WithoutFaultHasNoViolation)
{
    Exp2Options o;
    o.no_fault = true;
    o.until = 8000_ms;
    const Exp2Result r = run_experiment_2(o);
    EXPECT_FALSE(r.detected_at);
    EXPECT_TRUE(r.dropped_pulses.empty());
    EXPECT_EQ(r.final_count, static_cast<std::int64_t>(r.true_steps));
    ASSERT_TRUE(r.piece_status);
    EXPECT_EQ(*r.piece_status, PieceStatus::ejected);
}

TEST(CaseStudy, PermanentHeavySlowdownEscalatesOnce)
{
    Exp2Options o;
    o.permanent = true;
    o.factor = Rational{3, 1};
    o.piece_position.reset();
    o.until = 2000_ms;
    const Exp2Result r = run_experiment_2(o);
    EXPECT_EQ(r.detected_at, 310_ms);
    EXPECT_EQ(r.switched_at, 310_ms);
    EXPECT_EQ(r.escalated_at, 460_ms);
    EXPECT_FALSE(r.recovered_at);
    EXPECT_EQ(count_transitions(r.logs, "-", "escalate"), 1u);
}

TEST(CaseStudy, SameSeedGivesIdenticalLogs)
{
    Exp2Options o;
    o.seed = 99;
    const auto a = run_experiment_2(o);
    const auto b = run_experiment_2(o);
    EXPECT_EQ(dispatch_lines(a.logs), dispatch_lines(b.logs));
    EXPECT_EQ(a.logs.plant.size(), b.logs.plant.size());
}

TEST(CaseStudy, HundredSeededPiecesAllLandInTheirBins)
{
    CaseStudyConfig cfg;
    cfg.seed = 11;
    cfg.plant.pieces = seeded_pieces(100, 3, 150_ms, 11);
    auto sys = build_case_study(cfg);
    sys->run_until(55000_ms);
    std::size_t correct = 0;
    for (const auto& p : sys->plant().pieces())
    {
        correct += (p.status == PieceStatus::ejected && p.bin == p.expected_bin()) ? 1 : 0;
    }
    EXPECT_EQ(correct, 100u);
    EXPECT_EQ(count_transitions(collect_logs(*sys), "C3_colour", "flag"), 0u);
}

TEST(CaseStudy, StuckColourSensorFlagsExactlyTheAffectedPieces)
{
    CaseStudyConfig cfg;
    cfg.seed = 5;
    cfg.plant.pieces = seeded_pieces(100, 3, 150_ms, 5);
    const Time first_reading = cfg.plant.pieces[40].ls0_at + 150_ms * cfg.plant.geometry.colour_sensor;
    FaultSpec stuck;
    stuck.kind = FaultKind::transient;
    stuck.target = "CS";
    stuck.effect = FaultEffect::stuck_value;
    stuck.stuck_value = 600.0;
    stuck.t0 = first_reading - 100_ms;
    stuck.duration = 450_ms * 9 + 200_ms;
    cfg.faults = {stuck};
    auto sys = build_case_study(cfg);
    sys->run_until(55000_ms);
    const RunLogs logs = collect_logs(*sys);
    EXPECT_EQ(count_transitions(logs, "C3_colour", "flag"), 10u);
    std::size_t missed = 0;
    std::size_t correct = 0;
    const auto& pieces = sys->plant().pieces();
    for (std::size_t i = 0; i < pieces.size(); ++i)
    {
        const bool affected = i >= 40 && i < 50;
        if (affected)
        {
            missed += pieces[i].status == PieceStatus::missed ? 1 : 0;
        }
        else
        {
            correct += (pieces[i].status == PieceStatus::ejected && pieces[i].bin == pieces[i].expected_bin()) ? 1 : 0;
        }
    }
    EXPECT_EQ(missed, 10u);
    EXPECT_EQ(correct, 90u);
}

TEST(CaseStudy, RecoveryFixtureGivesFourHundredSixtyPointFive)
{
    const auto rec = recovery_period(recovery_fixture_verdicts(), recovery_fixture_faults());
    ASSERT_EQ(rec.size(), 1u);
    EXPECT_DOUBLE_EQ(*rec[0].period_from_fault_ms(), 460.5);
}
