#include "rcps/contract_parser.hpp"
#include "rcps/resilience_manager.hpp"

#include <gtest/gtest.h>

using namespace rcps;
using namespace rcps::literals;

namespace
{
    ContractBinding timing_binding()
    {
        return {parse_contract("contract C1_timing { input pulse : boolean guarantee timing every 150 ms within 10 ms }"),
                "pulse", "", ""};
    }

    ObservedEvent ev(ObsEventKind k) { return {k, {}}; }

    std::vector<std::string> transitions(const ResilienceManager& rm)
    {
        std::vector<std::string> out;
        for (const auto& r : rm.log())
        {
            out.push_back(r.to_line());
        }
        return out;
    }
} // namespace

TEST(ResilienceManager, ViolationSwitchesToNextBehaviourOnce)
{
    ResilienceManager rm("C1", {"Beh1", "Beh2"}, {timing_binding()});
    rm.observe(0, ev(ObsEventKind::sample), 300_ms);
    rm.advance(310_ms);
    const auto d = rm.rm_step(310_ms, "Beh1");
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d[0].kind, RmDecision::Kind::switch_behaviour);
    EXPECT_EQ(d[0].behaviour, "Beh2");
    EXPECT_EQ(d[1].kind, RmDecision::Kind::fault_message);
    EXPECT_EQ(d[1].note, "violation contract=C1_timing behaviour=Beh1 switch_to=Beh2");
    EXPECT_TRUE(rm.episode_open(0));
    EXPECT_TRUE(rm.blamed().contains("Beh1"));
    EXPECT_TRUE(rm.rm_step(320_ms, "Beh1").empty());
    EXPECT_EQ(transitions(rm), (std::vector<std::string>{"31000,C1,C1_timing,violated,missed_deadline",
                                                         "31000,C1,-,switch,Beh1->Beh2"}));
}

TEST(ResilienceManager, ProbeHoldingForOnePeriodClosesTheEpisode)
{
    ResilienceManager rm("C1", {"Beh1", "Beh2"}, {timing_binding()});
    rm.observe(0, ev(ObsEventKind::sample), 300_ms);
    rm.advance(310_ms);
    rm.rm_step(310_ms, "Beh1");
    EXPECT_EQ(rm.probe(0), nullptr);

    rm.on_activation_start(600_ms);
    ASSERT_NE(rm.probe(0), nullptr);
    rm.observe(0, ev(ObsEventKind::sample), 600_ms);
    rm.observe(0, ev(ObsEventKind::complete), Time::from_ms(600.2));
    EXPECT_EQ(rm.wakeups().back(), 750_ms);
    rm.advance(749_ms);
    EXPECT_TRUE(rm.rm_step(749_ms, "Beh2").empty());
    EXPECT_TRUE(rm.episode_open(0));
    rm.observe(0, ev(ObsEventKind::sample), 750_ms);
    rm.advance(750_ms);
    rm.rm_step(750_ms, "Beh2");
    EXPECT_FALSE(rm.episode_open(0));
    EXPECT_TRUE(rm.blamed().empty());
    EXPECT_EQ(rm.log().back().to_line(), "75000,C1,C1_timing,recovered,behaviour=Beh2");
    EXPECT_FALSE(rm.observer(0).verdict().violated());
}

TEST(ResilienceManager, ExhaustedPreferenceEscalatesOnlyOnce)
{
    ResilienceManager rm("C1", {"Beh1", "Beh2"}, {timing_binding()});
    rm.observe(0, ev(ObsEventKind::sample), 300_ms);
    rm.advance(310_ms);
    rm.rm_step(310_ms, "Beh1");
    std::size_t escalations = 0;
    Time t = 450_ms;
    for (int round = 0; round < 4; ++round)
    {
        rm.on_activation_start(t);
        rm.observe(0, ev(ObsEventKind::sample), t);
        rm.advance(t + 10_ms);
        for (const auto& d : rm.rm_step(t + 10_ms, "Beh2"))
        {
            escalations += d.kind == RmDecision::Kind::escalate ? 1 : 0;
            EXPECT_NE(d.kind, RmDecision::Kind::switch_behaviour);
        }
        t += 150_ms;
    }
    EXPECT_EQ(escalations, 1u);
    std::size_t probe_violations = 0;
    for (const auto& r : rm.log())
    {
        probe_violations += r.detail == "missed_deadline probe" ? 1 : 0;
    }
    EXPECT_EQ(probe_violations, 4u);
}

TEST(ResilienceManager, DataContractFlagsReadingsAndRecoversOnConformingSample)
{
    ContractBinding b{parse_contract("contract C3 { output colour : real guarantee member colour in [750, 755] | "
                                     "[535, 558] }"),
                      "", "", ""};
    ResilienceManager rm("C3", {"Main", "Backup"}, {b});
    rm.observe(0, {ObsEventKind::sample, {{"colour", 600.0}}}, 10_ms);
    const auto d = rm.rm_step(10_ms, "Main");
    ASSERT_FALSE(d.empty());
    EXPECT_EQ(rm.log()[0].to_line(), "1000,C3,C3,flag,colour=600");
    rm.on_activation_start(20_ms);
    rm.observe(0, {ObsEventKind::sample, {{"colour", 752.0}}}, 20_ms);
    rm.rm_step(20_ms, "Backup");
    EXPECT_FALSE(rm.episode_open(0));
}

TEST(ResilienceManager, FaultMessagesFollowThePolicy)
{
    ResilienceManager logger("C1", {"Beh1", "Beh2"}, {timing_binding()});
    EXPECT_TRUE(logger.on_fault_message("fault/N1 down", 5_ms, "Beh1").empty());
    EXPECT_EQ(logger.log().back().transition, "fault_in");

    ResilienceManager switcher("C1", {"Beh1", "Beh2"}, {timing_binding()}, FaultInPolicy::switch_next);
    const auto d = switcher.on_fault_message("fault/N1 down", 5_ms, "Beh1");
    ASSERT_FALSE(d.empty());
    EXPECT_EQ(d[0].behaviour, "Beh2");
    EXPECT_THROW(ResilienceManager("C1", {}, {}), ComponentError);
}

TEST(ResilienceManager, WakeupsFollowThePrimaryObserver)
{
    ResilienceManager rm("C1", {"Beh1", "Beh2"}, {timing_binding()});
    EXPECT_TRUE(rm.wakeups().empty());
    rm.observe(0, ev(ObsEventKind::sample), 100_ms);
    EXPECT_EQ(rm.wakeups(), (std::vector<Time>{110_ms}));
    rm.observe(0, ev(ObsEventKind::complete), 101_ms);
    EXPECT_EQ(rm.wakeups(), (std::vector<Time>{250_ms}));
    EXPECT_EQ(rm.dump(101_ms).size(), 1u);
}
