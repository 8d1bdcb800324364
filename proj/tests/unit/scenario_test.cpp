#include "rcps/scenario.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace rcps;
using namespace rcps::literals;

namespace
{
    const std::filesystem::path kScenarios = std::filesystem::path(RCPS_SOURCE_DIR) / "scenarios";

    std::string faulted(const std::string& fault_body)
    {
        return R"({"faults": [)" + fault_body + "]}";
    }
} // namespace

TEST(Scenario, PresetsAreKnown)
{
    EXPECT_TRUE(is_preset("exp1"));
    EXPECT_TRUE(is_preset("exp2"));
    EXPECT_FALSE(is_preset("exp3"));
    EXPECT_THROW(preset_scenario("exp3"), ScenarioError);
    const Scenario s = preset_scenario("exp2");
    EXPECT_EQ(s.experiment, "exp2");
    EXPECT_EQ(s.until, 4000_ms);
    EXPECT_FALSE(s.stochastic());
    ASSERT_EQ(s.config.faults.size(), 1u);
    EXPECT_EQ(s.config.faults[0].factor, (Rational{2592, 91}));
}

TEST(Scenario, ParsesEverySection)
{
    const Scenario s = parse_scenario(R"({
        "name": "full",
        "run": {"until_ms": 1200.5, "seed": 3},
        "nodes": ["N4"],
        "platform_links": ["L1"],
        "mapping": {"C6": "N4"},
        "exec_cost": [{"component": "C6", "behaviour": "Main", "ms": 0.25}],
        "comm_cost": [{"edge": "C1->C6", "behaviour": "Beh1", "ms": 1}],
        "faults": [{"kind": "intermittent", "target": "L1", "t0_ms": 0, "up_ms": 50, "down_ms": 5},
                   {"kind": "transient", "target": "N1", "t0_ms": 300, "duration_ms": 100,
                    "effect": "slowdown", "factor": "2592/91"},
                   {"kind": "permanent", "target": "CS", "t0_ms": 10, "effect": "stuck_value", "stuck_value": 1}],
        "plant": {"step_period_ms": 150, "pieces": [{"colour": "white", "ls0_ms": -300}],
                  "random_pieces": {"count": 4, "spacing_steps": 5, "first_ms": 150, "seed": 2},
                  "bounce": {"probability": 0.1, "window_ms": 1, "max_edges": 2},
                  "pressure": {"enabled": true, "k1": -0.4, "k2": 90, "window_ms": 200, "sample_ms": 5}},
        "topics": [{"name": "motorSteps", "domain": "steps:int", "deadline_ms": 200, "latency_budget_ms": 5}],
        "default_link": {"base_latency_ms": 0.1},
        "links": [{"publisher": "C1", "subscriber": "C4", "jitter_ms": 0.2, "drop_prob": 0.01,
                   "platform_link": "L1"}],
        "stimuli": [{"at_ms": 5, "component": "C6", "event": "motorStep", "data": {"steps": 4, "ok": true}}],
        "demand": {"target": "N4", "changes": [[0, 1], [600, 0.5]]},
        "degraded_availability": "up",
        "runtime": {"scan_period_ms": 10, "observer_dumps": true},
        "c1_deadline_ms": 12
    })");
    EXPECT_EQ(s.name, "full");
    EXPECT_EQ(s.until, Time::from_ms(1200.5));
    EXPECT_EQ(s.seed, 3u);
    EXPECT_EQ(s.config.extra_nodes, (std::vector<std::string>{"N4"}));
    EXPECT_EQ(s.config.mapping.at("C6"), "N4");
    ASSERT_EQ(s.config.faults.size(), 3u);
    EXPECT_EQ(s.config.faults[0].kind, FaultKind::intermittent);
    EXPECT_EQ(s.config.faults[1].factor, (Rational{2592, 91}));
    EXPECT_EQ(s.config.faults[2].effect, FaultEffect::stuck_value);
    EXPECT_EQ(s.config.plant.pieces.size(), 5u);
    EXPECT_EQ(s.config.plant.pieces[0].ls0_at, Time::zero() - 300_ms);
    EXPECT_TRUE(s.config.plant.pressure.enabled);
    EXPECT_EQ(s.config.topics.at(0).qos.deadline, 200_ms);
    EXPECT_EQ(s.config.links.at(0).link.platform_link, "L1");
    ASSERT_EQ(s.config.stimuli.size(), 1u);
    EXPECT_EQ(as_int(s.config.stimuli[0].data.at("steps")), 4);
    EXPECT_EQ(s.demand_target, "N4");
    EXPECT_EQ(s.demand.size(), 2u);
    EXPECT_EQ(s.config.degraded_policy, DegradedAvailability::up);
    EXPECT_EQ(s.config.runtime.scan_period, 10_ms);
    EXPECT_EQ(s.config.c1_deadline, 12_ms);
    EXPECT_TRUE(s.stochastic());
}

TEST(Scenario, RejectsMalformedDocuments)
{
    EXPECT_THROW(parse_scenario("{"), ScenarioError);
    EXPECT_THROW(parse_scenario("[]"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"colour": 1})"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"run": {"until": 5}})"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"run": {"until_ms": "soon"}})"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"run": {"until_ms": 0.001}})"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"experiment": "exp9"})"), ScenarioError);
    EXPECT_THROW(parse_scenario(faulted(R"({"kind": "sometimes", "target": "N1", "t0_ms": 0})")), ScenarioError);
    EXPECT_THROW(parse_scenario(faulted(R"({"kind": "permanent", "t0_ms": 0})")), ScenarioError);
    EXPECT_THROW(parse_scenario(faulted(R"({"kind": "transient", "target": "N1", "t0_ms": 0})")), ScenarioError);
    EXPECT_THROW(parse_scenario(faulted(R"({"kind": "permanent", "target": "N1", "t0_ms": 0, "effect": "slowdown",
                                            "factor": "x/y"})")),
                 ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"default_link": {"drop_prob": 2}})"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"plant": {"pieces": [{"colour": "green", "ls0_ms": 0}]}})"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"demand": {"changes": [[0]]}})"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"degraded_availability": "half"})"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"stimuli": [{"at_ms": 1, "component": "C1", "event": "pulse",
                                                 "data": {"x": [1]}}]})"),
                 ScenarioError);
    EXPECT_THROW(load_scenario_file(kScenarios / "does_not_exist.json"), ScenarioError);
}

TEST(Scenario, ExperimentKeyLoadsThePresetWithoutItsSeed)
{
    const Scenario s = parse_scenario(R"({"experiment": "exp2", "run": {"until_ms": 1000}})");
    EXPECT_EQ(s.experiment, "exp2");
    EXPECT_FALSE(s.seed);
    EXPECT_EQ(s.until, 1000_ms);
    EXPECT_EQ(s.config.faults.size(), 1u);
}

TEST(Scenario, StochasticScenarioNeedsASeed)
{
    const Scenario s = load_scenario_file(kScenarios / "jitter_link.json");
    EXPECT_TRUE(s.stochastic());
    EXPECT_FALSE(s.seed);
    EXPECT_THROW(run_scenario(s), ScenarioError);
    const auto a = run_scenario(s, 4);
    const auto b = run_scenario(s, 4);
    ASSERT_EQ(a.logs.deliveries.size(), b.logs.deliveries.size());
    EXPECT_EQ(a.logs.deliveries, b.logs.deliveries);
    EXPECT_EQ(a.summary[0], "scenario jittery-network until 6000.0 ms seed 4");
}

TEST(Scenario, DeterministicScenarioDefaultsToSeedZero)
{
    Scenario s = parse_scenario(R"({"name": "quiet", "run": {"until_ms": 600}})");
    EXPECT_FALSE(s.stochastic());
    const auto out = run_scenario(s);
    EXPECT_EQ(out.summary[0], "scenario quiet until 600.0 ms seed 0");
    EXPECT_TRUE(out.failed_checks.empty());
}

TEST(Scenario, PresetChecksPass)
{
    for (const char* name : {"exp1", "exp2"})
    {
        const auto out = run_scenario(preset_scenario(name));
        EXPECT_TRUE(out.failed_checks.empty()) << name << ": " << (out.failed_checks.empty() ? "" : out.failed_checks[0]);
    }
}

TEST(Scenario, BundledScenarioFilesParse)
{
    std::size_t n = 0;
    for (const auto& entry : std::filesystem::directory_iterator(kScenarios))
    {
        if (entry.path().extension() == ".json")
        {
            EXPECT_NO_THROW(load_scenario_file(entry.path())) << entry.path();
            ++n;
        }
    }
    EXPECT_GE(n, 5u);
}

TEST(Scenario, InvalidWiringIsReportedAtRunTime)
{
    const Scenario s = parse_scenario(R"({"mapping": {"C1": "N9"}, "run": {"until_ms": 10}})");
    EXPECT_THROW(run_scenario(s), ScenarioError);
}
