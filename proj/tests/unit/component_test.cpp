#include "rcps/component.hpp"

#include <gtest/gtest.h>

using namespace rcps;
using namespace rcps::literals;

namespace
{
    EccAction act(std::string kernel, std::map<std::string, std::string> params, std::vector<std::string> emits = {})
    {
        return EccAction{AlgorithmRef{std::move(kernel), std::move(params)}, std::move(emits)};
    }

    BehaviourSpec counting(std::string id, std::string step)
    {
        BehaviourSpec b;
        b.id = std::move(id);
        b.ecc.initial = "INIT";
        b.ecc.states = {{"INIT", {act("init", {{"steps", "0"}})}},
                        {"COUNT", {act("counter", {{"var", "steps"}, {"step", std::move(step)}}, {"motorStep"})}}};
        b.ecc.transitions = {{"*", "pulse", std::nullopt, "COUNT", 0}};
        return b;
    }

    ComponentSpec counter_spec()
    {
        ComponentSpec s;
        s.id = "C1";
        s.inputs = {{"pulse", {}, "", InputPolicy::queue}};
        s.outputs = {{"motorStep", {"steps"}, "", InputPolicy::queue}};
        s.behaviours = {counting("Beh1", "1"), counting("Beh2", "2")};
        s.initial_behaviour = "Beh1";
        return s;
    }
} // namespace

TEST(Component, InitialStateActionsRunOnConstruction)
{
    ComponentInstance c(counter_spec());
    EXPECT_EQ(c.ecc_state(), "INIT");
    EXPECT_EQ(as_int(c.vars().at("steps")), 0);
    EXPECT_EQ(c.active_behaviour(), "Beh1");
}

TEST(Component, ActivationEmitsOutputWithDataVariables)
{
    ComponentInstance c(counter_spec());
    const auto r = c.activate("pulse", {}, 10_ms);
    EXPECT_TRUE(r.fired);
    EXPECT_EQ(r.state, "COUNT");
    ASSERT_EQ(r.emissions.size(), 1u);
    EXPECT_EQ(r.emissions[0].event, "motorStep");
    EXPECT_EQ(as_int(r.emissions[0].data.at("steps")), 1);
    EXPECT_EQ(r.completion, 10_ms);
    EXPECT_EQ(emissions_to_string(r.emissions), "motorStep{steps=1}");
    EXPECT_EQ(emissions_to_string({}), "-");
    EXPECT_THROW(c.activate("nope", {}, 11_ms), ComponentError);
}

TEST(Component, SwitchIsLatchedUntilApplied)
{
    ComponentInstance c(counter_spec());
    c.activate("pulse", {}, 1_ms);
    EXPECT_TRUE(c.switch_behavior("Beh2"));
    EXPECT_EQ(c.pending_behaviour(), "Beh2");
    EXPECT_EQ(c.active_behaviour(), "Beh1");
    EXPECT_TRUE(c.apply_pending_switch(2_ms));
    EXPECT_EQ(c.active_behaviour(), "Beh2");
    EXPECT_EQ(c.ecc_state(), "INIT");
    EXPECT_EQ(c.last_switch_at(), 2_ms);
    EXPECT_FALSE(c.apply_pending_switch(3_ms));
    // Variables survive the switch; the new behaviour's entry state is not re-run.
    const auto r = c.activate("pulse", {}, 4_ms);
    EXPECT_EQ(as_int(r.emissions.at(0).data.at("steps")), 3);
    EXPECT_FALSE(c.switch_behavior("Beh2"));
    EXPECT_TRUE(c.switch_behavior("Beh1"));
    EXPECT_TRUE(c.switch_behavior("Beh2"));
    EXPECT_FALSE(c.pending_behaviour());
    EXPECT_THROW(c.switch_behavior("Beh7"), ComponentError);
}

TEST(Component, CompletionUsesPlatformCostOfActiveBehaviour)
{
    Kernel k;
    Platform p(k);
    p.add_node("N1");
    p.assign("C1", "N1");
    p.set_exec_cost("C1", "Beh1", Time::from_ms(9.1));
    p.set_exec_cost("C1", "Beh2", Time::from_ms(0.2));
    ComponentInstance c(counter_spec());
    EXPECT_EQ(c.activate("pulse", {}, 100_ms, &p).completion, Time::from_ms(109.1));
    c.switch_behavior("Beh2");
    c.apply_pending_switch(110_ms);
    EXPECT_EQ(c.activate("pulse", {}, 200_ms, &p).completion, Time::from_ms(200.2));
}

TEST(Component, GuardsAndPrioritiesSelectTheTransition)
{
    ComponentSpec s;
    s.id = "G";
    s.inputs = {{"reading", {"v"}, "", InputPolicy::queue}};
    s.outputs = {{"hi", {}, "", InputPolicy::queue}, {"lo", {}, "", InputPolicy::queue}};
    BehaviourSpec b;
    b.id = "Main";
    b.ecc.initial = "IDLE";
    b.ecc.states = {{"IDLE", {}}, {"HIGH", {act("pass_through", {}, {"hi"})}}, {"LOW", {act("pass_through", {}, {"lo"})}}};
    b.ecc.transitions = {{"*", "reading", std::nullopt, "LOW", 0},
                         {"*", "reading", DataGuard{"v", CmpOp::gt, 10.0}, "HIGH", 1}};
    s.behaviours = {b};
    s.initial_behaviour = "Main";
    ComponentInstance c(s);
    EXPECT_EQ(c.activate("reading", {{"v", 20.0}}, 1_ms).emissions.at(0).event, "hi");
    EXPECT_EQ(c.activate("reading", {{"v", 5.0}}, 2_ms).emissions.at(0).event, "lo");
    EXPECT_EQ(as_double(c.vars().at("v")), 5.0);
    EXPECT_FALSE((DataGuard{"missing", CmpOp::eq, 0.0}.eval(c.vars())));
}

TEST(Component, NoEnabledTransitionLeavesStateUnchanged)
{
    ComponentSpec s = counter_spec();
    s.inputs.push_back({"other", {}, "", InputPolicy::queue});
    ComponentInstance c(s);
    const auto r = c.activate("other", {}, 5_ms);
    EXPECT_FALSE(r.fired);
    EXPECT_EQ(r.state, "INIT");
    EXPECT_TRUE(r.emissions.empty());
}

TEST(Component, ValidationCatchesInconsistentSpecs)
{
    auto bad = counter_spec();
    bad.initial_behaviour = "Beh9";
    EXPECT_THROW(ComponentInstance{bad}, ComponentError);

    bad = counter_spec();
    bad.behaviours[0].ecc.states[1].actions[0].emits = {"ghost"};
    EXPECT_THROW(ComponentInstance{bad}, ComponentError);

    bad = counter_spec();
    bad.behaviours[1].id = "Beh1";
    EXPECT_THROW(ComponentInstance{bad}, ComponentError);

    bad = counter_spec();
    bad.behaviours[0].ecc.transitions[0].dst = "NOWHERE";
    EXPECT_THROW(ComponentInstance{bad}, ComponentError);

    bad = counter_spec();
    bad.behaviours[0].ecc.states[0].actions[0].algorithm.kernel = "fft";
    EXPECT_THROW(ComponentInstance{bad}, ComponentError);

    bad = counter_spec();
    Contract t;
    t.id = "T";
    t.inputs = {{"pulse", PortDomain::boolean, Direction::in}};
    t.guarantee = TimingGuarantee{150, 10};
    bad.contracts = {{t, "missing_event", "", ""}};
    EXPECT_THROW(ComponentInstance{bad}, ComponentError);

    bad.contracts = {{t, "pulse", "", ""}};
    EXPECT_NO_THROW(ComponentInstance{bad});
    t.guarantee = TimingGuarantee{0, 10};
    bad.contracts = {{t, "pulse", "", ""}};
    EXPECT_THROW(ComponentInstance{bad}, ContractError);
}

TEST(Algorithms, DebounceLocksOutEdgesInsideTheWindow)
{
    auto d = make_algorithm({"debounce", {{"delay_ms", "5"}}});
    Vars v;
    const std::string ev = "edge";
    auto at = [&](Time t) {
        AlgContext ctx{t, ev, v};
        return d->run(ctx);
    };
    EXPECT_TRUE(at(0_ms));
    EXPECT_FALSE(at(4_ms));
    EXPECT_TRUE(at(5_ms));
    EXPECT_FALSE(at(Time::from_ms(9.99)));
    EXPECT_THROW(make_algorithm({"debounce", {}}), ComponentError);
}

TEST(Algorithms, ClassifyAndTriggerSortAPiece)
{
    auto classify = make_algorithm({"classify", {{"classes", "red:750:755:8:1,blue:535:558:12:3"}}});
    auto e1 = make_algorithm({"threshold_trigger", {{"ejector", "1"}}});
    auto e3 = make_algorithm({"threshold_trigger", {{"ejector", "3"}}});
    Vars v;
    const std::string colour = "colour";
    const std::string step = "motorStep";
    const std::string trigger = "trigger";
    auto run = [&](Algorithm& a, const std::string& ev) {
        AlgContext ctx{0_ms, ev, v};
        return a.run(ctx);
    };
    v["colour"] = 540.0;
    EXPECT_FALSE(run(*classify, colour));
    v["colour"] = 100.0;
    EXPECT_FALSE(run(*classify, colour));
    EXPECT_EQ(as_int(v.at("rejected")), 1);
    v["steps"] = std::int64_t{4};
    ASSERT_TRUE(run(*classify, step));
    EXPECT_EQ(as_int(v.at("trigger")), 16);
    EXPECT_EQ(as_int(v.at("ejector")), 3);
    EXPECT_FALSE(run(*e1, trigger));
    EXPECT_FALSE(run(*e3, trigger));
    v["steps"] = std::int64_t{15};
    EXPECT_FALSE(run(*e3, step));
    v["steps"] = std::int64_t{16};
    EXPECT_TRUE(run(*e3, step));
    EXPECT_EQ(as_int(v.at("fired_at_steps")), 16);
    EXPECT_FALSE(run(*e1, step));
    EXPECT_FALSE(run(*classify, step));
    EXPECT_THROW(make_algorithm({"classify", {{"classes", "red:1:2:3"}}}), ComponentError);
    EXPECT_THROW(make_algorithm({"classify", {{"classes", "red:9:2:3:1"}}}), ComponentError);
}

TEST(Algorithms, PassThroughCopiesAndParseValueTypes)
{
    auto p = make_algorithm({"pass_through", {{"from", "a"}, {"to", "b"}}});
    Vars v;
    const std::string ev = "x";
    AlgContext ctx{0_ms, ev, v};
    EXPECT_FALSE(p->run(ctx));
    v["a"] = std::int64_t{7};
    EXPECT_TRUE(p->run(ctx));
    EXPECT_EQ(as_int(v.at("b")), 7);
    EXPECT_THROW(make_algorithm({"pass_through", {{"from", "a"}}}), ComponentError);

    EXPECT_EQ(parse_value("true"), Value{true});
    EXPECT_EQ(parse_value("-3"), Value{std::int64_t{-3}});
    EXPECT_EQ(parse_value("2.5"), Value{2.5});
    EXPECT_THROW(parse_value("abc"), ComponentError);
    EXPECT_EQ(algorithm_kernels().size(), 6u);
}
