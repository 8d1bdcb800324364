#include "rcps/timed_automaton.hpp"

#include <gtest/gtest.h>

using namespace rcps;
using namespace rcps::literals;

namespace
{
    // A -go-> B (resets c); B --(c >= 5 ticks)--> C with priority 1, B --(c == 5)--> D priority 2.
    struct Fixture
    {
        TimedAutomaton ta;
        std::size_t a{}, b{}, c_loc{}, d{}, clock{};

        Fixture()
        {
            a = ta.add_location("A");
            b = ta.add_location("B");
            c_loc = ta.add_location("C", ViolationKind::missed_sample);
            d = ta.add_location("D", ViolationKind::missed_deadline);
            clock = ta.add_clock("c");
            ta.set_initial(a);
            ta.add_transition({a, b, "go", {}, {clock}, 0});
            ta.add_transition({b, c_loc, std::nullopt, {{clock, CmpOp::ge, 5}}, {}, 1});
            ta.add_transition({b, d, std::nullopt, {{clock, CmpOp::eq, 5}}, {}, 2});
        }
    };
} // namespace

TEST(TimedAutomaton, StartsInInitialLocation)
{
    Fixture f;
    EXPECT_EQ(f.ta.location(), f.a);
    EXPECT_EQ(f.ta.location_info().name, "A");
    EXPECT_FALSE(f.ta.next_delay_firing());
}

TEST(TimedAutomaton, EventWithoutMatchingTransitionIsIgnored)
{
    Fixture f;
    EXPECT_FALSE(f.ta.step_event("stop", 3_tick));
    EXPECT_EQ(f.ta.location(), f.a);
    EXPECT_EQ(f.ta.last_time(), 3_tick);
}

TEST(TimedAutomaton, HigherPriorityDelayEdgeWinsOnTheSameTick)
{
    Fixture f;
    EXPECT_TRUE(f.ta.step_event("go", 10_tick));
    EXPECT_EQ(f.ta.clock_value(f.clock, 12_tick), 2);
    ASSERT_TRUE(f.ta.next_delay_firing());
    EXPECT_EQ(*f.ta.next_delay_firing(), 15_tick);
    f.ta.advance_time(14_tick);
    EXPECT_EQ(f.ta.location(), f.b);
    f.ta.advance_time(15_tick);
    EXPECT_EQ(f.ta.location(), f.d);
    EXPECT_EQ(f.ta.entered_at(), 15_tick);
}

TEST(TimedAutomaton, DelayEdgeFiresAtItsEarliestTickEvenWhenClosedLate)
{
    TimedAutomaton ta;
    const auto s = ta.add_location("S");
    const auto t = ta.add_location("T");
    const auto x = ta.add_clock("x");
    ta.set_initial(s);
    ta.add_transition({s, t, std::nullopt, {{x, CmpOp::gt, 7}}, {}, 0});
    ta.advance_time(1000_tick);
    EXPECT_EQ(ta.location(), t);
    EXPECT_EQ(ta.entered_at(), 8_tick);
}

TEST(TimedAutomaton, EventsAreProcessedBeforeDelayEdgesOfTheSameTick)
{
    TimedAutomaton ta;
    const auto idle = ta.add_location("Idle");
    const auto late = ta.add_location("Late", ViolationKind::missed_sample);
    const auto x = ta.add_clock("x");
    ta.set_initial(idle);
    ta.add_transition({idle, idle, "tick", {}, {x}, 0});
    ta.add_transition({idle, late, std::nullopt, {{x, CmpOp::ge, 10}}, {}, 0});
    ta.step_event("tick", 10_tick);
    ta.advance_time(19_tick);
    EXPECT_EQ(ta.location(), idle);
    ta.advance_time(20_tick);
    EXPECT_EQ(ta.location(), late);
}

TEST(TimedAutomaton, UpperBoundedDelayEdgeThatCannotFireIsSkipped)
{
    TimedAutomaton ta;
    const auto s = ta.add_location("S");
    const auto t = ta.add_location("T");
    const auto x = ta.add_clock("x");
    ta.set_initial(s);
    ta.add_transition({s, t, std::nullopt, {{x, CmpOp::ge, 10}, {x, CmpOp::lt, 5}}, {}, 0});
    ta.advance_time(100_tick);
    EXPECT_EQ(ta.location(), s);
    EXPECT_FALSE(ta.next_delay_firing());
}

TEST(TimedAutomaton, EventGuardsAreCheckedAtTheEventTick)
{
    TimedAutomaton ta;
    const auto s = ta.add_location("S");
    const auto t = ta.add_location("T");
    const auto x = ta.add_clock("x");
    ta.set_initial(s);
    ta.add_transition({s, t, "e", {{x, CmpOp::le, 4}}, {}, 0});
    EXPECT_FALSE(ta.step_event("e", 5_tick));
    EXPECT_EQ(ta.location(), s);
    ta.reset();
    EXPECT_EQ(ta.clock_value(x, 5_tick), 0);
    EXPECT_TRUE(ta.step_event("e", 9_tick));
    EXPECT_EQ(ta.location(), t);
}

TEST(TimedAutomaton, ResetReturnsToInitialLocation)
{
    Fixture f;
    f.ta.step_event("go", 1_tick);
    f.ta.advance_time(50_tick);
    EXPECT_EQ(f.ta.location(), f.d);
    f.ta.reset();
    EXPECT_EQ(f.ta.location(), f.a);
    f.ta.step_event("go", 60_tick);
    f.ta.advance_time(65_tick);
    EXPECT_EQ(f.ta.location(), f.d);
    EXPECT_EQ(f.ta.entered_at(), 65_tick);
}

TEST(TimedAutomaton, RejectsTimeRegressionAndDanglingReferences)
{
    Fixture f;
    f.ta.advance_time(10_tick);
    EXPECT_THROW(f.ta.step_event("go", 9_tick), ObserverError);
    EXPECT_THROW(f.ta.advance_time(9_tick), ObserverError);
    EXPECT_THROW(f.ta.add_transition({0, 9, "x", {}, {}, 0}), ObserverError);
    EXPECT_THROW(f.ta.add_transition({0, 1, "x", {{4, CmpOp::ge, 1}}, {}, 0}), ObserverError);
    EXPECT_THROW(f.ta.add_transition({0, 1, "x", {}, {4}, 0}), ObserverError);
    EXPECT_THROW(f.ta.set_initial(42), ObserverError);
}

TEST(TimedAutomaton, ViolationNamesAreStable)
{
    EXPECT_EQ(violation_name(ViolationKind::missed_sample), "missed_sample");
    EXPECT_EQ(violation_name(ViolationKind::missed_deadline), "missed_deadline");
    EXPECT_EQ(violation_name(ViolationKind::out_of_range), "out_of_range");
    EXPECT_EQ(violation_name(ViolationKind::envelope_exceeded), "envelope_exceeded");
}
