#include "rcps/contract_parser.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace rcps;

namespace
{
    const char* kTiming = R"(
contract C1_timing {
  input pulse : boolean
  output motorStep : integer
  guarantee timing every 150 ms within 10 ms
}
)";

    const char* kColour = R"(
# colour classes
contract C3_colour {
  input raw : real
  output colour : real
  assume raw in [0, 1000]
  guarantee member colour in [750, 755] | [568, 590] | [535, 558]
}
)";

    bool has_rule(const std::vector<ValidationError>& errors, const std::string& rule)
    {
        return std::any_of(errors.begin(), errors.end(), [&](const auto& e) { return e.rule == rule; });
    }

    Contract bound_contract()
    {
        return parse_contract("contract duty { input cmd : integer output duty : real assume cmd in [0, 10] "
                              "guarantee bound duty in [0, 100] }");
    }
} // namespace

TEST(ContractParser, ReadsTimingContract)
{
    const Contract c = parse_contract(kTiming);
    EXPECT_EQ(c.id, "C1_timing");
    ASSERT_EQ(c.inputs.size(), 1u);
    EXPECT_EQ(c.inputs[0], (PortDecl{"pulse", PortDomain::boolean, Direction::in}));
    EXPECT_EQ(c.outputs[0], (PortDecl{"motorStep", PortDomain::integer, Direction::out}));
    const auto& g = std::get<TimingGuarantee>(c.guarantee);
    EXPECT_EQ(g.period_ms, 150.0);
    EXPECT_EQ(g.deadline_ms, 10.0);
    EXPECT_TRUE(validate_contract(c).empty());
}

TEST(ContractParser, ReadsMembershipWithAssumption)
{
    const Contract c = parse_contract(kColour);
    const auto& g = std::get<SetMembershipGuarantee>(c.guarantee);
    ASSERT_EQ(g.intervals.size(), 3u);
    EXPECT_EQ(g.intervals[1], (Interval{568, 590}));
    ASSERT_EQ(c.assumptions.size(), 1u);
    EXPECT_EQ(c.assumptions[0].range, (Interval{0, 1000}));
}

TEST(ContractParser, ReadsEnvelopeAndSeveralBlocks)
{
    const auto all = parse_contracts(std::string(kTiming) +
                                     "contract p { input pressure : real guarantee envelope pressure rate -0.5 "
                                     "init 100 tol 0.05 }");
    ASSERT_EQ(all.size(), 2u);
    const auto& g = std::get<EnvelopeGuarantee>(all[1].guarantee);
    EXPECT_EQ(g.k1, -0.5);
    EXPECT_EQ(g.k2, 100.0);
    EXPECT_EQ(g.rel_tol, 0.05);
    EXPECT_THROW(parse_contract(std::string(kTiming) + kTiming), ParseError);
}

TEST(ContractParser, PrintedFormParsesBackToTheSameContract)
{
    for (const char* text : {kTiming, kColour})
    {
        const Contract c = parse_contract(text);
        EXPECT_EQ(parse_contract(print_contract(c)), c);
    }
    const Contract b = bound_contract();
    EXPECT_EQ(parse_contract(print_contract(b)), b);
}

TEST(ContractParser, ReportsLineAndColumnOfSyntaxErrors)
{
    try
    {
        parse_contract("contract x {\n  input a real\n}");
        FAIL() << "no error";
    }
    catch (const ParseError& e)
    {
        EXPECT_EQ(e.line(), 2);
        EXPECT_EQ(e.column(), 11);
    }
    EXPECT_THROW(parse_contract("contract x { input a : real }"), ParseError);
    EXPECT_THROW(parse_contract("contract x { guarantee }"), ParseError);
    EXPECT_THROW(parse_contract("contract x { guarantee timing every 1 ms within 1 ms guarantee timing every 1 ms "
                                "within 1 ms }"),
                 ParseError);
    EXPECT_THROW(parse_contract("contract x { input a : complex guarantee bound a in [0,1] }"), ParseError);
    EXPECT_THROW(parse_contract("contract x { input a : real guarantee bound a in [0,1] ; }"), ParseError);
    EXPECT_THROW(parse_contract(""), ParseError);
}

TEST(ContractValidation, FlagsEachStructuralRule)
{
    Contract c = parse_contract("contract t { guarantee timing every 0 ms within -1 ms }");
    auto errors = validate_contract(c);
    EXPECT_TRUE(has_rule(errors, "period-positive"));
    EXPECT_TRUE(has_rule(errors, "deadline-positive"));

    c = parse_contract("contract b { input a : real input a : real guarantee bound z in [2, 1] }");
    errors = validate_contract(c);
    EXPECT_TRUE(has_rule(errors, "port-unique"));
    EXPECT_TRUE(has_rule(errors, "port-declared"));
    EXPECT_TRUE(has_rule(errors, "interval-ordered"));

    c = parse_contract("contract a { output o : real assume o in [0, 1] guarantee bound o in [0, 1] }");
    EXPECT_TRUE(has_rule(validate_contract(c), "assumption-input"));

    c = parse_contract("contract e { input p : real guarantee envelope p rate 1 init 0 tol 1.5 }");
    errors = validate_contract(c);
    EXPECT_TRUE(has_rule(errors, "tolerance-range"));
    EXPECT_TRUE(has_rule(errors, "envelope-initial-positive"));

    c.id.clear();
    EXPECT_TRUE(has_rule(validate_contract(c), "id-nonempty"));
}

TEST(ContractValidation, DirectionMustMatchTheList)
{
    Contract c = bound_contract();
    c.inputs[0].direction = Direction::out;
    EXPECT_TRUE(has_rule(validate_contract(c), "direction-consistent"));
}

TEST(CheckPoint, BoundHoldsInsideClosedInterval)
{
    const Contract c = bound_contract();
    EXPECT_TRUE(check_point(c, {{"cmd", std::int64_t{3}}, {"duty", 100.0}}).holds);
    EXPECT_TRUE(check_point(c, {{"cmd", std::int64_t{3}}, {"duty", std::int64_t{0}}}).holds);
    EXPECT_FALSE(check_point(c, {{"cmd", std::int64_t{3}}, {"duty", 100.5}}).holds);
}

TEST(CheckPoint, FailedAssumptionDischargesTheGuarantee)
{
    const Contract c = bound_contract();
    const auto r = check_point(c, {{"cmd", std::int64_t{11}}, {"duty", 500.0}});
    EXPECT_TRUE(r.holds);
    EXPECT_TRUE(r.assumption_violated);
}

TEST(CheckPoint, MembershipAgreesWithIntervalScan)
{
    const Contract c = parse_contract(kColour);
    const auto& g = std::get<SetMembershipGuarantee>(c.guarantee);
    for (double v = 500.0; v <= 800.0; v += 0.25)
    {
        bool inside = false;
        for (const auto& iv : g.intervals)
        {
            inside = inside || (iv.lo <= v && v <= iv.hi);
        }
        EXPECT_EQ(check_point(c, {{"raw", 1.0}, {"colour", v}}).holds, inside) << v;
    }
}

TEST(CheckPoint, RejectsWrongDomainsMissingPortsAndTimingContracts)
{
    const Contract c = bound_contract();
    EXPECT_THROW(check_point(c, {{"cmd", std::int64_t{1}}, {"duty", true}}), ContractError);
    EXPECT_THROW(check_point(c, {{"cmd", 1.5}, {"duty", 1.0}}), ContractError);
    EXPECT_THROW(check_point(c, {{"cmd", std::int64_t{1}}}), ContractError);
    EXPECT_THROW(check_point(parse_contract(kTiming), {{"pulse", true}}), ContractError);
}
