#pragma once

#include "rcps/value.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rcps
{
    class ContractError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class PortDomain
    {
        real,
        integer,
        boolean
    };

    enum class Direction
    {
        in,
        out
    };

    struct PortDecl
    {
        std::string name;
        PortDomain domain = PortDomain::real;
        Direction direction = Direction::in;

        friend bool operator==(const PortDecl&, const PortDecl&) = default;
    };

    /// Closed interval [lo, hi].
    struct Interval
    {
        double lo = 0.0;
        double hi = 0.0;

        [[nodiscard]] bool contains(double v) const noexcept { return lo <= v && v <= hi; }
        friend bool operator==(const Interval&, const Interval&) = default;
    };

    /// Output is produced for each input sample; samples are at most `period_ms`
    /// apart and each is processed within `deadline_ms`.
    struct TimingGuarantee
    {
        double period_ms = 0.0;
        double deadline_ms = 0.0;
        friend bool operator==(const TimingGuarantee&, const TimingGuarantee&) = default;
    };

    struct BoundGuarantee
    {
        std::string port;
        double lo = 0.0;
        double hi = 0.0;
        friend bool operator==(const BoundGuarantee&, const BoundGuarantee&) = default;
    };

    /// Value lies in the union of the intervals.
    struct SetMembershipGuarantee
    {
        std::string port;
        std::vector<Interval> intervals;
        friend bool operator==(const SetMembershipGuarantee&, const SetMembershipGuarantee&) = default;
    };

    /// Observed value stays within rel_tol of p_exp(t), where dp_exp/dt = k1 * p_exp
    /// (k1 in 1/s) and p_exp(0) = k2 at the start of the monitored window.
    struct EnvelopeGuarantee
    {
        std::string port;
        double k1 = 0.0;
        double k2 = 0.0;
        double rel_tol = 0.0;
        friend bool operator==(const EnvelopeGuarantee&, const EnvelopeGuarantee&) = default;
    };

    using Guarantee = std::variant<TimingGuarantee, BoundGuarantee, SetMembershipGuarantee, EnvelopeGuarantee>;

    /// Assumption on an input: its value lies in [lo, hi].
    struct Assumption
    {
        std::string port;
        Interval range;
        friend bool operator==(const Assumption&, const Assumption&) = default;
    };

    struct Contract
    {
        std::string id;
        std::vector<PortDecl> inputs;
        std::vector<PortDecl> outputs;
        /// Empty means the contract makes no assumptions.
        std::vector<Assumption> assumptions;
        Guarantee guarantee;

        [[nodiscard]] const PortDecl* find_port(const std::string& name) const;
        friend bool operator==(const Contract&, const Contract&) = default;
    };

    struct ValidationError
    {
        std::string rule;
        std::string message;
    };

    /// Checks every structural invariant. Errors are returned, never thrown.
    std::vector<ValidationError> validate_contract(const Contract& c);

    /// Port values presented to a point check.
    using Sample = Payload;

    struct PointResult
    {
        bool holds = true;
        /// An assumption failed; the guarantee is discharged and `holds` is true.
        bool assumption_violated = false;
    };

    /// Evaluates a Bound or SetMembership contract on one sample. Timing and envelope
    /// contracts need an observer and are rejected with ContractError, as are missing
    /// ports and values whose type does not fit the port domain.
    PointResult check_point(const Contract& c, const Sample& sample);

    /// Renders the contract in the textual contract grammar.
    std::string print_contract(const Contract& c);

    [[nodiscard]] std::string guarantee_name(const Guarantee& g);
    [[nodiscard]] std::string domain_name(PortDomain d);
} // namespace rcps
