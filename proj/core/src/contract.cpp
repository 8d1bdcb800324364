#include "rcps/contract.hpp"

#include <charconv>
#include <cmath>
#include <set>

namespace rcps
{
    std::string value_to_string(const Value& v)
    {
        return std::visit(
            [](auto x) -> std::string {
                using T = decltype(x);
                if constexpr (std::is_same_v<T, bool>)
                {
                    return x ? "true" : "false";
                }
                else if constexpr (std::is_same_v<T, std::int64_t>)
                {
                    return std::to_string(x);
                }
                else
                {
                    char buf[64];
                    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
                    return std::string(buf, ptr);
                }
            },
            v);
    }

    std::string payload_to_string(const Payload& p)
    {
        std::string out;
        for (const auto& [k, v] : p)
        {
            if (!out.empty())
            {
                out += ';';
            }
            out += k + "=" + value_to_string(v);
        }
        return out;
    }

    const PortDecl* Contract::find_port(const std::string& name) const
    {
        for (const auto* list : {&inputs, &outputs})
        {
            for (const auto& p : *list)
            {
                if (p.name == name)
                {
                    return &p;
                }
            }
        }
        return nullptr;
    }

    std::string domain_name(PortDomain d)
    {
        switch (d)
        {
        case PortDomain::real:
            return "real";
        case PortDomain::integer:
            return "integer";
        case PortDomain::boolean:
            return "boolean";
        }
        return "?";
    }

    std::string guarantee_name(const Guarantee& g)
    {
        switch (g.index())
        {
        case 0:
            return "timing";
        case 1:
            return "bound";
        case 2:
            return "member";
        default:
            return "envelope";
        }
    }

    namespace
    {
        struct Collector
        {
            std::vector<ValidationError> errors;
            void add(std::string rule, std::string message)
            {
                errors.push_back(ValidationError{std::move(rule), std::move(message)});
            }
        };

        void check_port_ref(const Contract& c, const std::string& port, Collector& out)
        {
            if (c.find_port(port) == nullptr)
            {
                out.add("port-declared", "guarantee references undeclared port '" + port + "'");
            }
        }

        void check_interval(double lo, double hi, Collector& out)
        {
            if (!std::isfinite(lo) || !std::isfinite(hi))
            {
                out.add("finite", "interval bounds must be finite");
            }
            else if (lo > hi)
            {
                out.add("interval-ordered", "interval lower bound exceeds upper bound");
            }
        }
    } // namespace

    std::vector<ValidationError> validate_contract(const Contract& c)
    {
        Collector out;
        if (c.id.empty())
        {
            out.add("id-nonempty", "contract id must not be empty");
        }
        std::set<std::string> names;
        for (const auto& p : c.inputs)
        {
            if (!names.insert(p.name).second)
            {
                out.add("port-unique", "duplicate port '" + p.name + "'");
            }
            if (p.direction != Direction::in)
            {
                out.add("direction-consistent", "port '" + p.name + "' listed as input but declared out");
            }
        }
        for (const auto& p : c.outputs)
        {
            if (!names.insert(p.name).second)
            {
                out.add("port-unique", "duplicate port '" + p.name + "'");
            }
            if (p.direction != Direction::out)
            {
                out.add("direction-consistent", "port '" + p.name + "' listed as output but declared in");
            }
        }
        for (const auto& a : c.assumptions)
        {
            const auto* p = c.find_port(a.port);
            if (p == nullptr || p->direction != Direction::in)
            {
                out.add("assumption-input", "assumption must constrain a declared input, got '" + a.port + "'");
            }
            check_interval(a.range.lo, a.range.hi, out);
        }

        std::visit(
            [&](const auto& g) {
                using G = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<G, TimingGuarantee>)
                {
                    if (!(g.period_ms > 0.0) || !std::isfinite(g.period_ms))
                    {
                        out.add("period-positive", "period must be positive");
                    }
                    if (!(g.deadline_ms > 0.0) || !std::isfinite(g.deadline_ms))
                    {
                        out.add("deadline-positive", "deadline must be positive");
                    }
                }
                else if constexpr (std::is_same_v<G, BoundGuarantee>)
                {
                    check_port_ref(c, g.port, out);
                    check_interval(g.lo, g.hi, out);
                }
                else if constexpr (std::is_same_v<G, SetMembershipGuarantee>)
                {
                    check_port_ref(c, g.port, out);
                    if (g.intervals.empty())
                    {
                        out.add("member-nonempty", "membership guarantee needs at least one interval");
                    }
                    for (const auto& iv : g.intervals)
                    {
                        check_interval(iv.lo, iv.hi, out);
                    }
                }
                else
                {
                    check_port_ref(c, g.port, out);
                    if (!(g.rel_tol > 0.0 && g.rel_tol < 1.0))
                    {
                        out.add("tolerance-range", "relative tolerance must lie in (0,1)");
                    }
                    if (!std::isfinite(g.k1))
                    {
                        out.add("finite", "rate k1 must be finite");
                    }
                    if (!(g.k2 > 0.0) || !std::isfinite(g.k2))
                    {
                        out.add("envelope-initial-positive", "initial value k2 must be positive");
                    }
                }
            },
            c.guarantee);
        return out.errors;
    }

    namespace
    {
        double numeric_for(const PortDecl& port, const Value& v)
        {
            const bool ok = std::visit(
                [&](auto x) {
                    using T = decltype(x);
                    switch (port.domain)
                    {
                    case PortDomain::real:
                        return !std::is_same_v<T, bool>;
                    case PortDomain::integer:
                        return std::is_same_v<T, std::int64_t>;
                    case PortDomain::boolean:
                        return std::is_same_v<T, bool>;
                    }
                    return false;
                },
                v);
            if (!ok)
            {
                throw ContractError("value for port '" + port.name + "' does not match domain " +
                                    domain_name(port.domain));
            }
            return as_double(v);
        }

        double sample_value(const Contract& c, const Sample& sample, const std::string& port)
        {
            const auto* decl = c.find_port(port);
            if (decl == nullptr)
            {
                throw ContractError("contract " + c.id + " has no port '" + port + "'");
            }
            auto it = sample.find(port);
            if (it == sample.end())
            {
                throw ContractError("sample carries no value for port '" + port + "'");
            }
            return numeric_for(*decl, it->second);
        }
    } // namespace

    PointResult check_point(const Contract& c, const Sample& sample)
    {
        PointResult r;
        for (const auto& a : c.assumptions)
        {
            if (!a.range.contains(sample_value(c, sample, a.port)))
            {
                r.assumption_violated = true;
            }
        }
        std::visit(
            [&](const auto& g) {
                using G = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<G, BoundGuarantee>)
                {
                    const double v = sample_value(c, sample, g.port);
                    r.holds = g.lo <= v && v <= g.hi;
                }
                else if constexpr (std::is_same_v<G, SetMembershipGuarantee>)
                {
                    const double v = sample_value(c, sample, g.port);
                    r.holds = false;
                    for (const auto& iv : g.intervals)
                    {
                        if (iv.contains(v))
                        {
                            r.holds = true;
                            break;
                        }
                    }
                }
                else
                {
                    throw ContractError("contract " + c.id + ": " + guarantee_name(c.guarantee) +
                                        " guarantees need an observer, not a point check");
                }
            },
            c.guarantee);
        if (r.assumption_violated)
        {
            r.holds = true;
        }
        return r;
    }
} // namespace rcps
