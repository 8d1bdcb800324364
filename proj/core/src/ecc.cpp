#include "rcps/ecc.hpp"

#include <algorithm>

namespace rcps
{
    bool DataGuard::eval(const Vars& vars) const
    {
        auto it = vars.find(var);
        if (it == vars.end())
        {
            return false;
        }
        const double v = as_double(it->second);
        switch (op)
        {
        case CmpOp::lt:
            return v < value;
        case CmpOp::le:
            return v <= value;
        case CmpOp::eq:
            return v == value;
        case CmpOp::ge:
            return v >= value;
        case CmpOp::gt:
            return v > value;
        }
        return false;
    }

    const EccState& Ecc::state(const std::string& name) const
    {
        auto it = std::find_if(states.begin(), states.end(), [&](const EccState& s) { return s.name == name; });
        if (it == states.end())
        {
            throw ComponentError("unknown ECC state " + name);
        }
        return *it;
    }

    bool Ecc::has_state(const std::string& name) const
    {
        return std::any_of(states.begin(), states.end(), [&](const EccState& s) { return s.name == name; });
    }

    const EccTransition* Ecc::select(const std::string& current, const std::string& event, const Vars& vars) const
    {
        const EccTransition* best = nullptr;
        for (const auto& t : transitions)
        {
            if ((t.src != current && t.src != "*") || t.event != event)
            {
                continue;
            }
            if (t.guard && !t.guard->eval(vars))
            {
                continue;
            }
            if (best == nullptr || t.priority > best->priority)
            {
                best = &t;
            }
        }
        return best;
    }

    void Ecc::validate(const std::set<std::string>& inputs, const std::set<std::string>& outputs) const
    {
        if (states.empty())
        {
            throw ComponentError("ECC has no states");
        }
        std::set<std::string> names;
        for (const auto& s : states)
        {
            if (!names.insert(s.name).second)
            {
                throw ComponentError("duplicate ECC state " + s.name);
            }
            for (const auto& a : s.actions)
            {
                for (const auto& e : a.emits)
                {
                    if (!outputs.contains(e))
                    {
                        throw ComponentError("state " + s.name + " emits undeclared event " + e);
                    }
                }
            }
        }
        if (!names.contains(initial))
        {
            throw ComponentError("ECC initial state " + initial + " does not exist");
        }
        for (const auto& t : transitions)
        {
            if (t.src != "*" && !names.contains(t.src))
            {
                throw ComponentError("transition from unknown state " + t.src);
            }
            if (!names.contains(t.dst))
            {
                throw ComponentError("transition to unknown state " + t.dst);
            }
            if (!inputs.contains(t.event))
            {
                throw ComponentError("transition on undeclared event " + t.event);
            }
        }
    }
} // namespace rcps
