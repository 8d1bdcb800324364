#include "rcps/component.hpp"

#include <set>

namespace rcps
{
    const EventPortSpec* ComponentSpec::input(const std::string& name) const
    {
        for (const auto& p : inputs)
        {
            if (p.name == name)
            {
                return &p;
            }
        }
        return nullptr;
    }

    const EventPortSpec* ComponentSpec::output(const std::string& name) const
    {
        for (const auto& p : outputs)
        {
            if (p.name == name)
            {
                return &p;
            }
        }
        return nullptr;
    }

    std::vector<std::string> ComponentSpec::behaviour_ids() const
    {
        std::vector<std::string> ids;
        for (const auto& b : behaviours)
        {
            ids.push_back(b.id);
        }
        return ids;
    }

    void ComponentSpec::validate() const
    {
        if (id.empty())
        {
            throw ComponentError("component id must not be empty");
        }
        if (behaviours.empty())
        {
            throw ComponentError("component " + id + " has no behaviours");
        }
        std::set<std::string> in_names;
        std::set<std::string> out_names;
        std::set<std::string> data_names;
        for (const auto& p : inputs)
        {
            if (!in_names.insert(p.name).second)
            {
                throw ComponentError("component " + id + " declares input " + p.name + " twice");
            }
            data_names.insert(p.data.begin(), p.data.end());
        }
        for (const auto& p : outputs)
        {
            if (!out_names.insert(p.name).second)
            {
                throw ComponentError("component " + id + " declares output " + p.name + " twice");
            }
            data_names.insert(p.data.begin(), p.data.end());
        }
        std::set<std::string> ids;
        for (const auto& b : behaviours)
        {
            if (!ids.insert(b.id).second)
            {
                throw ComponentError("component " + id + " has duplicate behaviour id " + b.id);
            }
            b.ecc.validate(in_names, out_names);
            if (!b.entry_state.empty() && !b.ecc.has_state(b.entry_state))
            {
                throw ComponentError("behaviour " + b.id + " entry state " + b.entry_state + " does not exist");
            }
            for (const auto& s : b.ecc.states)
            {
                for (const auto& a : s.actions)
                {
                    (void)make_algorithm(a.algorithm);
                }
            }
        }
        if (!ids.contains(initial_behaviour))
        {
            throw ComponentError("component " + id + " initial behaviour '" + initial_behaviour + "' does not exist");
        }

        const auto known_port = [&](const std::string& port) {
            return in_names.contains(port) || out_names.contains(port) || data_names.contains(port);
        };
        for (const auto& binding : contracts)
        {
            const Contract& c = binding.contract;
            const auto errors = validate_contract(c);
            if (!errors.empty())
            {
                throw ContractError("contract " + c.id + " of " + id + ": " + errors.front().message);
            }
            for (const auto& p : c.inputs)
            {
                if (!known_port(p.name))
                {
                    throw ComponentError("contract " + c.id + " references unknown port " + p.name);
                }
            }
            for (const auto& p : c.outputs)
            {
                if (!known_port(p.name))
                {
                    throw ComponentError("contract " + c.id + " references unknown port " + p.name);
                }
            }
            for (const auto* ev : {&binding.sample_event, &binding.start_event, &binding.stop_event})
            {
                if (!ev->empty() && !in_names.contains(*ev))
                {
                    throw ComponentError("contract " + c.id + " is bound to unknown input event " + *ev);
                }
            }
            if (std::holds_alternative<TimingGuarantee>(c.guarantee) && binding.sample_event.empty() &&
                (c.inputs.empty() || !in_names.contains(c.inputs.front().name)))
            {
                throw ComponentError("timing contract " + c.id + " needs a sample event");
            }
        }
    }

    std::string emissions_to_string(const std::vector<Emission>& emissions)
    {
        if (emissions.empty())
        {
            return "-";
        }
        std::string out;
        for (const auto& e : emissions)
        {
            if (!out.empty())
            {
                out += '|';
            }
            out += e.event + "{" + payload_to_string(e.data) + "}";
        }
        return out;
    }

    ComponentInstance::ComponentInstance(ComponentSpec spec) : spec_(std::move(spec))
    {
        spec_.validate();
        for (const auto& b : spec_.behaviours)
        {
            BehaviourRuntime rt;
            for (const auto& s : b.ecc.states)
            {
                auto& list = rt.algorithms[s.name];
                for (const auto& a : s.actions)
                {
                    list.push_back(make_algorithm(a.algorithm));
                }
            }
            runtimes_.push_back(std::move(rt));
        }
        active_ = behaviour_index(spec_.initial_behaviour);
        state_ = spec_.behaviours[active_].ecc.initial;
        (void)run_state(state_, "", Time::zero());
    }

    std::size_t ComponentInstance::behaviour_index(const std::string& id) const
    {
        for (std::size_t i = 0; i < spec_.behaviours.size(); ++i)
        {
            if (spec_.behaviours[i].id == id)
            {
                return i;
            }
        }
        throw ComponentError("component " + spec_.id + " has no behaviour " + id);
    }

    const std::string& ComponentInstance::active_behaviour() const { return spec_.behaviours[active_].id; }

    std::optional<std::string> ComponentInstance::pending_behaviour() const
    {
        if (!pending_)
        {
            return std::nullopt;
        }
        return spec_.behaviours[*pending_].id;
    }

    bool ComponentInstance::switch_behavior(const std::string& behaviour)
    {
        const std::size_t idx = behaviour_index(behaviour);
        if (idx == active_)
        {
            const bool had_pending = pending_.has_value();
            pending_.reset();
            return had_pending;
        }
        pending_ = idx;
        return true;
    }

    bool ComponentInstance::apply_pending_switch(Time t)
    {
        if (!pending_)
        {
            return false;
        }
        active_ = *pending_;
        pending_.reset();
        const auto& b = spec_.behaviours[active_];
        state_ = b.entry_state.empty() ? b.ecc.initial : b.entry_state;
        last_switch_at_ = t;
        return true;
    }

    std::vector<Emission> ComponentInstance::run_state(const std::string& state, const std::string& event, Time t)
    {
        std::vector<Emission> out;
        const auto& b = spec_.behaviours[active_];
        const auto& st = b.ecc.state(state);
        auto& algs = runtimes_[active_].algorithms.at(state);
        for (std::size_t i = 0; i < st.actions.size(); ++i)
        {
            AlgContext ctx{t, event, vars_};
            if (!algs[i]->run(ctx))
            {
                break;
            }
            for (const auto& e : st.actions[i].emits)
            {
                Emission em{e, {}};
                for (const auto& d : spec_.output(e)->data)
                {
                    if (auto it = vars_.find(d); it != vars_.end())
                    {
                        em.data[d] = it->second;
                    }
                }
                out.push_back(std::move(em));
            }
        }
        return out;
    }

    ActivationResult ComponentInstance::activate(const std::string& event, const Payload& data, Time t,
                                                 const Platform* platform)
    {
        const EventPortSpec* port = spec_.input(event);
        if (port == nullptr)
        {
            throw ComponentError("component " + spec_.id + " has no input event " + event);
        }
        for (const auto& d : port->data)
        {
            if (auto it = data.find(d); it != data.end())
            {
                vars_[d] = it->second;
            }
        }
        ActivationResult r;
        r.behaviour = active_behaviour();
        const auto* tr = spec_.behaviours[active_].ecc.select(state_, event, vars_);
        if (tr == nullptr)
        {
            r.state = state_;
            r.completion = t;
            return r;
        }
        r.fired = true;
        state_ = tr->dst;
        r.state = state_;
        r.emissions = run_state(state_, event, t);
        if (platform == nullptr)
        {
            r.completion = t;
        }
        else if (auto d = platform->execution_duration(spec_.id, r.behaviour))
        {
            r.completion = t + *d;
        }
        return r;
    }
} // namespace rcps
