#include "rcps/platform.hpp"

#include <algorithm>
#include <cstdio>

namespace rcps
{
    void FaultSpec::validate() const
    {
        if (target.empty())
        {
            throw PlatformError("fault has no target");
        }
        if (t0 < Time::zero())
        {
            throw PlatformError("fault t0 must be >= 0");
        }
        if (kind == FaultKind::intermittent && (up_phase <= Time::zero() || down_phase <= Time::zero()))
        {
            throw PlatformError("intermittent fault periods must be positive");
        }
        if (kind == FaultKind::transient && duration <= Time::zero())
        {
            throw PlatformError("transient fault duration must be positive");
        }
        if (effect == FaultEffect::slowdown && !(factor > Rational{1, 1}))
        {
            throw PlatformError("slowdown factor must be > 1");
        }
    }

    std::string FaultSpec::kind_name() const
    {
        switch (kind)
        {
        case FaultKind::permanent:
            return "permanent";
        case FaultKind::intermittent:
            return "intermittent";
        case FaultKind::transient:
            return "transient";
        }
        return "?";
    }

    std::string FaultSpec::effect_name() const
    {
        switch (effect)
        {
        case FaultEffect::down:
            return "down";
        case FaultEffect::slowdown:
            return "slowdown(" + factor.to_string() + ")";
        case FaultEffect::stuck_value: {
            char buf[48];
            std::snprintf(buf, sizeof buf, "stuck(%.17g)", stuck_value);
            return buf;
        }
        }
        return "?";
    }

    Platform::Platform(Kernel& kernel) : kernel_(kernel) {}

    void Platform::add_target(const std::string& id, TargetKind kind)
    {
        if (targets_.contains(id))
        {
            throw PlatformError("duplicate platform id '" + id + "'");
        }
        Target t;
        t.kind = kind;
        t.availability.emplace_back(Time::zero(), 1.0);
        targets_.emplace(id, std::move(t));
    }

    void Platform::add_node(const std::string& id)
    {
        add_target(id, TargetKind::node);
        node_order_.push_back(id);
    }

    void Platform::add_sensor(const std::string& id) { add_target(id, TargetKind::sensor); }
    void Platform::add_link(const std::string& id) { add_target(id, TargetKind::link); }

    bool Platform::has_target(const std::string& id) const { return targets_.contains(id); }

    std::vector<PlatformNode> Platform::nodes() const
    {
        std::vector<PlatformNode> out;
        for (const auto& id : node_order_)
        {
            out.push_back(PlatformNode{id, targets_.at(id).status});
        }
        return out;
    }

    Platform::Target& Platform::target(const std::string& id)
    {
        auto it = targets_.find(id);
        if (it == targets_.end())
        {
            throw PlatformError("unknown platform id '" + id + "'");
        }
        return it->second;
    }

    const Platform::Target& Platform::target(const std::string& id) const
    {
        auto it = targets_.find(id);
        if (it == targets_.end())
        {
            throw PlatformError("unknown platform id '" + id + "'");
        }
        return it->second;
    }

    void Platform::assign(const std::string& component, const std::string& node)
    {
        if (target(node).kind != TargetKind::node)
        {
            throw PlatformError("'" + node + "' is not a computational node");
        }
        if (mapping_.assignments.contains(component))
        {
            throw PlatformError("component '" + component + "' is already assigned");
        }
        mapping_.assignments[component] = node;
    }

    void Platform::set_exec_cost(const std::string& component, const std::string& behaviour, Time cost)
    {
        if (cost < Time::zero())
        {
            throw PlatformError("execution cost must be >= 0");
        }
        mapping_.exec_cost[{component, behaviour}] = cost;
    }

    void Platform::set_comm_cost(const std::string& edge, const std::string& behaviour, Time cost)
    {
        if (cost < Time::zero())
        {
            throw PlatformError("communication cost must be >= 0");
        }
        mapping_.comm_cost[{edge, behaviour}] = cost;
    }

    void Platform::require_mapped(const std::vector<std::string>& components) const
    {
        for (const auto& c : components)
        {
            if (!mapping_.assignments.contains(c))
            {
                throw PlatformError("component '" + c + "' is not assigned to a node");
            }
        }
    }

    const std::string& Platform::node_of(const std::string& component) const
    {
        auto it = mapping_.assignments.find(component);
        if (it == mapping_.assignments.end())
        {
            throw PlatformError("component '" + component + "' is not mapped");
        }
        return it->second;
    }

    const TargetStatus& Platform::status(const std::string& id) const { return target(id).status; }

    std::optional<Time> Platform::execution_duration(const std::string& component, const std::string& behaviour) const
    {
        const auto& node = node_of(component);
        auto it = mapping_.exec_cost.find({component, behaviour});
        if (it == mapping_.exec_cost.end())
        {
            throw PlatformError("no execution cost for (" + component + ", " + behaviour + ")");
        }
        const auto& st = status(node);
        if (st.health == Health::down)
        {
            return std::nullopt;
        }
        return st.slowdown.scale(it->second);
    }

    std::optional<Time> Platform::comm_cost(const std::string& edge, const std::string& behaviour) const
    {
        auto it = mapping_.comm_cost.find({edge, behaviour});
        if (it == mapping_.comm_cost.end())
        {
            return std::nullopt;
        }
        return it->second;
    }

    FaultHandle Platform::inject_fault(const FaultSpec& spec)
    {
        spec.validate();
        (void)target(spec.target);
        if (spec.t0 < kernel_.now())
        {
            throw PlatformError("fault t0 is in the past");
        }
        const std::size_t idx = faults_.size();
        faults_.push_back(spec);
        const std::string detail = spec.kind_name() + ";" + spec.effect_name();
        switch (spec.kind)
        {
        case FaultKind::permanent:
            kernel_.schedule(spec.t0, spec.target, "fault_begin", detail, [this, idx] { activate(idx, kernel_.now()); });
            break;
        case FaultKind::transient:
            kernel_.schedule(spec.t0, spec.target, "fault_begin", detail, [this, idx] { activate(idx, kernel_.now()); });
            kernel_.schedule(spec.t0 + spec.duration, spec.target, "fault_end", detail,
                             [this, idx] { deactivate(idx, kernel_.now()); });
            break;
        case FaultKind::intermittent:
            schedule_intermittent(idx, spec.t0);
            break;
        }
        return FaultHandle{idx, spec.target};
    }

    void Platform::schedule_intermittent(std::size_t fault, Time phase_start)
    {
        const FaultSpec& spec = faults_[fault];
        const std::string detail = spec.kind_name() + ";" + spec.effect_name();
        const Time begin = phase_start + spec.up_phase;
        const Time end = begin + spec.down_phase;
        kernel_.schedule(begin, spec.target, "fault_begin", detail, [this, fault] { activate(fault, kernel_.now()); });
        kernel_.schedule(end, spec.target, "fault_end", detail, [this, fault, end] {
            deactivate(fault, kernel_.now());
            schedule_intermittent(fault, end);
        });
    }

    void Platform::activate(std::size_t fault, Time at)
    {
        const FaultSpec& spec = faults_[fault];
        auto& t = target(spec.target);
        t.active_faults.push_back(fault);
        fault_log_.push_back(FaultRecord{at, spec.target, "begin", spec.kind_name(), spec.effect_name()});
        refresh(spec.target, at);
    }

    void Platform::deactivate(std::size_t fault, Time at)
    {
        const FaultSpec& spec = faults_[fault];
        auto& t = target(spec.target);
        auto it = std::find(t.active_faults.begin(), t.active_faults.end(), fault);
        if (it != t.active_faults.end())
        {
            t.active_faults.erase(it);
        }
        fault_log_.push_back(FaultRecord{at, spec.target, "end", spec.kind_name(), spec.effect_name()});
        refresh(spec.target, at);
    }

    void Platform::refresh(const std::string& id, Time at)
    {
        auto& t = target(id);
        TargetStatus st;
        for (auto f : t.active_faults)
        {
            const auto& spec = faults_[f];
            switch (spec.effect)
            {
            case FaultEffect::down:
                st.health = Health::down;
                break;
            case FaultEffect::stuck_value:
                st.stuck_value = spec.stuck_value;
                if (st.health != Health::down)
                {
                    st.health = Health::degraded;
                }
                break;
            case FaultEffect::slowdown:
                if (st.health != Health::down)
                {
                    st.health = Health::degraded;
                }
                st.slowdown = std::max(st.slowdown, spec.factor);
                break;
            }
        }
        t.status = st;

        double a = 1.0;
        if (st.health == Health::down || st.stuck_value)
        {
            a = 0.0;
        }
        else if (st.health == Health::degraded && degraded_policy_ == DegradedAvailability::inverse_factor)
        {
            a = 1.0 / st.slowdown.to_double();
        }
        t.availability.emplace_back(at, a);
    }

    StepTrace Platform::availability(const std::string& id, Time window_end) const
    {
        const auto& t = target(id);
        std::vector<std::pair<Time, double>> changes;
        for (const auto& c : t.availability)
        {
            if (c.first < window_end)
            {
                changes.push_back(c);
            }
        }
        return StepTrace::from_changes(changes, window_end);
    }

    StepTrace Platform::availability(const FaultHandle& handle, Time window_end) const
    {
        return availability(handle.target, window_end);
    }
} // namespace rcps
