#include "rcps/runtime.hpp"

namespace rcps
{
    namespace
    {
        std::string data_port(const Guarantee& g)
        {
            if (const auto* b = std::get_if<BoundGuarantee>(&g))
            {
                return b->port;
            }
            if (const auto* s = std::get_if<SetMembershipGuarantee>(&g))
            {
                return s->port;
            }
            if (const auto* e = std::get_if<EnvelopeGuarantee>(&g))
            {
                return e->port;
            }
            return {};
        }

        std::string sample_event_of(const ContractBinding& b)
        {
            if (!b.sample_event.empty())
            {
                return b.sample_event;
            }
            if (std::holds_alternative<TimingGuarantee>(b.contract.guarantee) && !b.contract.inputs.empty())
            {
                return b.contract.inputs.front().name;
            }
            return {};
        }
    } // namespace

    Runtime::Runtime(Kernel& kernel, Platform& platform, Middleware& middleware, RuntimeOptions options)
        : kernel_(kernel), platform_(platform), middleware_(middleware), options_(options)
    {
        if (options_.scan_period && options_.scan_period->ticks() <= 0)
        {
            throw ComponentError("scan period must be positive");
        }
    }

    ComponentInstance& Runtime::add_component(ComponentSpec spec)
    {
        if (nodes_.contains(spec.id))
        {
            throw ComponentError("duplicate component " + spec.id);
        }
        if (started_)
        {
            throw ComponentError("components cannot be added after start");
        }
        Node n;
        n.inst = std::make_unique<ComponentInstance>(std::move(spec));
        const auto& s = n.inst->spec();
        n.rm = std::make_unique<ResilienceManager>(s.id, s.behaviour_ids(), s.contracts, s.fault_policy,
                                                   options_.synthesis);
        const std::string id = s.id;
        order_.push_back(id);
        auto [it, inserted] = nodes_.emplace(id, std::move(n));
        return *it->second.inst;
    }

    Runtime::Node& Runtime::node(const std::string& id)
    {
        auto it = nodes_.find(id);
        if (it == nodes_.end())
        {
            throw ComponentError("unknown component " + id);
        }
        return it->second;
    }

    ComponentInstance& Runtime::instance(const std::string& id) { return *node(id).inst; }
    ResilienceManager& Runtime::manager(const std::string& id) { return *node(id).rm; }

    bool Runtime::busy(const std::string& id) const
    {
        auto it = nodes_.find(id);
        if (it == nodes_.end())
        {
            throw ComponentError("unknown component " + id);
        }
        return it->second.busy;
    }

    void Runtime::start()
    {
        if (started_)
        {
            return;
        }
        started_ = true;
        platform_.require_mapped(order_);
        for (const auto& id : order_)
        {
            Node& n = nodes_.at(id);
            for (const auto& port : n.inst->spec().inputs)
            {
                const std::string topic = port.topic_name();
                if (!middleware_.has_topic(topic))
                {
                    middleware_.add_topic(TopicSpec{topic, "", {}});
                }
                const std::string event = port.name;
                Node* np = &n;
                middleware_.subscribe(topic, id, [this, np, event](const Message& m) { handle_input(*np, event, m.payload); });
            }
            for (const auto& port : n.inst->spec().outputs)
            {
                if (!middleware_.has_topic(port.topic_name()))
                {
                    middleware_.add_topic(TopicSpec{port.topic_name(), "", {}});
                }
            }
            for (const auto& src : n.inst->spec().fault_sources)
            {
                const std::string topic = middleware_.ensure_fault_topic(src);
                Node* np = &n;
                middleware_.subscribe(topic, id, [this, np](const Message& m) {
                    const Time t = kernel_.now();
                    auto decisions = np->rm->on_fault_message(m.topic + " " + m.note, t, np->inst->active_behaviour());
                    after_rm(*np, decisions);
                });
            }
        }
        if (options_.scan_period)
        {
            schedule_scan(kernel_.now());
        }
    }

    void Runtime::schedule_scan(Time t)
    {
        kernel_.schedule(t, "runtime", "scan", "", [this, t] {
            cyclic_scan(t);
            schedule_scan(t + *options_.scan_period);
        });
    }

    void Runtime::inject(const std::string& component, const std::string& event, const Payload& data)
    {
        handle_input(node(component), event, data);
    }

    void Runtime::handle_input(Node& n, const std::string& event, const Payload& data)
    {
        if (n.inst->spec().input(event) == nullptr)
        {
            throw ComponentError("component " + n.inst->id() + " has no input event " + event);
        }
        if (options_.scan_period)
        {
            n.latched.emplace_back(event, data);
            return;
        }
        if (n.busy)
        {
            if (n.inst->spec().input(event)->policy == InputPolicy::drop_when_busy)
            {
                activations_.push_back(ActivationRecord{kernel_.now(), n.inst->id(), n.inst->active_behaviour(),
                                                        n.inst->ecc_state(), event, "dropped"});
            }
            else
            {
                n.queue.emplace_back(event, data);
            }
            return;
        }
        start_activation(n, event, data);
    }

    void Runtime::start_activation(Node& n, const std::string& event, const Payload& data)
    {
        const Time t = kernel_.now();
        n.inst->apply_pending_switch(t);
        n.rm->on_activation_start(t);
        ActivationResult r = n.inst->activate(event, data, t, &platform_);
        activations_.push_back(ActivationRecord{t, n.inst->id(), r.behaviour, r.state, event,
                                                r.fired ? emissions_to_string(r.emissions) : "-"});
        if (!r.fired)
        {
            return;
        }
        observe_start(n, event, data, t);
        after_rm(n);
        n.busy = true;
        if (!r.completion)
        {
            return;
        }
        std::vector<std::pair<std::string, Payload>> events{{event, data}};
        Node* np = &n;
        kernel_.schedule(*r.completion, n.inst->id(), "complete", event,
                         [this, np, events, r] { complete_activation(*np, events, r); });
    }

    void Runtime::complete_activation(Node& n, const std::vector<std::pair<std::string, Payload>>& events,
                                      const ActivationResult& r)
    {
        const Time t = kernel_.now();
        n.busy = false;
        for (const auto& [event, data] : events)
        {
            observe_complete(n, event, data, r.emissions, t);
        }
        for (const auto& e : r.emissions)
        {
            middleware_.publish(n.inst->spec().output(e.event)->topic_name(), n.inst->id(), e.data, r.behaviour);
        }
        after_rm(n);
        if (!options_.scan_period && !n.queue.empty())
        {
            auto next = std::move(n.queue.front());
            n.queue.pop_front();
            start_activation(n, next.first, next.second);
        }
    }

    void Runtime::observe_start(Node& n, const std::string& event, const Payload& data, Time t)
    {
        for (std::size_t i = 0; i < n.rm->contract_count(); ++i)
        {
            const ContractBinding& b = n.rm->binding(i);
            const Guarantee& g = b.contract.guarantee;
            if (std::holds_alternative<TimingGuarantee>(g))
            {
                if (event == sample_event_of(b))
                {
                    n.rm->observe(i, ObservedEvent{ObsEventKind::sample, data}, t);
                }
            }
            else if (std::holds_alternative<EnvelopeGuarantee>(g))
            {
                const std::string port = data_port(g);
                if (event == b.start_event)
                {
                    n.rm->observe(i, ObservedEvent{ObsEventKind::start, data}, t);
                }
                else if (event == b.stop_event)
                {
                    n.rm->observe(i, ObservedEvent{ObsEventKind::stop, data}, t);
                }
                else if (b.sample_event.empty() ? data.contains(port) : event == b.sample_event)
                {
                    n.rm->observe(i, ObservedEvent{ObsEventKind::sample, data}, t);
                }
            }
        }
    }

    void Runtime::observe_complete(Node& n, const std::string& event, const Payload& data,
                                   const std::vector<Emission>& emissions, Time t)
    {
        for (std::size_t i = 0; i < n.rm->contract_count(); ++i)
        {
            const ContractBinding& b = n.rm->binding(i);
            const Guarantee& g = b.contract.guarantee;
            if (std::holds_alternative<TimingGuarantee>(g))
            {
                if (event == sample_event_of(b))
                {
                    n.rm->observe(i, ObservedEvent{ObsEventKind::complete, data}, t);
                }
                continue;
            }
            if (std::holds_alternative<EnvelopeGuarantee>(g))
            {
                continue;
            }
            if (!b.sample_event.empty() && event != b.sample_event)
            {
                continue;
            }
            Sample sample = data;
            for (const auto& e : emissions)
            {
                for (const auto& [k, v] : e.data)
                {
                    sample[k] = v;
                }
            }
            if (sample.contains(data_port(g)))
            {
                n.rm->observe(i, ObservedEvent{ObsEventKind::sample, sample}, t);
            }
        }
    }

    void Runtime::after_rm(Node& n, const std::vector<RmDecision>& extra)
    {
        const Time t = kernel_.now();
        std::vector<RmDecision> decisions = extra;
        auto more = n.rm->rm_step(t, n.inst->active_behaviour());
        decisions.insert(decisions.end(), more.begin(), more.end());
        for (const auto& d : decisions)
        {
            switch (d.kind)
            {
            case RmDecision::Kind::switch_behaviour:
                n.inst->switch_behavior(d.behaviour);
                break;
            case RmDecision::Kind::fault_message:
                middleware_.publish(middleware_.ensure_fault_topic(n.inst->id()), n.inst->id(), {}, "", d.note);
                break;
            case RmDecision::Kind::escalate:
                break;
            }
        }
        const auto& log = n.rm->log();
        for (; n.rm_log_seen < log.size(); ++n.rm_log_seen)
        {
            verdicts_.push_back(log[n.rm_log_seen]);
        }
        if (options_.observer_dumps)
        {
            for (auto& line : n.rm->dump(t))
            {
                dumps_.push_back(std::move(line));
            }
        }
        for (Time w : n.rm->wakeups())
        {
            if (w < t)
            {
                w = t;
            }
            if (!n.wakeups.insert(w).second)
            {
                continue;
            }
            Node* np = &n;
            kernel_.schedule_tick_end(w, n.inst->id(), "rm_wakeup", w.to_string(), [this, np, w] {
                np->wakeups.erase(w);
                np->rm->advance(kernel_.now());
                after_rm(*np);
            });
        }
    }

    std::size_t Runtime::cyclic_scan(Time t)
    {
        std::size_t count = 0;
        for (const auto& id : order_)
        {
            Node& n = nodes_.at(id);
            auto latched = std::move(n.latched);
            n.latched.clear();
            n.inst->apply_pending_switch(t);
            n.rm->on_activation_start(t);
            ActivationResult total;
            total.behaviour = n.inst->active_behaviour();
            std::string names;
            std::vector<std::pair<std::string, Payload>> fired;
            for (const auto& [event, data] : latched)
            {
                ActivationResult r = n.inst->activate(event, data, t, nullptr);
                names += (names.empty() ? "" : "+") + event;
                if (r.fired)
                {
                    total.fired = true;
                    fired.emplace_back(event, data);
                    total.emissions.insert(total.emissions.end(), r.emissions.begin(), r.emissions.end());
                    observe_start(n, event, data, t);
                }
            }
            total.state = n.inst->ecc_state();
            activations_.push_back(ActivationRecord{t, id, total.behaviour, total.state, names.empty() ? "-" : names,
                                                    emissions_to_string(total.emissions)});
            ++count;
            after_rm(n);
            const auto d = platform_.execution_duration(id, total.behaviour);
            if (!d)
            {
                continue;
            }
            Node* np = &n;
            kernel_.schedule(t + *d, id, "complete", "scan",
                             [this, np, fired, total] { complete_activation(*np, fired, total); });
        }
        return count;
    }
} // namespace rcps
