#include "rcps/resilience_manager.hpp"

#include <algorithm>

namespace rcps
{
    ResilienceManager::ResilienceManager(std::string component, std::vector<std::string> preference,
                                         std::vector<ContractBinding> bindings, FaultInPolicy policy,
                                         SynthesisOptions options)
        : component_(std::move(component)), preference_(std::move(preference)), policy_(policy), options_(options)
    {
        if (preference_.empty())
        {
            throw ComponentError("resilience manager of " + component_ + " needs at least one behaviour");
        }
        for (auto& b : bindings)
        {
            Slot s;
            s.primary = synthesize_observer(component_ + "." + b.contract.id, b.contract, options_);
            s.binding = std::move(b);
            slots_.push_back(std::move(s));
        }
    }

    void ResilienceManager::log(Time t, const std::string& contract, const std::string& transition,
                                const std::string& detail)
    {
        log_.push_back(VerdictRecord{t, component_, contract, transition, detail});
    }

    void ResilienceManager::observe(std::size_t i, const ObservedEvent& event, Time t)
    {
        Slot& s = slots_.at(i);
        s.primary->step_event(event, t);
        if (auto* fsm = dynamic_cast<FsmObserver*>(s.primary.get()); fsm != nullptr && event.kind == ObsEventKind::sample)
        {
            const auto& g = s.binding.contract.guarantee;
            const std::string port = std::holds_alternative<BoundGuarantee>(g)
                                         ? std::get<BoundGuarantee>(g).port
                                         : std::get<SetMembershipGuarantee>(g).port;
            const std::string value = value_to_string(event.values.at(port));
            if (!fsm->last_reading_ok())
            {
                log(t, s.binding.contract.id, "flag", port + "=" + value);
            }
            else if (fsm->last_assumption_violated())
            {
                log(t, s.binding.contract.id, "assumption", port + "=" + value);
            }
        }
        if (!s.probe)
        {
            return;
        }
        s.probe->step_event(event, t);
        if (!s.episode || s.probe->verdict().violated())
        {
            return;
        }
        if (auto* fsm = dynamic_cast<FsmObserver*>(s.probe.get());
            fsm != nullptr && event.kind == ObsEventKind::sample && fsm->last_reading_ok() && !s.episode->close_at)
        {
            s.episode->close_at = t;
        }
        if (s.probe->model() == ObserverModel::hybrid && event.kind == ObsEventKind::stop && !s.episode->close_at &&
            s.episode->probe_start && *s.episode->probe_start < t)
        {
            s.episode->close_at = t;
        }
    }

    void ResilienceManager::advance(Time t)
    {
        for (auto& s : slots_)
        {
            s.primary->advance_time(t);
            if (s.probe)
            {
                s.probe->advance_time(t);
            }
        }
    }

    void ResilienceManager::on_activation_start(Time t)
    {
        for (auto& s : slots_)
        {
            if (!s.episode || !s.episode->awaiting_probe)
            {
                continue;
            }
            s.probe = synthesize_observer(s.primary->id() + ".probe", s.binding.contract, options_);
            s.probe->advance_time(t);
            s.episode->awaiting_probe = false;
            s.episode->probe_start = t;
            s.episode->probe_violation_handled = false;
            s.episode->close_at.reset();
            if (const auto* g = std::get_if<TimingGuarantee>(&s.binding.contract.guarantee))
            {
                s.episode->close_at = t + Time::from_ms_rounded(g->period_ms);
            }
        }
    }

    void ResilienceManager::blame(Time t, const std::string& active, const std::string& reason,
                                  std::vector<RmDecision>& out)
    {
        blamed_.insert(active);
        auto next = std::find_if(preference_.begin(), preference_.end(),
                                 [&](const std::string& b) { return !blamed_.contains(b); });
        if (next != preference_.end())
        {
            if (requested_ == *next)
            {
                return;
            }
            requested_ = *next;
            const std::string note = reason + " behaviour=" + active + " switch_to=" + *next;
            out.push_back(RmDecision{RmDecision::Kind::switch_behaviour, *next, note});
            out.push_back(RmDecision{RmDecision::Kind::fault_message, "", note});
            log(t, "-", "switch", active + "->" + *next);
        }
        else if (!escalated_)
        {
            escalated_ = true;
            const std::string note = reason + " behaviour=" + active + " exhausted";
            out.push_back(RmDecision{RmDecision::Kind::escalate, active, note});
            out.push_back(RmDecision{RmDecision::Kind::fault_message, "", "escalate " + note});
            log(t, "-", "escalate", active);
        }
    }

    std::vector<RmDecision> ResilienceManager::rm_step(Time t, const std::string& active)
    {
        std::vector<RmDecision> out;
        if (requested_ && *requested_ == active)
        {
            requested_.reset();
        }
        for (auto& s : slots_)
        {
            const std::string& cid = s.binding.contract.id;
            if (!s.episode)
            {
                const Verdict& v = s.primary->verdict();
                if (!v.violated())
                {
                    continue;
                }
                Episode ep;
                ep.detected_at = v.at;
                s.episode = ep;
                s.probe.reset();
                log(v.at, cid, "violated", violation_name(*v.kind));
                blame(t, active, "violation contract=" + cid, out);
                continue;
            }
            Episode& ep = *s.episode;
            if (s.probe && s.probe->verdict().violated())
            {
                if (!ep.probe_violation_handled)
                {
                    ep.probe_violation_handled = true;
                    const Verdict& v = s.probe->verdict();
                    log(v.at, cid, "violated", violation_name(*v.kind) + " probe");
                    blame(t, active, "violation contract=" + cid, out);
                    s.probe.reset();
                    ep.awaiting_probe = true;
                    ep.close_at.reset();
                }
                continue;
            }
            if (s.probe && ep.close_at && t >= *ep.close_at)
            {
                log(t, cid, "recovered", "behaviour=" + active);
                s.primary = std::move(s.probe);
                s.episode.reset();
            }
        }
        const bool any_open = std::any_of(slots_.begin(), slots_.end(), [](const Slot& s) { return s.episode; });
        if (!any_open)
        {
            blamed_.clear();
            escalated_ = false;
        }
        return out;
    }

    std::vector<RmDecision> ResilienceManager::on_fault_message(const std::string& note, Time t,
                                                                const std::string& active)
    {
        log(t, "-", "fault_in", note);
        std::vector<RmDecision> out;
        if (policy_ == FaultInPolicy::switch_next)
        {
            blame(t, active, "fault_in", out);
        }
        return out;
    }

    std::vector<Time> ResilienceManager::wakeups() const
    {
        std::vector<Time> out;
        for (const auto& s : slots_)
        {
            if (auto d = s.primary->next_deadline(); d && !s.episode)
            {
                out.push_back(*d);
            }
            if (s.probe)
            {
                if (auto d = s.probe->next_deadline())
                {
                    out.push_back(*d);
                }
            }
            if (s.episode && s.episode->close_at && s.probe)
            {
                out.push_back(*s.episode->close_at);
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::vector<std::string> ResilienceManager::dump(Time t) const
    {
        std::vector<std::string> out;
        for (const auto& s : slots_)
        {
            out.push_back(s.primary->dump(t));
            if (s.probe)
            {
                out.push_back(s.probe->dump(t));
            }
        }
        return out;
    }
} // namespace rcps
