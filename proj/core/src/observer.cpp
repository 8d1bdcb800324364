#include "rcps/observer.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace rcps
{
    std::string Verdict::to_string() const
    {
        if (!violated())
        {
            return "ok";
        }
        return "violated:" + violation_name(*kind) + "@" + at.to_string();
    }

    std::string obs_event_name(ObsEventKind k)
    {
        switch (k)
        {
        case ObsEventKind::sample:
            return "sample";
        case ObsEventKind::complete:
            return "complete";
        case ObsEventKind::start:
            return "start";
        case ObsEventKind::stop:
            return "stop";
        }
        return "?";
    }

    Observer::Observer(std::string id, Contract contract) : id_(std::move(id)), contract_(std::move(contract)) {}

    void Observer::violate(ViolationKind kind, Time at)
    {
        if (verdict_.violated())
        {
            return;
        }
        verdict_.status = VerdictStatus::violated;
        verdict_.kind = kind;
        verdict_.at = at;
    }

    std::string Observer::verdict_field() const { return verdict_.to_string(); }

    // ---------------------------------------------------------------- FSM

    FsmObserver::FsmObserver(std::string id, Contract contract) : Observer(std::move(id), std::move(contract))
    {
        const auto& g = this->contract().guarantee;
        if (!std::holds_alternative<BoundGuarantee>(g) && !std::holds_alternative<SetMembershipGuarantee>(g))
        {
            throw ObserverError("finite-state observer needs a bound or set-membership contract");
        }
    }

    Verdict FsmObserver::step_event(const ObservedEvent& event, Time t)
    {
        if (t < last_)
        {
            throw ObserverError("time regression at observer " + id());
        }
        last_ = t;
        if (event.kind != ObsEventKind::sample)
        {
            return verdict();
        }
        const PointResult r = check_point(contract(), event.values);
        last_ok_ = r.holds;
        last_assumption_violated_ = r.assumption_violated;
        if (!r.holds)
        {
            ++failed_;
            violate(ViolationKind::out_of_range, t);
        }
        return verdict();
    }

    Verdict FsmObserver::advance_time(Time t)
    {
        if (t < last_)
        {
            throw ObserverError("time regression at observer " + id());
        }
        last_ = t;
        return verdict();
    }

    void FsmObserver::reset()
    {
        clear_verdict();
        last_ok_ = true;
        last_assumption_violated_ = false;
    }

    std::unique_ptr<Observer> FsmObserver::clone() const { return std::make_unique<FsmObserver>(*this); }

    std::string FsmObserver::dump(Time t) const
    {
        return std::to_string(t.ticks()) + "," + id() + "," + (verdict().violated() ? "Violated" : "Holds") + "," +
               verdict_field();
    }

    // ---------------------------------------------------------------- TA

    namespace
    {
        enum TimingLoc : std::size_t
        {
            kInit,
            kIdle,
            kBusy,
            kMissedSample,
            kMissedDeadline
        };

        std::int64_t local_ticks(Time t, std::int64_t tpm)
        {
            const std::int64_t n = t.ticks() * tpm;
            if (n % Time::kTicksPerMs != 0)
            {
                throw ObserverError("time " + t.to_string() + " ms is not representable at the observer resolution");
            }
            return n / Time::kTicksPerMs;
        }

        Time global_ceil(std::int64_t local, std::int64_t tpm)
        {
            const std::int64_t n = local * Time::kTicksPerMs;
            return Time::from_ticks(n >= 0 ? (n + tpm - 1) / tpm : -((-n) / tpm));
        }

        std::int64_t ms_to_local(double ms, std::int64_t ticks_per_ms)
        {
            const double v = ms * static_cast<double>(ticks_per_ms);
            const double r = std::round(v);
            if (std::fabs(v - r) > 1e-6)
            {
                throw ObserverError("timing constant " + std::to_string(ms) + " ms is not a whole number of ticks");
            }
            return static_cast<std::int64_t>(r);
        }
    } // namespace

    TimedObserver::TimedObserver(std::string id, Contract c, std::int64_t ticks_per_ms)
        : Observer(std::move(id), std::move(c)), tpm_(ticks_per_ms)
    {
        const auto* g = std::get_if<TimingGuarantee>(&contract().guarantee);
        if (g == nullptr)
        {
            throw ObserverError("timed observer needs a timing contract");
        }
        if (ticks_per_ms <= 0)
        {
            throw ObserverError("tick resolution must be positive");
        }
        const std::int64_t period = ms_to_local(g->period_ms, ticks_per_ms);
        const std::int64_t deadline = ms_to_local(g->deadline_ms, ticks_per_ms);

        ta_.add_location("Init");
        ta_.add_location("Idle");
        ta_.add_location("Busy");
        ta_.add_location("MissedSample", ViolationKind::missed_sample);
        ta_.add_location("MissedDeadline", ViolationKind::missed_deadline);
        const auto x = ta_.add_clock("x");
        const auto y = ta_.add_clock("y");
        ta_.set_initial(kInit);

        ta_.add_transition({kInit, kBusy, "sample", {}, {x, y}, 0});
        ta_.add_transition({kIdle, kBusy, "sample", {}, {x, y}, 0});
        ta_.add_transition({kBusy, kBusy, "sample", {}, {x}, 0});
        ta_.add_transition({kBusy, kIdle, "complete", {{y, CmpOp::le, deadline}}, {}, 0});
        ta_.add_transition({kBusy, kMissedDeadline, std::nullopt, {{y, CmpOp::ge, deadline}}, {}, 2});
        ta_.add_transition({kBusy, kMissedSample, std::nullopt, {{x, CmpOp::ge, period}}, {}, 1});
        ta_.add_transition({kIdle, kMissedSample, std::nullopt, {{x, CmpOp::ge, period}}, {}, 1});
    }

    Time TimedObserver::to_local(Time t) const { return Time::from_ticks(local_ticks(t, tpm_)); }

    Time TimedObserver::to_global_ceil(Time local) const { return global_ceil(local.ticks(), tpm_); }

    void TimedObserver::absorb_location()
    {
        const auto& loc = ta_.location_info();
        if (loc.violation)
        {
            violate(*loc.violation, to_global_ceil(ta_.entered_at()));
        }
    }

    Verdict TimedObserver::step_event(const ObservedEvent& event, Time t)
    {
        const Time local = to_local(t);
        if (event.kind == ObsEventKind::sample || event.kind == ObsEventKind::complete)
        {
            ta_.step_event(obs_event_name(event.kind), local);
        }
        else if (local < ta_.last_time())
        {
            throw ObserverError("time regression at observer " + id());
        }
        absorb_location();
        return verdict();
    }

    Verdict TimedObserver::advance_time(Time t)
    {
        ta_.advance_time(to_local(t));
        absorb_location();
        return verdict();
    }

    void TimedObserver::reset()
    {
        ta_.reset();
        clear_verdict();
    }

    std::unique_ptr<Observer> TimedObserver::clone() const { return std::make_unique<TimedObserver>(*this); }

    std::optional<Time> TimedObserver::next_deadline() const
    {
        const auto local = ta_.next_delay_firing();
        if (!local)
        {
            return std::nullopt;
        }
        return to_global_ceil(*local);
    }

    std::string TimedObserver::dump(Time t) const
    {
        std::ostringstream out;
        const Time local = to_local(t);
        out << t.ticks() << ',' << id() << ',' << ta_.location_info().name;
        const auto& clocks = ta_.clock_names();
        for (std::size_t i = 0; i < clocks.size(); ++i)
        {
            const double ms = static_cast<double>(ta_.clock_value(i, local)) /
                              static_cast<double>(tpm_);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f", ms);
            out << ',' << clocks[i] << '=' << buf;
        }
        out << ',' << verdict_field();
        return out.str();
    }

    // ---------------------------------------------------------------- hybrid

    HybridObserver::HybridObserver(std::string id, Contract c, SynthesisOptions options)
        : Observer(std::move(id), std::move(c)), options_(options), h_s_(0.0)
    {
        const auto* g = std::get_if<EnvelopeGuarantee>(&contract().guarantee);
        if (g == nullptr)
        {
            throw ObserverError("hybrid observer needs an envelope contract");
        }
        g_ = *g;
        if (options_.ticks_per_ms <= 0 || options_.hybrid_step_ticks <= 0)
        {
            throw ObserverError("invalid hybrid integration step");
        }
        h_s_ = static_cast<double>(options_.hybrid_step_ticks) / (static_cast<double>(options_.ticks_per_ms) * 1000.0);
    }

    std::string HybridObserver::mode_name() const
    {
        switch (mode_)
        {
        case Mode::idle:
            return "idle";
        case Mode::tracking:
            return "tracking";
        case Mode::violated:
            return "violated";
        }
        return "?";
    }

    double HybridObserver::flow_step(double p) const
    {
        const double k = g_.k1;
        const double h = h_s_;
        if (options_.integrator == Integrator::euler)
        {
            return p + h * k * p;
        }
        const double k1 = k * p;
        const double k2 = k * (p + 0.5 * h * k1);
        const double k3 = k * (p + 0.5 * h * k2);
        const double k4 = k * (p + h * k3);
        return p + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    Time HybridObserver::step_time() const
    {
        return global_ceil(origin_ + steps_done_ * options_.hybrid_step_ticks, options_.ticks_per_ms);
    }

    void HybridObserver::integrate_through(std::int64_t local_tick)
    {
        if (mode_ != Mode::tracking)
        {
            return;
        }
        const std::int64_t h = options_.hybrid_step_ticks;
        while (origin_ + (steps_done_ + 1) * h <= local_tick)
        {
            p_exp_ = flow_step(p_exp_);
            ++steps_done_;
            if (!p_obs_)
            {
                continue;
            }
            const bool low = *p_obs_ < (1.0 - g_.rel_tol) * p_exp_;
            const bool high = *p_obs_ > (1.0 + g_.rel_tol) * p_exp_;
            if (low || high)
            {
                mode_ = Mode::violated;
                violate(ViolationKind::envelope_exceeded, step_time());
                return;
            }
        }
    }

    Verdict HybridObserver::step_event(const ObservedEvent& event, Time t)
    {
        if (t < last_)
        {
            throw ObserverError("time regression at observer " + id());
        }
        last_ = t;
        const std::int64_t local = local_ticks(t, options_.ticks_per_ms);
        const auto value = [&]() -> std::optional<double> {
            auto it = event.values.find(g_.port);
            if (it == event.values.end())
            {
                return std::nullopt;
            }
            return as_double(it->second);
        };
        switch (event.kind)
        {
        case ObsEventKind::start:
            integrate_through(local - 1);
            if (mode_ == Mode::violated)
            {
                break;
            }
            mode_ = Mode::tracking;
            origin_ = local;
            steps_done_ = 0;
            p_exp_ = g_.k2;
            p_obs_ = value();
            break;
        case ObsEventKind::sample:
            integrate_through(local - 1);
            if (mode_ == Mode::tracking)
            {
                if (auto v = value())
                {
                    p_obs_ = v;
                }
            }
            break;
        case ObsEventKind::stop:
            integrate_through(local);
            if (mode_ == Mode::tracking)
            {
                mode_ = Mode::idle;
                p_obs_.reset();
            }
            break;
        case ObsEventKind::complete:
            integrate_through(local - 1);
            break;
        }
        return verdict();
    }

    Verdict HybridObserver::advance_time(Time t)
    {
        if (t < last_)
        {
            throw ObserverError("time regression at observer " + id());
        }
        last_ = t;
        integrate_through(local_ticks(t, options_.ticks_per_ms));
        return verdict();
    }

    void HybridObserver::reset()
    {
        mode_ = Mode::idle;
        origin_ = 0;
        steps_done_ = 0;
        p_exp_ = 0.0;
        p_obs_.reset();
        clear_verdict();
    }

    std::unique_ptr<Observer> HybridObserver::clone() const { return std::make_unique<HybridObserver>(*this); }

    std::string HybridObserver::dump(Time t) const
    {
        char buf[160];
        if (p_obs_)
        {
            std::snprintf(buf, sizeof buf, "p_exp=%.6g,p_obs=%.6g", p_exp_, *p_obs_);
        }
        else
        {
            std::snprintf(buf, sizeof buf, "p_exp=%.6g,p_obs=none", p_exp_);
        }
        return std::to_string(t.ticks()) + "," + id() + "," + mode_name() + "," + buf + "," + verdict_field();
    }

    // ---------------------------------------------------------------- synthesis

    std::unique_ptr<Observer> synthesize_observer(const std::string& id, const Contract& contract,
                                                  const SynthesisOptions& options)
    {
        const auto errors = validate_contract(contract);
        if (!errors.empty())
        {
            throw ContractError("cannot synthesize observer for invalid contract " + contract.id + ": " +
                                errors.front().message);
        }
        return std::visit(
            [&](const auto& g) -> std::unique_ptr<Observer> {
                using G = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<G, TimingGuarantee>)
                {
                    return std::make_unique<TimedObserver>(id, contract, options.ticks_per_ms);
                }
                else if constexpr (std::is_same_v<G, EnvelopeGuarantee>)
                {
                    return std::make_unique<HybridObserver>(id, contract, options);
                }
                else
                {
                    return std::make_unique<FsmObserver>(id, contract);
                }
            },
            contract.guarantee);
    }

    std::unique_ptr<Observer> synthesize_observer(const Contract& contract, const SynthesisOptions& options)
    {
        return synthesize_observer(contract.id, contract, options);
    }
} // namespace rcps
