#include "rcps/timed_automaton.hpp"

#include <algorithm>
#include <limits>

namespace rcps
{
    std::string violation_name(ViolationKind k)
    {
        switch (k)
        {
        case ViolationKind::missed_sample:
            return "missed_sample";
        case ViolationKind::missed_deadline:
            return "missed_deadline";
        case ViolationKind::out_of_range:
            return "out_of_range";
        case ViolationKind::envelope_exceeded:
            return "envelope_exceeded";
        }
        return "?";
    }

    std::size_t TimedAutomaton::add_location(std::string name, std::optional<ViolationKind> violation)
    {
        locations_.push_back(TaLocation{std::move(name), violation});
        return locations_.size() - 1;
    }

    std::size_t TimedAutomaton::add_clock(std::string name)
    {
        clock_names_.push_back(std::move(name));
        reset_tick_.push_back(last_.ticks());
        return clock_names_.size() - 1;
    }

    void TimedAutomaton::add_transition(TaTransition t)
    {
        if (t.src >= locations_.size() || t.dst >= locations_.size())
        {
            throw ObserverError("transition references unknown location");
        }
        for (const auto& c : t.guard)
        {
            if (c.clock >= clock_names_.size())
            {
                throw ObserverError("guard references unknown clock");
            }
        }
        for (auto r : t.resets)
        {
            if (r >= clock_names_.size())
            {
                throw ObserverError("reset references unknown clock");
            }
        }
        transitions_.push_back(std::move(t));
    }

    void TimedAutomaton::set_initial(std::size_t location)
    {
        if (location >= locations_.size())
        {
            throw ObserverError("unknown initial location");
        }
        initial_ = location;
        location_ = location;
    }

    std::int64_t TimedAutomaton::clock_value(std::size_t clock, Time t) const
    {
        return t.ticks() - reset_tick_.at(clock);
    }

    bool TimedAutomaton::guard_holds(const TaTransition& t, std::int64_t tick) const
    {
        for (const auto& c : t.guard)
        {
            const std::int64_t v = tick - reset_tick_[c.clock];
            bool ok = false;
            switch (c.op)
            {
            case CmpOp::lt:
                ok = v < c.bound;
                break;
            case CmpOp::le:
                ok = v <= c.bound;
                break;
            case CmpOp::eq:
                ok = v == c.bound;
                break;
            case CmpOp::ge:
                ok = v >= c.bound;
                break;
            case CmpOp::gt:
                ok = v > c.bound;
                break;
            }
            if (!ok)
            {
                return false;
            }
        }
        return true;
    }

    std::optional<std::int64_t> TimedAutomaton::earliest_tick(const TaTransition& t, std::int64_t from) const
    {
        std::int64_t lo = from;
        std::int64_t hi = std::numeric_limits<std::int64_t>::max();
        for (const auto& c : t.guard)
        {
            const std::int64_t r = reset_tick_[c.clock];
            switch (c.op)
            {
            case CmpOp::lt:
                hi = std::min(hi, r + c.bound - 1);
                break;
            case CmpOp::le:
                hi = std::min(hi, r + c.bound);
                break;
            case CmpOp::eq:
                lo = std::max(lo, r + c.bound);
                hi = std::min(hi, r + c.bound);
                break;
            case CmpOp::ge:
                lo = std::max(lo, r + c.bound);
                break;
            case CmpOp::gt:
                lo = std::max(lo, r + c.bound + 1);
                break;
            }
        }
        if (lo > hi)
        {
            return std::nullopt;
        }
        return lo;
    }

    void TimedAutomaton::fire(const TaTransition& t, std::int64_t tick)
    {
        for (auto c : t.resets)
        {
            reset_tick_[c] = tick;
        }
        location_ = t.dst;
        entered_ = Time::from_ticks(tick);
    }

    void TimedAutomaton::close_through(std::int64_t tick)
    {
        while (closed_through_ < tick)
        {
            const std::int64_t from = std::max(closed_through_ + 1, entered_.ticks());
            const TaTransition* best = nullptr;
            std::int64_t best_tick = 0;
            for (const auto& t : transitions_)
            {
                if (t.src != location_ || t.event)
                {
                    continue;
                }
                const auto when = earliest_tick(t, from);
                if (!when || *when > tick)
                {
                    continue;
                }
                if (best == nullptr || *when < best_tick || (*when == best_tick && t.priority > best->priority))
                {
                    best = &t;
                    best_tick = *when;
                }
            }
            if (best == nullptr)
            {
                closed_through_ = tick;
                return;
            }
            fire(*best, best_tick);
            closed_through_ = best_tick;
        }
    }

    void TimedAutomaton::require_monotone(Time t) const
    {
        if (t < last_)
        {
            throw ObserverError("time regression: " + t.to_string() + " ms < " + last_.to_string() + " ms");
        }
    }

    bool TimedAutomaton::step_event(const std::string& event, Time t)
    {
        require_monotone(t);
        close_through(t.ticks() - 1);
        last_ = t;
        const TaTransition* best = nullptr;
        for (const auto& tr : transitions_)
        {
            if (tr.src != location_ || !tr.event || *tr.event != event || !guard_holds(tr, t.ticks()))
            {
                continue;
            }
            if (best == nullptr || tr.priority > best->priority)
            {
                best = &tr;
            }
        }
        if (best == nullptr)
        {
            return false;
        }
        fire(*best, t.ticks());
        return true;
    }

    void TimedAutomaton::advance_time(Time t)
    {
        require_monotone(t);
        close_through(t.ticks());
        last_ = t;
    }

    void TimedAutomaton::reset()
    {
        location_ = initial_;
        std::fill(reset_tick_.begin(), reset_tick_.end(), last_.ticks());
        entered_ = last_;
        closed_through_ = std::max<std::int64_t>(closed_through_, last_.ticks() - 1);
    }

    std::optional<Time> TimedAutomaton::next_delay_firing() const
    {
        const std::int64_t from = std::max(closed_through_ + 1, entered_.ticks());
        std::optional<std::int64_t> best;
        for (const auto& t : transitions_)
        {
            if (t.src != location_ || t.event)
            {
                continue;
            }
            const auto when = earliest_tick(t, from);
            if (when && (!best || *when < *best))
            {
                best = when;
            }
        }
        if (!best)
        {
            return std::nullopt;
        }
        return Time::from_ticks(*best);
    }
} // namespace rcps
