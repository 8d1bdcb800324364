#include "rcps/kernel.hpp"

#include <ostream>

namespace rcps
{
    std::string DispatchRecord::to_line() const
    {
        return std::to_string(time.ticks()) + "," + target + "," + kind + "," + detail;
    }

    Kernel::Kernel(std::uint64_t seed) : seed_(seed), rng_(seed) {}

    EventId Kernel::enqueue(Queue& queue, SimEvent event)
    {
        if (event.time < now_)
        {
            throw SchedulerError("event '" + event.kind + "' for " + event.target + " at " +
                                 event.time.to_string() + " ms is before now (" + now_.to_string() + " ms)");
        }
        event.seq = next_seq_++;
        const EventId id = event.seq;
        live_.insert(id);
        queue.push(std::move(event));
        return id;
    }

    EventId Kernel::schedule(SimEvent event) { return enqueue(regular_, std::move(event)); }

    EventId Kernel::schedule_tick_end(SimEvent event) { return enqueue(tick_end_, std::move(event)); }

    EventId Kernel::schedule(Time at, std::string target, std::string kind, std::string detail,
                             std::function<void()> action)
    {
        return schedule(SimEvent{at, 0, std::move(target), std::move(kind), std::move(detail), std::move(action)});
    }

    EventId Kernel::schedule_tick_end(Time at, std::string target, std::string kind, std::string detail,
                                      std::function<void()> action)
    {
        return schedule_tick_end(
            SimEvent{at, 0, std::move(target), std::move(kind), std::move(detail), std::move(action)});
    }

    bool Kernel::cancel(EventId id)
    {
        if (live_.erase(id) == 0)
        {
            return false;
        }
        cancelled_.insert(id);
        return true;
    }

    std::size_t Kernel::pending() const noexcept { return live_.size(); }

    std::size_t Kernel::run_until(Time t_end)
    {
        if (t_end < now_)
        {
            throw SchedulerError("run_until(" + t_end.to_string() + ") is before now (" + now_.to_string() + ")");
        }
        std::size_t dispatched = 0;
        for (;;)
        {
            Queue* source = nullptr;
            if (!regular_.empty() && (tick_end_.empty() || regular_.top().time <= tick_end_.top().time))
            {
                source = &regular_;
            }
            else if (!tick_end_.empty())
            {
                source = &tick_end_;
            }
            if (source == nullptr || source->top().time > t_end)
            {
                break;
            }
            // priority_queue::top is const; the event is discarded right after.
            SimEvent event = std::move(const_cast<SimEvent&>(source->top()));
            source->pop();
            if (cancelled_.erase(event.seq) != 0)
            {
                continue;
            }
            live_.erase(event.seq);
            now_ = event.time;
            if (logging_)
            {
                log_.push_back(DispatchRecord{event.time, event.seq, event.target, event.kind, event.detail});
            }
            if (event.action)
            {
                event.action();
            }
            ++dispatched;
        }
        now_ = t_end;
        return dispatched;
    }

    void Kernel::write_dispatch_log(std::ostream& out) const
    {
        for (const auto& rec : log_)
        {
            out << rec.to_line() << '\n';
        }
    }
} // namespace rcps
