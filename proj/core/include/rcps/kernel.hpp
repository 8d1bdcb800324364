#pragma once

#include "rcps/rng.hpp"
#include "rcps/time.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace rcps
{
    using EventId = std::uint64_t;

    /// Raised when an event is scheduled before the current simulation time.
    class SchedulerError : public std::logic_error
    {
    public:
        using std::logic_error::logic_error;
    };

    struct SimEvent
    {
        Time time;
        /// Assigned by the kernel on schedule; unique per run.
        std::uint64_t seq = 0;
        std::string target;
        std::string kind;
        std::string detail;
        std::function<void()> action;
    };

    struct DispatchRecord
    {
        Time time;
        std::uint64_t seq = 0;
        std::string target;
        std::string kind;
        std::string detail;

        /// `tick,entity,event_kind,detail`
        [[nodiscard]] std::string to_line() const;
    };

    /// Single-threaded discrete-event kernel.
    ///
    /// Regular events dequeue in (time, seq) order. Tick-end events form a second
    /// queue with the same ordering; a tick-end event at time T runs only after every
    /// regular event at T, which is what lets monitors decide "nothing arrived by T".
    class Kernel
    {
    public:
        explicit Kernel(std::uint64_t seed = 0);

        Kernel(const Kernel&) = delete;
        Kernel& operator=(const Kernel&) = delete;

        EventId schedule(SimEvent event);
        EventId schedule_tick_end(SimEvent event);

        /// Convenience overload for internal plumbing.
        EventId schedule(Time at, std::string target, std::string kind, std::string detail,
                         std::function<void()> action);
        EventId schedule_tick_end(Time at, std::string target, std::string kind, std::string detail,
                                  std::function<void()> action);

        /// Returns false when the event already ran or was cancelled.
        bool cancel(EventId id);

        /// Dispatches every event with time <= t_end, then sets now() to t_end.
        std::size_t run_until(Time t_end);

        [[nodiscard]] Time now() const noexcept { return now_; }
        [[nodiscard]] std::size_t pending() const noexcept;
        [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
        Rng& rng() noexcept { return rng_; }

        [[nodiscard]] const std::vector<DispatchRecord>& dispatch_log() const noexcept { return log_; }
        void write_dispatch_log(std::ostream& out) const;
        void set_logging(bool enabled) noexcept { logging_ = enabled; }

    private:
        struct Later
        {
            bool operator()(const SimEvent& a, const SimEvent& b) const noexcept
            {
                if (a.time != b.time)
                {
                    return a.time > b.time;
                }
                return a.seq > b.seq;
            }
        };
        using Queue = std::priority_queue<SimEvent, std::vector<SimEvent>, Later>;

        EventId enqueue(Queue& queue, SimEvent event);

        Time now_ = Time::zero();
        std::uint64_t next_seq_ = 0;
        std::uint64_t seed_ = 0;
        Queue regular_;
        Queue tick_end_;
        std::unordered_set<EventId> cancelled_;
        std::unordered_set<EventId> live_;
        std::vector<DispatchRecord> log_;
        bool logging_ = true;
        Rng rng_;
    };
} // namespace rcps
