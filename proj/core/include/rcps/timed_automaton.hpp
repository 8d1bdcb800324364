#pragma once

#include "rcps/time.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcps
{
    enum class ViolationKind
    {
        missed_sample,
        missed_deadline,
        out_of_range,
        envelope_exceeded
    };

    std::string violation_name(ViolationKind k);

    class ObserverError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class CmpOp
    {
        lt,
        le,
        eq,
        ge,
        gt
    };

    /// clock `op` bound, with bound in ticks.
    struct ClockConstraint
    {
        std::size_t clock = 0;
        CmpOp op = CmpOp::ge;
        std::int64_t bound = 0;
    };

    struct TaLocation
    {
        std::string name;
        /// Entering a location with a violation kind produces a violated verdict.
        std::optional<ViolationKind> violation;
    };

    struct TaTransition
    {
        std::size_t src = 0;
        std::size_t dst = 0;
        /// Event label; nullopt marks a delay transition that fires on time passage.
        std::optional<std::string> event;
        std::vector<ClockConstraint> guard;
        std::vector<std::size_t> resets;
        /// Larger value wins when several transitions are enabled.
        int priority = 0;
    };

    /// Deterministic discrete-time timed automaton.
    ///
    /// Clocks are integer tick counters compared against integer bounds. Time is
    /// processed tick by tick: events at tick T are handled first, then delay
    /// transitions are evaluated once at the end of T. At most one transition fires
    /// per step, chosen by priority and then by declaration order.
    class TimedAutomaton
    {
    public:
        std::size_t add_location(std::string name, std::optional<ViolationKind> violation = std::nullopt);
        std::size_t add_clock(std::string name);
        void add_transition(TaTransition t);
        void set_initial(std::size_t location);

        /// Handles `event` at tick t after closing every tick before t.
        /// Returns true when a transition fired.
        bool step_event(const std::string& event, Time t);

        /// Closes every tick up to and including t.
        void advance_time(Time t);

        /// Back to the initial location; clocks restart at the last seen time.
        void reset();

        [[nodiscard]] std::size_t location() const noexcept { return location_; }
        [[nodiscard]] const TaLocation& location_info() const { return locations_.at(location_); }
        [[nodiscard]] const std::vector<TaLocation>& locations() const noexcept { return locations_; }
        [[nodiscard]] const std::vector<TaTransition>& transitions() const noexcept { return transitions_; }
        [[nodiscard]] const std::vector<std::string>& clock_names() const noexcept { return clock_names_; }
        [[nodiscard]] std::int64_t clock_value(std::size_t clock, Time t) const;
        [[nodiscard]] Time last_time() const noexcept { return last_; }
        /// Tick at which the last transition fired.
        [[nodiscard]] Time entered_at() const noexcept { return entered_; }

        /// Earliest tick at which a delay transition fires if no event arrives.
        [[nodiscard]] std::optional<Time> next_delay_firing() const;

    private:
        [[nodiscard]] bool guard_holds(const TaTransition& t, std::int64_t tick) const;
        [[nodiscard]] std::optional<std::int64_t> earliest_tick(const TaTransition& t, std::int64_t from) const;
        void fire(const TaTransition& t, std::int64_t tick);
        void close_through(std::int64_t tick);
        void require_monotone(Time t) const;

        std::vector<TaLocation> locations_;
        std::vector<std::string> clock_names_;
        std::vector<TaTransition> transitions_;
        std::size_t initial_ = 0;

        std::size_t location_ = 0;
        std::vector<std::int64_t> reset_tick_;
        std::int64_t closed_through_ = -1;
        Time entered_ = Time::zero();
        Time last_ = Time::zero();
    };
} // namespace rcps
