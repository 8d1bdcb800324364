#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>

namespace rcps
{
    /// Simulation timestamp or duration, counted in integer ticks of 0.01 ms.
    ///
    /// Every millisecond quantity that is a multiple of 0.01 ms converts exactly.
    class Time
    {
    public:
        static constexpr std::int64_t kTicksPerMs = 100;

        constexpr Time() noexcept = default;

        static constexpr Time from_ticks(std::int64_t ticks) noexcept { return Time{ticks}; }

        /// Converts milliseconds to ticks. Throws std::invalid_argument when `ms`
        /// is not a multiple of the tick resolution (beyond 1e-6 ms rounding slack).
        static Time from_ms(double ms);

        /// Exact num/den milliseconds, e.g. from_ms_ratio(91, 10) is 9.1 ms.
        static constexpr Time from_ms_ratio(std::int64_t num, std::int64_t den) noexcept
        {
            return Time{num * kTicksPerMs / den};
        }

        /// Rounds to the nearest tick instead of rejecting inexact values.
        static Time from_ms_rounded(double ms) noexcept;

        static constexpr Time zero() noexcept { return Time{0}; }
        static constexpr Time max() noexcept { return Time{std::numeric_limits<std::int64_t>::max()}; }

        [[nodiscard]] constexpr std::int64_t ticks() const noexcept { return ticks_; }
        [[nodiscard]] constexpr double ms() const noexcept
        {
            return static_cast<double>(ticks_) / static_cast<double>(kTicksPerMs);
        }

        /// Millisecond text with one or two decimals, e.g. "460.5" or "9.72".
        [[nodiscard]] std::string to_string() const;

        constexpr auto operator<=>(const Time&) const noexcept = default;

        constexpr Time& operator+=(Time other) noexcept
        {
            ticks_ += other.ticks_;
            return *this;
        }
        constexpr Time& operator-=(Time other) noexcept
        {
            ticks_ -= other.ticks_;
            return *this;
        }
        friend constexpr Time operator+(Time a, Time b) noexcept { return Time{a.ticks_ + b.ticks_}; }
        friend constexpr Time operator-(Time a, Time b) noexcept { return Time{a.ticks_ - b.ticks_}; }
        friend constexpr Time operator*(Time a, std::int64_t k) noexcept { return Time{a.ticks_ * k}; }

    private:
        constexpr explicit Time(std::int64_t ticks) noexcept : ticks_(ticks) {}

        std::int64_t ticks_ = 0;
    };

    namespace literals
    {
        constexpr Time operator""_tick(unsigned long long t) noexcept
        {
            return Time::from_ticks(static_cast<std::int64_t>(t));
        }
        constexpr Time operator""_ms(unsigned long long ms) noexcept
        {
            return Time::from_ticks(static_cast<std::int64_t>(ms) * Time::kTicksPerMs);
        }
    } // namespace literals
} // namespace rcps
