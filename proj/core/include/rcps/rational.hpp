#pragma once

#include "rcps/time.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace rcps
{
    __extension__ using WideInt = __int128;

    /// Exact non-negative ratio used for slowdown factors, e.g. 2592/91.
    class Rational
    {
    public:
        constexpr Rational() noexcept = default;
        Rational(std::int64_t num, std::int64_t den);

        /// Accepts "a/b", an integer, or a finite decimal such as "1.25".
        static Rational parse(std::string_view text);

        [[nodiscard]] std::int64_t num() const noexcept { return num_; }
        [[nodiscard]] std::int64_t den() const noexcept { return den_; }
        [[nodiscard]] double to_double() const noexcept
        {
            return static_cast<double>(num_) / static_cast<double>(den_);
        }
        [[nodiscard]] std::string to_string() const;

        /// Scales a duration, rounding half away from zero to the nearest tick.
        [[nodiscard]] Time scale(Time t) const;

        friend bool operator==(const Rational&, const Rational&) = default;
        friend bool operator<(const Rational& a, const Rational& b)
        {
            return static_cast<WideInt>(a.num_) * b.den_ < static_cast<WideInt>(b.num_) * a.den_;
        }
        friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
        friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
        friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    private:
        std::int64_t num_ = 1;
        std::int64_t den_ = 1;
    };
} // namespace rcps
