#include "rcps/time.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rcps
{
    Time Time::from_ms(double ms)
    {
        if (!std::isfinite(ms))
        {
            throw std::invalid_argument("time must be finite");
        }
        const double scaled = ms * static_cast<double>(kTicksPerMs);
        const double rounded = std::round(scaled);
        if (std::fabs(scaled - rounded) > 1e-5)
        {
            throw std::invalid_argument("time " + std::to_string(ms) + " ms is not a multiple of 0.01 ms");
        }
        return Time{static_cast<std::int64_t>(rounded)};
    }

    Time Time::from_ms_rounded(double ms) noexcept
    {
        return Time{static_cast<std::int64_t>(std::llround(ms * static_cast<double>(kTicksPerMs)))};
    }

    std::string Time::to_string() const
    {
        const std::int64_t whole = ticks_ / kTicksPerMs;
        std::int64_t frac = ticks_ % kTicksPerMs;
        std::string sign;
        if (ticks_ < 0)
        {
            sign = "-";
            frac = -frac;
        }
        char buf[48];
        std::snprintf(buf, sizeof buf, "%s%lld.%02lld", sign.c_str(),
                      static_cast<long long>(whole < 0 ? -whole : whole), static_cast<long long>(frac));
        std::string out = buf;
        if (out.back() == '0')
        {
            out.pop_back();
        }
        return out;
    }
} // namespace rcps
