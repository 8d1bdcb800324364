#pragma once

#include "rcps/metrics.hpp"
#include "rcps/observer.hpp"
#include "rcps/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace rcps::oracle
{
    /// Piecewise-constant trace over [0, end) with values in [0, 1]; sometimes ends at zero.
    inline StepTrace random_trace(Rng& rng, Time end, int pieces)
    {
        std::vector<std::pair<Time, double>> changes{{Time::zero(), rng.unit()}};
        for (int i = 1; i < pieces; ++i)
        {
            changes.emplace_back(Time::from_ticks(rng.uniform_int(1, end.ticks() - 1)), rng.unit());
        }
        std::sort(changes.begin() + 1, changes.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        if (rng.bernoulli(0.2))
        {
            changes.back().second = 0.0;
        }
        return StepTrace::from_changes(changes, end);
    }

    /// Direct simulation of a timing guarantee on whole milliseconds.
    ///
    /// Events of a millisecond are applied first; then the deadline and the sample
    /// period are checked for that millisecond, deadline first.
    class TimingOracle
    {
    public:
        TimingOracle(std::int64_t period_ms, std::int64_t deadline_ms) : p_(period_ms), d_(deadline_ms) {}

        void event(bool is_sample, std::int64_t t)
        {
            close_through(t - 1);
            if (violated_)
            {
                return;
            }
            if (is_sample)
            {
                if (!busy_)
                {
                    busy_ = true;
                    busy_start_ = t;
                }
                seen_ = true;
                last_sample_ = t;
            }
            else if (busy_ && t - busy_start_ <= d_)
            {
                busy_ = false;
            }
        }

        void close_through(std::int64_t t)
        {
            for (; next_ <= t; ++next_)
            {
                if (violated_)
                {
                    continue;
                }
                if (busy_ && next_ - busy_start_ >= d_)
                {
                    set(ViolationKind::missed_deadline, next_);
                }
                else if (seen_ && next_ - last_sample_ >= p_)
                {
                    set(ViolationKind::missed_sample, next_);
                }
            }
        }

        [[nodiscard]] const Verdict& verdict() const noexcept { return verdict_; }

    private:
        void set(ViolationKind k, std::int64_t t)
        {
            violated_ = true;
            verdict_ = {VerdictStatus::violated, k, Time::from_ticks(t * Time::kTicksPerMs)};
        }

        std::int64_t p_;
        std::int64_t d_;
        bool busy_ = false;
        bool seen_ = false;
        bool violated_ = false;
        std::int64_t busy_start_ = 0;
        std::int64_t last_sample_ = 0;
        std::int64_t next_ = 0;
        Verdict verdict_;
    };
} // namespace rcps::oracle
