#pragma once

#include <cstdint>
#include <random>

namespace rcps
{
    /// Seeded generator shared by everything stochastic in one simulation run.
    ///
    /// Draws are built from raw 64-bit output so that sequences do not depend on
    /// the standard library's distribution implementations.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

        void reseed(std::uint64_t seed) { engine_.seed(seed); }

        /// Uniform in [0, 1).
        double unit()
        {
            return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        }

        /// Uniform in [lo, hi]; returns lo when the interval is degenerate.
        double uniform(double lo, double hi)
        {
            if (!(hi > lo))
            {
                return lo;
            }
            return lo + (hi - lo) * unit();
        }

        /// Uniform integer in [lo, hi].
        std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
        {
            if (hi <= lo)
            {
                return lo;
            }
            const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
            return lo + static_cast<std::int64_t>(engine_() % span);
        }

        bool bernoulli(double p)
        {
            if (p <= 0.0)
            {
                return false;
            }
            if (p >= 1.0)
            {
                return true;
            }
            return unit() < p;
        }

    private:
        std::mt19937_64 engine_;
    };
} // namespace rcps
