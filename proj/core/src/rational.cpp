#include "rcps/rational.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace rcps
{
    namespace
    {
        std::int64_t parse_int(std::string_view s)
        {
            std::int64_t v = 0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
            {
                throw std::invalid_argument("bad integer '" + std::string(s) + "' in ratio");
            }
            return v;
        }
    } // namespace

    Rational::Rational(std::int64_t num, std::int64_t den)
    {
        if (den == 0)
        {
            throw std::invalid_argument("ratio denominator must be non-zero");
        }
        if (den < 0)
        {
            num = -num;
            den = -den;
        }
        if (num < 0)
        {
            throw std::invalid_argument("ratio must be non-negative");
        }
        const std::int64_t g = std::gcd(num, den);
        num_ = g == 0 ? 0 : num / g;
        den_ = g == 0 ? 1 : den / g;
    }

    Rational Rational::parse(std::string_view text)
    {
        if (const auto slash = text.find('/'); slash != std::string_view::npos)
        {
            return Rational{parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1))};
        }
        if (const auto dot = text.find('.'); dot != std::string_view::npos)
        {
            const auto frac = text.substr(dot + 1);
            if (frac.size() > 12)
            {
                throw std::invalid_argument("too many decimals in ratio '" + std::string(text) + "'");
            }
            std::int64_t den = 1;
            for (std::size_t i = 0; i < frac.size(); ++i)
            {
                den *= 10;
            }
            const std::int64_t whole = text.substr(0, dot).empty() ? 0 : parse_int(text.substr(0, dot));
            const std::int64_t part = frac.empty() ? 0 : parse_int(frac);
            return Rational{whole * den + part, den};
        }
        return Rational{parse_int(text), 1};
    }

    std::string Rational::to_string() const
    {
        if (den_ == 1)
        {
            return std::to_string(num_);
        }
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    Time Rational::scale(Time t) const
    {
        const WideInt prod = static_cast<WideInt>(t.ticks()) * num_;
        const WideInt half = den_ / 2;
        WideInt q = prod >= 0 ? (prod + half) / den_ : -((-prod + half) / den_);
        return Time::from_ticks(static_cast<std::int64_t>(q));
    }
} // namespace rcps
