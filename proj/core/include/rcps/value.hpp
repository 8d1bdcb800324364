#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>

namespace rcps
{
    /// Data carried on ports and held in component variables.
    using Value = std::variant<bool, std::int64_t, double>;

    /// Named data values travelling with an event.
    using Payload = std::map<std::string, Value>;

    /// Numeric view of a value; booleans map to 0/1.
    inline double as_double(const Value& v)
    {
        return std::visit([](auto x) { return static_cast<double>(x); }, v);
    }

    inline std::int64_t as_int(const Value& v)
    {
        return std::visit([](auto x) { return static_cast<std::int64_t>(x); }, v);
    }

    inline bool as_bool(const Value& v)
    {
        return std::visit([](auto x) { return x != decltype(x){}; }, v);
    }

    std::string value_to_string(const Value& v);

    /// `k=v;k=v` in key order.
    std::string payload_to_string(const Payload& p);
} // namespace rcps
