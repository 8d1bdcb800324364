#include "rcps/logs.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <stdexcept>

namespace rcps
{
    namespace
    {
        Time parse_tick(const std::string& s)
        {
            std::int64_t v = 0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || ptr != s.data() + s.size())
            {
                throw std::invalid_argument("bad tick '" + s + "'");
            }
            return Time::from_ticks(v);
        }

        std::string tick_str(Time t) { return std::to_string(t.ticks()); }

        template <typename Record>
        std::vector<Record> read_lines(std::istream& in)
        {
            std::vector<Record> out;
            std::string line;
            while (std::getline(in, line))
            {
                if (!line.empty() && line.back() == '\r')
                {
                    line.pop_back();
                }
                if (line.empty() || line.front() == '#')
                {
                    continue;
                }
                out.push_back(Record::parse(line));
            }
            return out;
        }
    } // namespace

    std::vector<std::string> split_log_line(std::string_view line, std::size_t fields)
    {
        std::vector<std::string> parts;
        std::size_t pos = 0;
        while (parts.size() + 1 < fields)
        {
            const auto comma = line.find(',', pos);
            if (comma == std::string_view::npos)
            {
                throw std::invalid_argument("log line has fewer than " + std::to_string(fields) +
                                            " fields: " + std::string(line));
            }
            parts.emplace_back(line.substr(pos, comma - pos));
            pos = comma + 1;
        }
        parts.emplace_back(line.substr(pos));
        return parts;
    }

    std::string VerdictRecord::to_line() const
    {
        return tick_str(time) + "," + component + "," + contract + "," + transition + "," + detail;
    }

    VerdictRecord VerdictRecord::parse(std::string_view line)
    {
        auto f = split_log_line(line, 5);
        return VerdictRecord{parse_tick(f[0]), f[1], f[2], f[3], f[4]};
    }

    std::string FaultRecord::to_line() const
    {
        return tick_str(time) + "," + target + "," + phase + "," + kind + "," + effect;
    }

    FaultRecord FaultRecord::parse(std::string_view line)
    {
        auto f = split_log_line(line, 5);
        return FaultRecord{parse_tick(f[0]), f[1], f[2], f[3], f[4]};
    }

    std::string ActivationRecord::to_line() const
    {
        return tick_str(time) + "," + component + "," + behaviour + "," + state + "," + event + "," + emissions;
    }

    ActivationRecord ActivationRecord::parse(std::string_view line)
    {
        auto f = split_log_line(line, 6);
        return ActivationRecord{parse_tick(f[0]), f[1], f[2], f[3], f[4], f[5]};
    }

    std::string DeliveryRecord::to_line() const
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", transit_ms);
        return tick_str(time) + "," + topic + "," + publisher + "," + subscriber + "," + payload + "," + buf + "," +
               status;
    }

    std::vector<VerdictRecord> read_verdict_log(std::istream& in) { return read_lines<VerdictRecord>(in); }
    std::vector<FaultRecord> read_fault_log(std::istream& in) { return read_lines<FaultRecord>(in); }
} // namespace rcps
