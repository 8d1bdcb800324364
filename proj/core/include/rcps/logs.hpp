#pragma once

#include "rcps/time.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rcps
{
    /// Splits a comma-separated log line into exactly `fields` parts; the last
    /// part keeps any remaining commas. Throws std::invalid_argument on short lines.
    std::vector<std::string> split_log_line(std::string_view line, std::size_t fields);

    /// Resilience-manager and observer verdict transitions.
    /// Line format: `tick,component,contract,transition,detail`.
    struct VerdictRecord
    {
        Time time;
        std::string component;
        std::string contract;
        std::string transition; // violated | flag | switch | escalate | recovered | fault_in
        std::string detail;

        [[nodiscard]] std::string to_line() const;
        static VerdictRecord parse(std::string_view line);
        friend bool operator==(const VerdictRecord&, const VerdictRecord&) = default;
    };

    /// Fault status changes. Line format: `tick,target,phase,kind,effect`
    /// where phase is `begin` or `end`.
    struct FaultRecord
    {
        Time time;
        std::string target;
        std::string phase;
        std::string kind;
        std::string effect;

        [[nodiscard]] std::string to_line() const;
        static FaultRecord parse(std::string_view line);
        friend bool operator==(const FaultRecord&, const FaultRecord&) = default;
    };

    /// Line format: `tick,component,behaviour,state,event,emissions`.
    struct ActivationRecord
    {
        Time time;
        std::string component;
        std::string behaviour;
        std::string state;
        std::string event;
        std::string emissions;

        [[nodiscard]] std::string to_line() const;
        static ActivationRecord parse(std::string_view line);
        friend bool operator==(const ActivationRecord&, const ActivationRecord&) = default;
    };

    /// Line format: `tick,topic,publisher,subscriber,payload,transit_ms,status`.
    struct DeliveryRecord
    {
        Time time;
        std::string topic;
        std::string publisher;
        std::string subscriber;
        std::string payload;
        double transit_ms = 0.0;
        std::string status; // delivered | dropped | no_subscribers | qos_deadline | qos_latency

        [[nodiscard]] std::string to_line() const;
        friend bool operator==(const DeliveryRecord&, const DeliveryRecord&) = default;
    };

    template <typename Record>
    void write_records(std::ostream& out, const std::vector<Record>& records)
    {
        for (const auto& r : records)
        {
            out << r.to_line() << '\n';
        }
    }

    std::vector<VerdictRecord> read_verdict_log(std::istream& in);
    std::vector<FaultRecord> read_fault_log(std::istream& in);
} // namespace rcps
