#pragma once

#include "rcps/logs.hpp"
#include "rcps/time.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcps
{
    class MetricError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    struct Segment
    {
        Time start;
        Time end;
        double value = 0.0;

        friend bool operator==(const Segment&, const Segment&) = default;
    };

    /// Piecewise-constant function of time over a contiguous window [start, end).
    ///
    /// Used for availability a(t), demand d(t), and the derived performance and
    /// utilization curves. Values are restricted to [0, 1].
    class StepTrace
    {
    public:
        StepTrace() = default;
        explicit StepTrace(std::vector<Segment> segments);

        static StepTrace constant(Time start, Time end, double value);

        /// Builds a trace from change points: value `v_i` holds from `t_i` until
        /// the next change point, and the last value holds until `end`.
        static StepTrace from_changes(const std::vector<std::pair<Time, double>>& changes, Time end);

        [[nodiscard]] bool empty() const noexcept { return segments_.empty(); }
        [[nodiscard]] Time start() const;
        [[nodiscard]] Time end() const;
        [[nodiscard]] const std::vector<Segment>& segments() const noexcept { return segments_; }

        /// Value at t; the segment containing t is the one with start <= t < end.
        [[nodiscard]] double value_at(Time t) const;

        /// Exact integral over [from, to] in tick units (value x ticks).
        [[nodiscard]] double integral(Time from, Time to) const;

        /// Merges adjacent segments with identical values.
        [[nodiscard]] StepTrace compacted() const;

        friend bool operator==(const StepTrace&, const StepTrace&) = default;

    private:
        std::vector<Segment> segments_;
    };

    /// Applies `f` segment-wise on the common refinement of two traces with equal windows.
    StepTrace combine(const StepTrace& a, const StepTrace& b, const std::function<double(double, double)>& f);

    /// p(t) = 1 when a(t) - d(t) >= 0, otherwise a(t)/d(t).
    double performance_value(double a, double d);
    /// u(t) = 1 when a(t) <= d(t), otherwise d(t)/a(t).
    double utilization_value(double a, double d);

    StepTrace performance(const StepTrace& availability, const StepTrace& demand);
    StepTrace utilization(const StepTrace& availability, const StepTrace& demand);

    /// Normalised area of p_fault / p_norm over [tx, ty]; 1 means perfect resiliency.
    ///
    /// A 0/0 ratio counts as 1. A segment with p_norm = 0 < p_fault throws MetricError.
    double resilience(const StepTrace& p_fault, const StepTrace& p_norm, Time tx, Time ty);

    struct RecoveryRecord
    {
        std::string component;
        std::string contract;
        std::optional<Time> fault_at;
        Time detected_at;
        std::optional<Time> recovered_at;

        [[nodiscard]] std::optional<double> period_from_fault_ms() const;
        [[nodiscard]] std::optional<double> period_from_detection_ms() const;
        friend bool operator==(const RecoveryRecord&, const RecoveryRecord&) = default;
    };

    /// One record per fault episode found in the verdict log. An episode opens on a
    /// `violated` transition and closes on the matching `recovered` transition; its
    /// fault time is the latest fault `begin` at or before detection.
    /// Throws MetricError when no episode exists.
    std::vector<RecoveryRecord> recovery_period(const std::vector<VerdictRecord>& verdicts,
                                                const std::vector<FaultRecord>& faults);

    struct MetricReport
    {
        StepTrace availability;
        StepTrace demand;
        StepTrace perf;
        StepTrace util;
        double resilience = 1.0;
        std::vector<RecoveryRecord> recovery;

        friend bool operator==(const MetricReport&, const MetricReport&) = default;
    };

    /// Computes the report from an availability trace and a demand trace. p_norm is the
    /// performance of a fault-free run, i.e. availability identically 1, unless given.
    MetricReport compute_report(const StepTrace& availability, const StepTrace& demand,
                                const std::optional<StepTrace>& p_norm,
                                const std::vector<VerdictRecord>& verdicts, const std::vector<FaultRecord>& faults);

    std::string report_to_json(const MetricReport& report);
    MetricReport report_from_json(const std::string& text);

    /// Trace files: one `start_tick,end_tick,value` line per segment.
    void write_trace(std::ostream& out, const StepTrace& trace);
    StepTrace read_trace(std::istream& in);
} // namespace rcps
