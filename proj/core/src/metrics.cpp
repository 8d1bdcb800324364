#include "rcps/metrics.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>

namespace rcps
{
    StepTrace::StepTrace(std::vector<Segment> segments) : segments_(std::move(segments))
    {
        for (std::size_t i = 0; i < segments_.size(); ++i)
        {
            const auto& s = segments_[i];
            if (!(s.start < s.end))
            {
                throw MetricError("segment " + std::to_string(i) + " is empty or reversed");
            }
            if (!std::isfinite(s.value) || s.value < 0.0 || s.value > 1.0)
            {
                throw MetricError("segment " + std::to_string(i) + " value outside [0,1]");
            }
            if (i > 0 && segments_[i - 1].end != s.start)
            {
                throw MetricError("segments " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                  " are not contiguous");
            }
        }
    }

    StepTrace StepTrace::constant(Time start, Time end, double value)
    {
        return StepTrace{{Segment{start, end, value}}};
    }

    StepTrace StepTrace::from_changes(const std::vector<std::pair<Time, double>>& changes, Time end)
    {
        std::vector<Segment> segs;
        for (std::size_t i = 0; i < changes.size(); ++i)
        {
            const Time s = changes[i].first;
            const Time e = i + 1 < changes.size() ? changes[i + 1].first : end;
            if (s == e)
            {
                continue;
            }
            segs.push_back(Segment{s, e, changes[i].second});
        }
        return StepTrace{std::move(segs)};
    }

    Time StepTrace::start() const
    {
        if (segments_.empty())
        {
            throw MetricError("empty trace has no window");
        }
        return segments_.front().start;
    }

    Time StepTrace::end() const
    {
        if (segments_.empty())
        {
            throw MetricError("empty trace has no window");
        }
        return segments_.back().end;
    }

    double StepTrace::value_at(Time t) const
    {
        if (segments_.empty() || t < start() || t >= end())
        {
            throw MetricError("time " + t.to_string() + " ms outside trace window");
        }
        auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                                   [](Time x, const Segment& s) { return x < s.end; });
        return it->value;
    }

    double StepTrace::integral(Time from, Time to) const
    {
        double sum = 0.0;
        for (const auto& s : segments_)
        {
            const Time lo = std::max(s.start, from);
            const Time hi = std::min(s.end, to);
            if (lo < hi)
            {
                sum += s.value * static_cast<double>((hi - lo).ticks());
            }
        }
        return sum;
    }

    StepTrace StepTrace::compacted() const
    {
        std::vector<Segment> out;
        for (const auto& s : segments_)
        {
            if (!out.empty() && out.back().value == s.value)
            {
                out.back().end = s.end;
            }
            else
            {
                out.push_back(s);
            }
        }
        return StepTrace{std::move(out)};
    }

    namespace
    {
        // Visits each piece of the common refinement of a and b inside [lo, hi).
        template <typename Fn>
        void for_each_piece(const StepTrace& a, const StepTrace& b, Time lo, Time hi, Fn&& fn)
        {
            const auto& sa = a.segments();
            const auto& sb = b.segments();
            std::size_t i = 0;
            std::size_t j = 0;
            while (i < sa.size() && sa[i].end <= lo)
            {
                ++i;
            }
            while (j < sb.size() && sb[j].end <= lo)
            {
                ++j;
            }
            Time cursor = lo;
            while (i < sa.size() && j < sb.size() && cursor < hi)
            {
                const Time next = std::min({sa[i].end, sb[j].end, hi});
                fn(cursor, next, sa[i].value, sb[j].value);
                cursor = next;
                if (sa[i].end == next)
                {
                    ++i;
                }
                if (sb[j].end == next)
                {
                    ++j;
                }
            }
        }

        void require_same_window(const StepTrace& a, const StepTrace& b)
        {
            if (a.empty() || b.empty())
            {
                throw MetricError("trace is empty");
            }
            if (a.start() != b.start() || a.end() != b.end())
            {
                throw MetricError("traces cover different windows");
            }
        }
    } // namespace

    StepTrace combine(const StepTrace& a, const StepTrace& b, const std::function<double(double, double)>& f)
    {
        require_same_window(a, b);
        std::vector<Segment> out;
        for_each_piece(a, b, a.start(), a.end(),
                       [&](Time s, Time e, double va, double vb) { out.push_back(Segment{s, e, f(va, vb)}); });
        return StepTrace{std::move(out)};
    }

    double performance_value(double a, double d)
    {
        if (a - d >= 0.0)
        {
            return 1.0;
        }
        return a / d;
    }

    double utilization_value(double a, double d)
    {
        if (a <= d)
        {
            return 1.0;
        }
        return d / a;
    }

    StepTrace performance(const StepTrace& availability, const StepTrace& demand)
    {
        return combine(availability, demand, performance_value);
    }

    StepTrace utilization(const StepTrace& availability, const StepTrace& demand)
    {
        return combine(availability, demand, utilization_value);
    }

    double resilience(const StepTrace& p_fault, const StepTrace& p_norm, Time tx, Time ty)
    {
        if (!(tx < ty))
        {
            throw MetricError("resilience interval must satisfy tx < ty");
        }
        if (p_fault.empty() || p_norm.empty() || p_fault.start() > tx || p_norm.start() > tx ||
            p_fault.end() < ty || p_norm.end() < ty)
        {
            throw MetricError("traces do not cover the resilience interval");
        }
        double area = 0.0;
        for_each_piece(p_fault, p_norm, tx, ty, [&](Time s, Time e, double pf, double pn) {
            double ratio = 0.0;
            if (pn == 0.0)
            {
                if (pf > 0.0)
                {
                    throw MetricError("p_norm is 0 while p_fault is positive at " + s.to_string() + " ms");
                }
                ratio = 1.0;
            }
            else
            {
                ratio = pf / pn;
            }
            area += ratio * static_cast<double>((e - s).ticks());
        });
        return area / static_cast<double>((ty - tx).ticks());
    }

    std::optional<double> RecoveryRecord::period_from_fault_ms() const
    {
        if (!recovered_at || !fault_at)
        {
            return std::nullopt;
        }
        return (*recovered_at - *fault_at).ms();
    }

    std::optional<double> RecoveryRecord::period_from_detection_ms() const
    {
        if (!recovered_at)
        {
            return std::nullopt;
        }
        return (*recovered_at - detected_at).ms();
    }

    namespace
    {
        std::vector<RecoveryRecord> collect_episodes(const std::vector<VerdictRecord>& verdicts,
                                                     const std::vector<FaultRecord>& faults)
        {
            std::vector<RecoveryRecord> out;
            std::map<std::pair<std::string, std::string>, std::size_t> open;
            for (const auto& v : verdicts)
            {
                const auto key = std::make_pair(v.component, v.contract);
                if (v.transition == "violated")
                {
                    if (open.contains(key))
                    {
                        continue;
                    }
                    RecoveryRecord rec;
                    rec.component = v.component;
                    rec.contract = v.contract;
                    rec.detected_at = v.time;
                    for (const auto& f : faults)
                    {
                        if (f.phase == "begin" && f.time <= v.time && (!rec.fault_at || f.time >= *rec.fault_at))
                        {
                            rec.fault_at = f.time;
                        }
                    }
                    open[key] = out.size();
                    out.push_back(rec);
                }
                else if (v.transition == "recovered")
                {
                    auto it = open.find(key);
                    if (it != open.end())
                    {
                        out[it->second].recovered_at = v.time;
                        open.erase(it);
                    }
                }
            }
            return out;
        }
    } // namespace

    std::vector<RecoveryRecord> recovery_period(const std::vector<VerdictRecord>& verdicts,
                                                const std::vector<FaultRecord>& faults)
    {
        auto out = collect_episodes(verdicts, faults);
        if (out.empty())
        {
            throw MetricError("no fault episode found in verdict log");
        }
        return out;
    }

    MetricReport compute_report(const StepTrace& availability, const StepTrace& demand,
                                const std::optional<StepTrace>& p_norm,
                                const std::vector<VerdictRecord>& verdicts, const std::vector<FaultRecord>& faults)
    {
        MetricReport r;
        r.availability = availability;
        r.demand = demand;
        r.perf = performance(availability, demand);
        r.util = utilization(availability, demand);
        const StepTrace norm =
            p_norm ? *p_norm
                   : performance(StepTrace::constant(availability.start(), availability.end(), 1.0), demand);
        r.resilience = resilience(r.perf, norm, availability.start(), availability.end());
        r.recovery = collect_episodes(verdicts, faults);
        return r;
    }

    namespace
    {
        using nlohmann::json;

        json trace_json(const StepTrace& t)
        {
            json arr = json::array();
            for (const auto& s : t.segments())
            {
                arr.push_back(json::array({s.start.ticks(), s.end.ticks(), s.value}));
            }
            return arr;
        }

        StepTrace trace_from(const json& arr)
        {
            std::vector<Segment> segs;
            for (const auto& s : arr)
            {
                segs.push_back(Segment{Time::from_ticks(s.at(0).get<std::int64_t>()),
                                       Time::from_ticks(s.at(1).get<std::int64_t>()), s.at(2).get<double>()});
            }
            return StepTrace{std::move(segs)};
        }

        json opt_tick(const std::optional<Time>& t) { return t ? json(t->ticks()) : json(nullptr); }
        std::optional<Time> tick_from(const json& j)
        {
            if (j.is_null())
            {
                return std::nullopt;
            }
            return Time::from_ticks(j.get<std::int64_t>());
        }
        json opt_num(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
    } // namespace

    std::string report_to_json(const MetricReport& report)
    {
        json j;
        j["window_ticks"] = report.availability.empty()
                                ? json::array()
                                : json::array({report.availability.start().ticks(), report.availability.end().ticks()});
        j["resilience"] = report.resilience;
        j["availability"] = trace_json(report.availability);
        j["demand"] = trace_json(report.demand);
        j["performance"] = trace_json(report.perf);
        j["utilization"] = trace_json(report.util);
        json rec = json::array();
        for (const auto& r : report.recovery)
        {
            rec.push_back({{"component", r.component},
                           {"contract", r.contract},
                           {"fault_at_tick", opt_tick(r.fault_at)},
                           {"detected_at_tick", r.detected_at.ticks()},
                           {"recovered_at_tick", opt_tick(r.recovered_at)},
                           {"period_from_fault_ms", opt_num(r.period_from_fault_ms())},
                           {"period_from_detection_ms", opt_num(r.period_from_detection_ms())}});
        }
        j["recovery"] = rec;
        return j.dump(2) + "\n";
    }

    MetricReport report_from_json(const std::string& text)
    {
        const json j = json::parse(text);
        MetricReport r;
        r.resilience = j.at("resilience").get<double>();
        r.availability = trace_from(j.at("availability"));
        r.demand = trace_from(j.at("demand"));
        r.perf = trace_from(j.at("performance"));
        r.util = trace_from(j.at("utilization"));
        for (const auto& e : j.at("recovery"))
        {
            RecoveryRecord rec;
            rec.component = e.at("component").get<std::string>();
            rec.contract = e.at("contract").get<std::string>();
            rec.fault_at = tick_from(e.at("fault_at_tick"));
            rec.detected_at = Time::from_ticks(e.at("detected_at_tick").get<std::int64_t>());
            rec.recovered_at = tick_from(e.at("recovered_at_tick"));
            r.recovery.push_back(rec);
        }
        return r;
    }

    void write_trace(std::ostream& out, const StepTrace& trace)
    {
        char buf[64];
        for (const auto& s : trace.segments())
        {
            std::snprintf(buf, sizeof buf, "%.17g", s.value);
            out << s.start.ticks() << ',' << s.end.ticks() << ',' << buf << '\n';
        }
    }

    StepTrace read_trace(std::istream& in)
    {
        std::vector<Segment> segs;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line))
        {
            ++lineno;
            if (!line.empty() && line.back() == '\r')
            {
                line.pop_back();
            }
            if (line.empty() || line.front() == '#')
            {
                continue;
            }
            const auto f = split_log_line(line, 3);
            try
            {
                const Time s = Time::from_ticks(std::stoll(f[0]));
                const Time e = Time::from_ticks(std::stoll(f[1]));
                std::size_t used = 0;
                const double v = std::stod(f[2], &used);
                if (used != f[2].size())
                {
                    throw std::invalid_argument("trailing characters");
                }
                segs.push_back(Segment{s, e, v});
            }
            catch (const std::logic_error& ex)
            {
                throw MetricError("trace line " + std::to_string(lineno) + ": " + ex.what());
            }
        }
        if (segs.empty())
        {
            throw MetricError("trace is empty");
        }
        return StepTrace{std::move(segs)};
    }
} // namespace rcps
