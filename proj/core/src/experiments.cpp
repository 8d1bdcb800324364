#include "rcps/experiments.hpp"

#include <algorithm>

namespace rcps
{
    RunLogs collect_logs(CaseStudy& system)
    {
        RunLogs logs;
        logs.dispatch = system.kernel().dispatch_log();
        logs.activations = system.runtime().activation_log();
        logs.verdicts = system.runtime().verdict_log();
        logs.faults = system.platform().fault_log();
        logs.deliveries = system.middleware().delivery_log();
        logs.plant = system.plant().log();
        logs.observer_dumps = system.runtime().observer_dump_log();
        return logs;
    }

    namespace
    {
        std::optional<Time> first_verdict(const std::vector<VerdictRecord>& log, const std::string& component,
                                          const std::string& transition)
        {
            for (const auto& v : log)
            {
                if (v.component == component && v.transition == transition)
                {
                    return v.time;
                }
            }
            return std::nullopt;
        }
    } // namespace

    CaseStudyConfig experiment_1_config(const Exp1Options& options)
    {
        CaseStudyConfig cfg;
        cfg.seed = options.seed;
        cfg.plant.pieces = {PieceSpec{options.colour, options.ls0_at}};
        return cfg;
    }

    Exp1Result analyse_experiment_1(CaseStudy& system, Time ls0_at)
    {
        Exp1Result r;
        r.logs = collect_logs(system);
        r.beh1_cost = system.config().costs.c1_beh1;
        r.ls0_at = ls0_at;
        if (system.plant().pieces().empty())
        {
            return r;
        }
        const WorkPiece& piece = system.plant().pieces().front();
        r.expected_bin = piece.expected_bin();
        r.bin = piece.bin;
        r.ejected_at = piece.ejected_at;

        for (const auto& rec : r.logs.plant)
        {
            if (rec.event == "colour" && rec.piece == "P0")
            {
                r.colour_at = rec.time;
                break;
            }
        }

        // The C1 activation on the pulse coinciding with the colour reading, up to the
        // arrival of its motorStep at C4.
        const Time probe_at = r.colour_at.value_or(Time::zero());
        const auto act = std::find_if(r.logs.activations.begin(), r.logs.activations.end(), [&](const auto& a) {
            return a.component == "C1" && a.time >= probe_at && a.emissions != "dropped";
        });
        if (act != r.logs.activations.end())
        {
            for (const auto& d : r.logs.deliveries)
            {
                if (d.publisher == "C1" && d.subscriber == "C4" && d.status == "delivered" && d.time > act->time)
                {
                    r.compute_send = d.time - act->time;
                    break;
                }
            }
        }

        if (r.ejected_at)
        {
            r.delay = *r.ejected_at - ls0_at;
            r.within_deadline = *r.delay < system.config().plant.geometry.end_to_end_deadline;
        }
        return r;
    }

    Exp1Result run_experiment_1(const Exp1Options& options)
    {
        CaseStudy system(experiment_1_config(options));
        system.run_until(options.until);
        return analyse_experiment_1(system, options.ls0_at);
    }

    CaseStudyConfig experiment_2_config(const Exp2Options& options)
    {
        CaseStudyConfig cfg;
        cfg.seed = options.seed;
        cfg.runtime.observer_dumps = options.observer_dumps;
        const Time period = cfg.plant.geometry.step_period;
        if (options.piece_position)
        {
            cfg.plant.pieces = {PieceSpec{Colour::red, Time::zero() - period * *options.piece_position}};
        }
        if (!options.no_fault)
        {
            FaultSpec f;
            f.kind = options.permanent ? FaultKind::permanent : FaultKind::transient;
            f.target = "N1";
            f.t0 = options.fault_at;
            f.duration = options.duration;
            f.effect = FaultEffect::slowdown;
            f.factor = options.factor;
            cfg.faults.push_back(f);
        }
        return cfg;
    }

    Exp2Result analyse_experiment_2(CaseStudy& system, const StepTrace& demand)
    {
        Exp2Result r;
        r.logs = collect_logs(system);
        const auto& v = r.logs.verdicts;
        r.detected_at = first_verdict(v, "C1", "violated");
        r.switched_at = first_verdict(v, "C1", "switch");
        r.escalated_at = first_verdict(v, "C1", "escalate");
        r.recovered_at = first_verdict(v, "C1", "recovered");

        std::int64_t pulses_seen = 0;
        for (const auto& rec : r.logs.plant)
        {
            if (rec.event != "pulse")
            {
                continue;
            }
            ++pulses_seen;
            if (r.first_beh2_pulse != 0)
            {
                continue;
            }
            for (const auto& a : r.logs.activations)
            {
                if (a.component != "C1" || a.time != rec.time || a.event != "pulse")
                {
                    continue;
                }
                if (a.emissions == "dropped")
                {
                    r.dropped_pulses.push_back(a.time);
                }
                else if (a.behaviour == "Beh2")
                {
                    r.first_beh2_at = a.time;
                    r.first_beh2_pulse = pulses_seen;
                }
            }
        }

        if (r.detected_at)
        {
            r.recovery = recovery_period(v, r.logs.faults);
        }
        const StepTrace avail = system.platform().availability("N1", demand.end());
        r.report = compute_report(avail, demand, std::nullopt, v, r.logs.faults);

        if (!system.plant().pieces().empty())
        {
            r.piece_status = system.plant().pieces().front().status;
        }
        const auto& vars = system.runtime().instance("C1").vars();
        if (auto it = vars.find("steps"); it != vars.end())
        {
            r.final_count = as_int(it->second);
        }
        r.true_steps = system.plant().true_steps();
        return r;
    }

    Exp2Result run_experiment_2(const Exp2Options& options)
    {
        CaseStudy system(experiment_2_config(options));
        system.run_until(options.until);
        return analyse_experiment_2(system, StepTrace::constant(Time::zero(), options.until, options.demand));
    }

    std::vector<PieceSpec> seeded_pieces(std::size_t count, std::int64_t spacing, Time first, std::uint64_t seed,
                                         Time step_period)
    {
        if (spacing < 1)
        {
            throw PlantError("piece spacing must be at least one step");
        }
        Rng rng(seed);
        const Colour colours[] = {Colour::red, Colour::blue, Colour::white};
        std::vector<PieceSpec> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
        {
            out.push_back(PieceSpec{colours[rng.uniform_int(0, 2)],
                                    first + step_period * (spacing * static_cast<std::int64_t>(i))});
        }
        return out;
    }

    std::vector<VerdictRecord> recovery_fixture_verdicts()
    {
        return {
            VerdictRecord{Time::from_ms_ratio(310, 1), "C1", "C1_timing", "violated", "missed_deadline"},
            VerdictRecord{Time::from_ms_ratio(310, 1), "C1", "C1_timing", "switch", "Beh2"},
            VerdictRecord{Time::from_ms_ratio(1521, 2), "C1", "C1_timing", "recovered", "Beh2"},
        };
    }

    std::vector<FaultRecord> recovery_fixture_faults()
    {
        return {
            FaultRecord{Time::from_ms_ratio(300, 1), "N1", "begin", "transient", "slowdown"},
            FaultRecord{Time::from_ms_ratio(400, 1), "N1", "end", "transient", "slowdown"},
        };
    }
} // namespace rcps
