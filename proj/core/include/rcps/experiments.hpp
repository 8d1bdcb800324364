#pragma once

#include "rcps/case_study.hpp"
#include "rcps/metrics.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rcps
{
    /// Logs collected from a finished case-study run.
    struct RunLogs
    {
        std::vector<DispatchRecord> dispatch;
        std::vector<ActivationRecord> activations;
        std::vector<VerdictRecord> verdicts;
        std::vector<FaultRecord> faults;
        std::vector<DeliveryRecord> deliveries;
        std::vector<PlantRecord> plant;
        std::vector<std::string> observer_dumps;
    };

    RunLogs collect_logs(CaseStudy& system);

    struct Exp1Options
    {
        Colour colour = Colour::red;
        Time ls0_at = Time::from_ms_ratio(1650, 1);
        Time until = Time::from_ms_ratio(8000, 1);
        std::uint64_t seed = 1;
    };

    struct Exp1Result
    {
        /// Configured execution time of C1 under Beh1.
        Time beh1_cost;
        /// From the C1 activation to the arrival of its motorStep message at C4.
        Time compute_send;
        Time ls0_at;
        std::optional<Time> colour_at;
        std::optional<Time> ejected_at;
        std::optional<Time> delay;
        int bin = 0;
        int expected_bin = 0;
        bool within_deadline = false;
        RunLogs logs;
    };

    CaseStudyConfig experiment_1_config(const Exp1Options& options);
    /// Reads the Exp1 measurements off a finished run whose first piece is the probe piece.
    Exp1Result analyse_experiment_1(CaseStudy& system, Time ls0_at);
    /// One piece, no faults: end-to-end delay from LS0 to ejection.
    Exp1Result run_experiment_1(const Exp1Options& options = {});

    struct Exp2Options
    {
        Time fault_at = Time::from_ms_ratio(300, 1);
        Time duration = Time::from_ms_ratio(100, 1);
        /// Slowdown of node N1; 2592/91 stretches Beh1 from 9.1 ms to 259.2 ms.
        Rational factor{2592, 91};
        /// Permanent slowdown instead of a transient one.
        bool permanent = false;
        /// Disable the fault entirely.
        bool no_fault = false;
        /// Put a red piece at this belt position when the run starts; unset for none.
        std::optional<std::int64_t> piece_position = 6;
        Time until = Time::from_ms_ratio(4000, 1);
        /// Constant demand level on N1 for the metric report.
        double demand = 1.0;
        std::uint64_t seed = 1;
        bool observer_dumps = false;
    };

    struct Exp2Result
    {
        std::optional<Time> detected_at;
        std::optional<Time> switched_at;
        std::optional<Time> escalated_at;
        std::optional<Time> recovered_at;
        /// First C1 activation under Beh2 and the 1-based index of the pulse that caused it.
        std::optional<Time> first_beh2_at;
        std::int64_t first_beh2_pulse = 0;
        std::vector<Time> dropped_pulses;
        std::vector<RecoveryRecord> recovery;
        std::optional<MetricReport> report;
        /// Status of the placed piece, when one was placed.
        std::optional<PieceStatus> piece_status;
        std::int64_t final_count = 0;
        std::size_t true_steps = 0;
        RunLogs logs;
    };

    CaseStudyConfig experiment_2_config(const Exp2Options& options);
    Exp2Result analyse_experiment_2(CaseStudy& system, const StepTrace& demand);
    /// Slowdown of N1 during C1's processing, detection by the timing observer,
    /// switch to Beh2 and recovery.
    Exp2Result run_experiment_2(const Exp2Options& options = {});

    /// `count` pieces of random colour, `spacing` steps apart, the first crossing LS0 at `first`.
    std::vector<PieceSpec> seeded_pieces(std::size_t count, std::int64_t spacing, Time first, std::uint64_t seed,
                                         Time step_period = PlantGeometry{}.step_period);

    /// Verdict and fault logs in which the recovery measured from the fault is 460.5 ms.
    std::vector<VerdictRecord> recovery_fixture_verdicts();
    std::vector<FaultRecord> recovery_fixture_faults();
} // namespace rcps
