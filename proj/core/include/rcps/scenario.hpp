#pragma once

#include "rcps/experiments.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcps
{
    class ScenarioError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    struct Scenario
    {
        std::string name;
        /// exp1 or exp2 when the scenario derives from an experiment preset.
        std::string experiment;
        CaseStudyConfig config;
        Time until = Time::from_ms_ratio(4000, 1);
        std::optional<std::uint64_t> seed;
        /// Target whose availability enters the metric report, and its demand profile.
        std::string demand_target = "N1";
        std::vector<std::pair<Time, double>> demand{{Time::zero(), 1.0}};

        /// True when the run draws from the random generator in a way that affects timing.
        [[nodiscard]] bool stochastic() const;
    };

    /// Parses a scenario document. Throws ScenarioError on malformed JSON or schema violations.
    Scenario parse_scenario(const std::string& text);
    Scenario load_scenario_file(const std::filesystem::path& path);
    /// Built-in presets `exp1` and `exp2`.
    Scenario preset_scenario(const std::string& name);
    [[nodiscard]] bool is_preset(const std::string& name);

    struct ScenarioOutcome
    {
        RunLogs logs;
        StepTrace availability;
        StepTrace demand;
        MetricReport report;
        /// Failed preset checks; empty when the scenario is not a preset or all hold.
        std::vector<std::string> failed_checks;
        std::vector<std::string> summary;
    };

    /// Runs the scenario; `seed` overrides the scenario's own. Throws ScenarioError when a
    /// stochastic scenario has no seed.
    ScenarioOutcome run_scenario(const Scenario& scenario, std::optional<std::uint64_t> seed = std::nullopt);
} // namespace rcps
