#include "rcps/contract_parser.hpp"
#include "rcps/scenario.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace rcps;

namespace
{
    constexpr int kOk = 0;
    constexpr int kInvalid = 1;
    constexpr int kAssertion = 2;

    std::string slurp(const fs::path& p)
    {
        std::ifstream in(p);
        if (!in)
        {
            throw std::runtime_error("cannot read " + p.string());
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }

    std::ofstream open_out(const fs::path& p)
    {
        std::ofstream out(p);
        if (!out)
        {
            throw std::runtime_error("cannot write " + p.string());
        }
        return out;
    }

    int cmd_check(const std::vector<std::string>& files)
    {
        int status = kOk;
        for (const auto& file : files)
        {
            std::vector<Contract> contracts;
            try
            {
                contracts = parse_contracts(slurp(file));
            }
            catch (const ParseError& e)
            {
                std::cerr << file << ":" << e.what() << "\n";
                status = kInvalid;
                continue;
            }
            catch (const std::exception& e)
            {
                std::cerr << file << ": error: " << e.what() << "\n";
                status = kInvalid;
                continue;
            }
            for (const auto& c : contracts)
            {
                const auto errors = validate_contract(c);
                for (const auto& err : errors)
                {
                    std::cerr << file << ": contract " << c.id << ": " << err.rule << ": " << err.message << "\n";
                }
                if (!errors.empty())
                {
                    status = kInvalid;
                    continue;
                }
                std::cout << file << ": contract " << c.id << " ok (" << guarantee_name(c.guarantee) << ")\n";
            }
        }
        return status;
    }

    struct RunArgs
    {
        std::string scenario;
        std::optional<double> until_ms;
        std::optional<std::uint64_t> seed;
        std::string trace_dir = "rcps-out";
        std::string metrics;
    };

    int cmd_run(const RunArgs& a)
    {
        Scenario s;
        try
        {
            s = is_preset(a.scenario) ? preset_scenario(a.scenario) : load_scenario_file(a.scenario);
            if (a.until_ms)
            {
                s.until = Time::from_ms(*a.until_ms);
            }
        }
        catch (const std::exception& e)
        {
            std::cerr << "error: " << e.what() << "\n";
            return kInvalid;
        }

        ScenarioOutcome out;
        try
        {
            out = run_scenario(s, a.seed);
        }
        catch (const std::exception& e)
        {
            std::cerr << "error: " << e.what() << "\n";
            return kInvalid;
        }

        const fs::path dir(a.trace_dir);
        fs::create_directories(dir);
        {
            auto f = open_out(dir / "dispatch.log");
            write_records(f, out.logs.dispatch);
        }
        {
            auto f = open_out(dir / "activations.log");
            write_records(f, out.logs.activations);
        }
        {
            auto f = open_out(dir / "deliveries.log");
            write_records(f, out.logs.deliveries);
        }
        {
            auto f = open_out(dir / "verdicts.log");
            write_records(f, out.logs.verdicts);
        }
        {
            auto f = open_out(dir / "faults.log");
            write_records(f, out.logs.faults);
        }
        {
            auto f = open_out(dir / "plant.log");
            write_records(f, out.logs.plant);
        }
        {
            auto f = open_out(dir / "availability.trace");
            write_trace(f, out.availability);
        }
        {
            auto f = open_out(dir / "demand.trace");
            write_trace(f, out.demand);
        }
        if (!out.logs.observer_dumps.empty())
        {
            auto f = open_out(dir / "observers.log");
            for (const auto& line : out.logs.observer_dumps)
            {
                f << line << '\n';
            }
        }
        const fs::path metrics = a.metrics.empty() ? dir / "metrics.json" : fs::path(a.metrics);
        {
            auto f = open_out(metrics);
            f << report_to_json(out.report) << '\n';
        }

        for (const auto& line : out.summary)
        {
            std::cout << line << "\n";
        }
        for (const auto& r : out.report.recovery)
        {
            std::cout << "recovery " << r.component << " " << r.contract << " detected " << r.detected_at.to_string()
                      << " recovered " << (r.recovered_at ? r.recovered_at->to_string() : std::string("open"))
                      << "\n";
        }
        for (const auto& f : out.failed_checks)
        {
            std::cerr << "check failed: " << f << "\n";
        }
        return out.failed_checks.empty() ? kOk : kAssertion;
    }

    struct ReplayArgs
    {
        std::string trace_dir;
        std::string metrics;
    };

    int cmd_replay(const ReplayArgs& a)
    {
        const fs::path dir(a.trace_dir);
        MetricReport report;
        try
        {
            std::ifstream av(dir / "availability.trace");
            std::ifstream dm(dir / "demand.trace");
            std::ifstream vl(dir / "verdicts.log");
            std::ifstream fl(dir / "faults.log");
            if (!av || !dm || !vl || !fl)
            {
                throw std::runtime_error("trace directory " + dir.string() +
                                         " lacks availability.trace, demand.trace, verdicts.log or faults.log");
            }
            const StepTrace avail = read_trace(av);
            const StepTrace demand = read_trace(dm);
            if (avail.empty() || demand.empty())
            {
                throw std::runtime_error("empty availability or demand trace");
            }
            report = compute_report(avail, demand, std::nullopt, read_verdict_log(vl), read_fault_log(fl));
        }
        catch (const std::exception& e)
        {
            std::cerr << "error: " << e.what() << "\n";
            return kInvalid;
        }
        const std::string json = report_to_json(report);
        if (a.metrics.empty())
        {
            std::cout << json << "\n";
        }
        else
        {
            auto f = open_out(a.metrics);
            f << json << '\n';
        }
        const fs::path recorded = dir / "metrics.json";
        if (fs::exists(recorded))
        {
            const MetricReport original = report_from_json(slurp(recorded));
            if (!(original == report))
            {
                std::cerr << "replayed report differs from " << recorded.string() << "\n";
                return kAssertion;
            }
            std::cerr << "replayed report matches " << recorded.string() << "\n";
        }
        return kOk;
    }
} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Resilient cyber-physical component simulator"};
    app.require_subcommand(1);

    std::vector<std::string> contract_files;
    auto* check = app.add_subcommand("check", "Validate contract files");
    check->add_option("--contract,contracts", contract_files, "Contract file")->required()->check(CLI::ExistingFile);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run a scenario file or the exp1/exp2 preset");
    run->add_option("--scenario", run_args.scenario, "Scenario path or preset name")->required();
    run->add_option("--until", run_args.until_ms, "End of the run in ms");
    run->add_option("--seed", run_args.seed, "Random seed");
    run->add_option("--trace-dir", run_args.trace_dir, "Directory for logs and traces");
    run->add_option("--metrics", run_args.metrics, "Metric report path (default <trace-dir>/metrics.json)");

    ReplayArgs replay_args;
    auto* replay = app.add_subcommand("replay", "Recompute the metric report from a trace directory");
    replay->add_option("--trace-dir", replay_args.trace_dir, "Directory written by run")->required();
    replay->add_option("--metrics", replay_args.metrics, "Write the report here instead of stdout");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try
    {
        if (check->parsed())
        {
            return cmd_check(contract_files);
        }
        if (run->parsed())
        {
            return cmd_run(run_args);
        }
        return cmd_replay(replay_args);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
}
