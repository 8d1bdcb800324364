#include "rcps/scenario.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rcps
{
    using nlohmann::json;

    bool Scenario::stochastic() const
    {
        const auto noisy = [](const LinkModel& l) { return l.jitter.ticks() > 0 || l.drop_prob > 0.0; };
        if (noisy(config.default_link) || config.plant.bounce.probability > 0.0)
        {
            return true;
        }
        for (const auto& l : config.links)
        {
            if (noisy(l.link))
            {
                return true;
            }
        }
        return false;
    }

    namespace
    {
        void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed)
        {
            if (!j.is_object())
            {
                throw ScenarioError(where + ": expected an object");
            }
            const std::set<std::string> ok(allowed.begin(), allowed.end());
            for (const auto& [k, v] : j.items())
            {
                if (!ok.contains(k))
                {
                    throw ScenarioError(where + ": unknown key '" + k + "'");
                }
            }
        }

        const json& need(const json& j, const std::string& where, const char* key)
        {
            if (!j.contains(key))
            {
                throw ScenarioError(where + ": missing '" + key + "'");
            }
            return j.at(key);
        }

        Time ms_of(const json& j, const std::string& where)
        {
            if (!j.is_number())
            {
                throw ScenarioError(where + ": expected a number of milliseconds");
            }
            try
            {
                return Time::from_ms(j.get<double>());
            }
            catch (const std::invalid_argument& e)
            {
                throw ScenarioError(where + ": " + e.what());
            }
        }

        Time ms_field(const json& j, const std::string& where, const char* key)
        {
            return ms_of(need(j, where, key), where + "." + key);
        }

        Rational rational_of(const json& j, const std::string& where)
        {
            try
            {
                if (j.is_string())
                {
                    return Rational::parse(j.get<std::string>());
                }
                if (j.is_number())
                {
                    return Rational::parse(j.dump());
                }
            }
            catch (const std::exception& e)
            {
                throw ScenarioError(where + ": " + e.what());
            }
            throw ScenarioError(where + ": expected a number or \"a/b\"");
        }

        LinkModel link_of(const json& j, const std::string& where)
        {
            only_keys(j, where, {"publisher", "subscriber", "base_latency_ms", "jitter_ms", "drop_prob",
                                 "platform_link"});
            LinkModel l;
            if (j.contains("base_latency_ms"))
            {
                l.base_latency = ms_field(j, where, "base_latency_ms");
            }
            if (j.contains("jitter_ms"))
            {
                l.jitter = ms_field(j, where, "jitter_ms");
            }
            l.drop_prob = j.value("drop_prob", 0.0);
            if (l.drop_prob < 0.0 || l.drop_prob > 1.0)
            {
                throw ScenarioError(where + ": drop_prob must lie in [0,1]");
            }
            l.platform_link = j.value("platform_link", std::string{});
            return l;
        }

        FaultSpec fault_of(const json& j, const std::string& where)
        {
            only_keys(j, where,
                      {"kind", "target", "t0_ms", "duration_ms", "up_ms", "down_ms", "effect", "factor",
                       "stuck_value"});
            FaultSpec f;
            const std::string kind = need(j, where, "kind").get<std::string>();
            if (kind == "permanent")
            {
                f.kind = FaultKind::permanent;
            }
            else if (kind == "transient")
            {
                f.kind = FaultKind::transient;
                f.duration = ms_field(j, where, "duration_ms");
            }
            else if (kind == "intermittent")
            {
                f.kind = FaultKind::intermittent;
                f.up_phase = ms_field(j, where, "up_ms");
                f.down_phase = ms_field(j, where, "down_ms");
            }
            else
            {
                throw ScenarioError(where + ": unknown fault kind '" + kind + "'");
            }
            f.target = need(j, where, "target").get<std::string>();
            f.t0 = ms_field(j, where, "t0_ms");
            const std::string effect = j.value("effect", std::string("down"));
            if (effect == "down")
            {
                f.effect = FaultEffect::down;
            }
            else if (effect == "slowdown")
            {
                f.effect = FaultEffect::slowdown;
                f.factor = rational_of(need(j, where, "factor"), where + ".factor");
            }
            else if (effect == "stuck_value")
            {
                f.effect = FaultEffect::stuck_value;
                f.stuck_value = need(j, where, "stuck_value").get<double>();
            }
            else
            {
                throw ScenarioError(where + ": unknown fault effect '" + effect + "'");
            }
            try
            {
                f.validate();
            }
            catch (const PlatformError& e)
            {
                throw ScenarioError(where + ": " + e.what());
            }
            return f;
        }

        void apply_plant(const json& j, Scenario& s)
        {
            only_keys(j, "plant", {"step_period_ms", "pieces", "random_pieces", "bounce", "pressure"});
            PlantConfig& p = s.config.plant;
            if (j.contains("step_period_ms"))
            {
                p.geometry.step_period = ms_field(j, "plant", "step_period_ms");
            }
            if (j.contains("pieces"))
            {
                p.pieces.clear();
                for (const auto& e : j.at("pieces"))
                {
                    only_keys(e, "plant.pieces[]", {"colour", "ls0_ms"});
                    try
                    {
                        p.pieces.push_back(PieceSpec{parse_colour(need(e, "plant.pieces[]", "colour").get<std::string>()),
                                                     ms_field(e, "plant.pieces[]", "ls0_ms")});
                    }
                    catch (const PlantError& err)
                    {
                        throw ScenarioError(std::string("plant.pieces[]: ") + err.what());
                    }
                }
            }
            if (j.contains("random_pieces"))
            {
                const auto& r = j.at("random_pieces");
                only_keys(r, "plant.random_pieces", {"count", "spacing_steps", "first_ms", "seed"});
                const auto extra = seeded_pieces(need(r, "plant.random_pieces", "count").get<std::size_t>(),
                                                 r.value("spacing_steps", std::int64_t{3}),
                                                 r.contains("first_ms") ? ms_field(r, "plant.random_pieces", "first_ms")
                                                                        : Time::zero(),
                                                 r.value("seed", std::uint64_t{1}), p.geometry.step_period);
                p.pieces.insert(p.pieces.end(), extra.begin(), extra.end());
            }
            if (j.contains("bounce"))
            {
                const auto& b = j.at("bounce");
                only_keys(b, "plant.bounce", {"probability", "window_ms", "max_edges"});
                p.bounce.probability = b.value("probability", 0.0);
                if (b.contains("window_ms"))
                {
                    p.bounce.window = ms_field(b, "plant.bounce", "window_ms");
                }
                p.bounce.max_edges = b.value("max_edges", 1);
            }
            if (j.contains("pressure"))
            {
                const auto& q = j.at("pressure");
                only_keys(q, "plant.pressure", {"enabled", "k1", "k2", "window_ms", "sample_ms"});
                p.pressure.enabled = q.value("enabled", true);
                p.pressure.k1 = q.value("k1", p.pressure.k1);
                p.pressure.k2 = q.value("k2", p.pressure.k2);
                if (q.contains("window_ms"))
                {
                    p.pressure.window = ms_field(q, "plant.pressure", "window_ms");
                }
                if (q.contains("sample_ms"))
                {
                    p.pressure.sample_period = ms_field(q, "plant.pressure", "sample_ms");
                }
            }
        }

        std::vector<CostOverride> costs_of(const json& j, const char* where, const char* key_name)
        {
            std::vector<CostOverride> out;
            if (!j.is_array())
            {
                throw ScenarioError(std::string(where) + ": expected an array");
            }
            for (const auto& e : j)
            {
                only_keys(e, where, {key_name, "behaviour", "ms"});
                out.push_back(CostOverride{need(e, where, key_name).get<std::string>(),
                                           need(e, where, "behaviour").get<std::string>(), ms_field(e, where, "ms")});
            }
            return out;
        }

        void apply_sections(const json& doc, Scenario& s)
        {
            only_keys(doc, "scenario",
                      {"name", "experiment", "run", "nodes", "platform_links", "mapping", "exec_cost", "comm_cost",
                       "faults", "plant", "topics", "links", "default_link", "stimuli", "demand",
                       "degraded_availability", "runtime", "c1_deadline_ms"});
            if (doc.contains("name"))
            {
                s.name = doc.at("name").get<std::string>();
            }
            if (doc.contains("run"))
            {
                const auto& r = doc.at("run");
                only_keys(r, "run", {"until_ms", "seed"});
                if (r.contains("until_ms"))
                {
                    s.until = ms_field(r, "run", "until_ms");
                }
                if (r.contains("seed"))
                {
                    s.seed = r.at("seed").get<std::uint64_t>();
                }
            }
            if (doc.contains("nodes"))
            {
                for (const auto& n : doc.at("nodes"))
                {
                    const auto id = n.get<std::string>();
                    if (id != "N1" && id != "N2" && id != "N3")
                    {
                        s.config.extra_nodes.push_back(id);
                    }
                }
            }
            if (doc.contains("platform_links"))
            {
                s.config.platform_links = doc.at("platform_links").get<std::vector<std::string>>();
            }
            if (doc.contains("mapping"))
            {
                for (const auto& [comp, node] : doc.at("mapping").items())
                {
                    s.config.mapping[comp] = node.get<std::string>();
                }
            }
            if (doc.contains("exec_cost"))
            {
                auto more = costs_of(doc.at("exec_cost"), "exec_cost", "component");
                s.config.exec_costs.insert(s.config.exec_costs.end(), more.begin(), more.end());
            }
            if (doc.contains("comm_cost"))
            {
                auto more = costs_of(doc.at("comm_cost"), "comm_cost", "edge");
                s.config.comm_costs.insert(s.config.comm_costs.end(), more.begin(), more.end());
            }
            if (doc.contains("faults"))
            {
                s.config.faults.clear();
                for (const auto& f : doc.at("faults"))
                {
                    s.config.faults.push_back(fault_of(f, "faults[]"));
                }
            }
            if (doc.contains("plant"))
            {
                apply_plant(doc.at("plant"), s);
            }
            if (doc.contains("topics"))
            {
                for (const auto& t : doc.at("topics"))
                {
                    only_keys(t, "topics[]", {"name", "domain", "deadline_ms", "latency_budget_ms"});
                    TopicSpec spec{need(t, "topics[]", "name").get<std::string>(), t.value("domain", std::string{}), {}};
                    if (t.contains("deadline_ms"))
                    {
                        spec.qos.deadline = ms_field(t, "topics[]", "deadline_ms");
                    }
                    if (t.contains("latency_budget_ms"))
                    {
                        spec.qos.latency_budget = ms_field(t, "topics[]", "latency_budget_ms");
                    }
                    s.config.topics.push_back(spec);
                }
            }
            if (doc.contains("default_link"))
            {
                s.config.default_link = link_of(doc.at("default_link"), "default_link");
            }
            if (doc.contains("links"))
            {
                for (const auto& l : doc.at("links"))
                {
                    s.config.links.push_back(LinkOverride{need(l, "links[]", "publisher").get<std::string>(),
                                                          need(l, "links[]", "subscriber").get<std::string>(),
                                                          link_of(l, "links[]")});
                }
            }
            if (doc.contains("stimuli"))
            {
                for (const auto& st : doc.at("stimuli"))
                {
                    only_keys(st, "stimuli[]", {"at_ms", "component", "event", "data"});
                    Stimulus x{ms_field(st, "stimuli[]", "at_ms"), need(st, "stimuli[]", "component").get<std::string>(),
                               need(st, "stimuli[]", "event").get<std::string>(), {}};
                    if (st.contains("data"))
                    {
                        for (const auto& [k, v] : st.at("data").items())
                        {
                            if (v.is_boolean())
                            {
                                x.data[k] = v.get<bool>();
                            }
                            else if (v.is_number_integer())
                            {
                                x.data[k] = v.get<std::int64_t>();
                            }
                            else if (v.is_number())
                            {
                                x.data[k] = v.get<double>();
                            }
                            else
                            {
                                throw ScenarioError("stimuli[].data." + k + ": expected a scalar");
                            }
                        }
                    }
                    s.config.stimuli.push_back(std::move(x));
                }
            }
            if (doc.contains("demand"))
            {
                const auto& d = doc.at("demand");
                only_keys(d, "demand", {"target", "changes"});
                s.demand_target = d.value("target", s.demand_target);
                if (d.contains("changes"))
                {
                    s.demand.clear();
                    for (const auto& c : d.at("changes"))
                    {
                        if (!c.is_array() || c.size() != 2)
                        {
                            throw ScenarioError("demand.changes: expected [ms, value] pairs");
                        }
                        s.demand.emplace_back(ms_of(c.at(0), "demand.changes"), c.at(1).get<double>());
                    }
                }
            }
            if (doc.contains("degraded_availability"))
            {
                const auto p = doc.at("degraded_availability").get<std::string>();
                if (p == "inverse_factor")
                {
                    s.config.degraded_policy = DegradedAvailability::inverse_factor;
                }
                else if (p == "up")
                {
                    s.config.degraded_policy = DegradedAvailability::up;
                }
                else
                {
                    throw ScenarioError("degraded_availability: expected inverse_factor or up");
                }
            }
            if (doc.contains("runtime"))
            {
                const auto& r = doc.at("runtime");
                only_keys(r, "runtime", {"scan_period_ms", "observer_dumps"});
                if (r.contains("scan_period_ms"))
                {
                    s.config.runtime.scan_period = ms_field(r, "runtime", "scan_period_ms");
                }
                s.config.runtime.observer_dumps = r.value("observer_dumps", false);
            }
            if (doc.contains("c1_deadline_ms"))
            {
                s.config.c1_deadline = ms_field(doc, "scenario", "c1_deadline_ms");
            }
        }
    } // namespace

    bool is_preset(const std::string& name) { return name == "exp1" || name == "exp2"; }

    Scenario preset_scenario(const std::string& name)
    {
        Scenario s;
        s.name = name;
        s.experiment = name;
        if (name == "exp1")
        {
            const Exp1Options o;
            s.config = experiment_1_config(o);
            s.until = o.until;
            s.seed = o.seed;
        }
        else if (name == "exp2")
        {
            const Exp2Options o;
            s.config = experiment_2_config(o);
            s.until = o.until;
            s.seed = o.seed;
        }
        else
        {
            throw ScenarioError("unknown preset '" + name + "'");
        }
        return s;
    }

    Scenario parse_scenario(const std::string& text)
    {
        json doc;
        try
        {
            doc = json::parse(text);
        }
        catch (const json::parse_error& e)
        {
            throw ScenarioError(std::string("malformed scenario: ") + e.what());
        }
        if (!doc.is_object())
        {
            throw ScenarioError("scenario must be a JSON object");
        }
        Scenario s;
        try
        {
            if (doc.contains("experiment"))
            {
                const auto preset = doc.at("experiment").get<std::string>();
                s = preset_scenario(preset);
                s.seed.reset();
            }
            apply_sections(doc, s);
        }
        catch (const json::exception& e)
        {
            throw ScenarioError(std::string("schema violation: ") + e.what());
        }
        return s;
    }

    Scenario load_scenario_file(const std::filesystem::path& path)
    {
        std::ifstream in(path);
        if (!in)
        {
            throw ScenarioError("cannot read scenario " + path.string());
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        Scenario s = parse_scenario(buf.str());
        if (s.name.empty())
        {
            s.name = path.stem().string();
        }
        return s;
    }

    namespace
    {
        std::string ms_text(std::optional<Time> t) { return t ? t->to_string() : std::string("none"); }

        void check(std::vector<std::string>& failed, bool ok, const std::string& what)
        {
            if (!ok)
            {
                failed.push_back(what);
            }
        }
    } // namespace

    ScenarioOutcome run_scenario(const Scenario& scenario, std::optional<std::uint64_t> seed)
    {
        const auto effective = seed ? seed : scenario.seed;
        if (!effective && scenario.stochastic())
        {
            throw ScenarioError("scenario uses jitter, drops or bounce and needs a seed");
        }
        CaseStudyConfig cfg = scenario.config;
        cfg.seed = effective.value_or(0);

        std::unique_ptr<CaseStudy> system;
        try
        {
            system = build_case_study(cfg);
        }
        catch (const std::exception& e)
        {
            throw ScenarioError(std::string("invalid scenario: ") + e.what());
        }
        system->run_until(scenario.until);

        ScenarioOutcome out;
        out.logs = collect_logs(*system);
        out.availability = system->platform().availability(scenario.demand_target, scenario.until);
        out.demand = StepTrace::from_changes(scenario.demand, scenario.until);
        out.report = compute_report(out.availability, out.demand, std::nullopt, out.logs.verdicts, out.logs.faults);

        auto& sum = out.summary;
        sum.push_back("scenario " + scenario.name + " until " + scenario.until.to_string() + " ms seed " +
                      std::to_string(cfg.seed));
        std::size_t ejected = 0;
        std::size_t correct = 0;
        for (const auto& p : system->plant().pieces())
        {
            ejected += p.status == PieceStatus::ejected ? 1 : 0;
            correct += p.status == PieceStatus::ejected && p.bin == p.expected_bin() ? 1 : 0;
        }
        sum.push_back("pieces " + std::to_string(system->plant().pieces().size()) + " ejected " +
                      std::to_string(ejected) + " correct " + std::to_string(correct));
        sum.push_back("verdict records " + std::to_string(out.logs.verdicts.size()));
        sum.push_back("resilience " + std::to_string(out.report.resilience));

        if (scenario.experiment == "exp1")
        {
            const Exp1Result r = analyse_experiment_1(*system, cfg.plant.pieces.empty() ? Time::zero()
                                                                                         : cfg.plant.pieces.front().ls0_at);
            sum.push_back("exp1 beh1 " + r.beh1_cost.to_string() + " ms compute+send " + r.compute_send.to_string() +
                          " ms delay " + ms_text(r.delay) + " ms");
            check(out.failed_checks, r.delay.has_value(), "exp1: the probe piece was not ejected");
            if (r.delay)
            {
                check(out.failed_checks, std::llabs(r.delay->ticks() - Time::from_ms_ratio(3800, 1).ticks()) <=
                                             Time::from_ms_ratio(50, 1).ticks(),
                      "exp1: delay " + r.delay->to_string() + " ms is not within 3800 +- 50 ms");
                check(out.failed_checks, r.within_deadline, "exp1: delay exceeds the end-to-end deadline");
            }
            check(out.failed_checks, r.bin == r.expected_bin, "exp1: piece landed in the wrong bin");
        }
        else if (scenario.experiment == "exp2")
        {
            const Exp2Result r = analyse_experiment_2(*system, out.demand);
            sum.push_back("exp2 detected " + ms_text(r.detected_at) + " switch " + ms_text(r.switched_at) +
                          " first Beh2 pulse " + std::to_string(r.first_beh2_pulse) + " recovered " +
                          ms_text(r.recovered_at));
            std::optional<Time> fault_at;
            for (const auto& f : cfg.faults)
            {
                if (f.target == "N1")
                {
                    fault_at = f.t0;
                    break;
                }
            }
            check(out.failed_checks, fault_at && r.detected_at &&
                                         *r.detected_at == *fault_at + Time::from_ms_ratio(10, 1),
                  "exp2: violation not reported 10 ms after the fault");
            check(out.failed_checks, r.first_beh2_pulse == 5, "exp2: Beh2 does not first run at the fifth pulse");
            check(out.failed_checks, !r.recovery.empty() && r.recovery.front().recovered_at.has_value(),
                  "exp2: no completed recovery record");
        }
        return out;
    }
} // namespace rcps
