#include "rcps/case_study.hpp"

#include "rcps/contract_parser.hpp"

#include <cstdio>

namespace rcps
{
    namespace
    {
        std::string num(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", v);
            return buf;
        }

        EccAction action(std::string kernel, std::map<std::string, std::string> params,
                         std::vector<std::string> emits = {})
        {
            return EccAction{AlgorithmRef{std::move(kernel), std::move(params)}, std::move(emits)};
        }

        EccTransition on(const std::string& event, const std::string& dst)
        {
            return EccTransition{"*", event, std::nullopt, dst, 0};
        }

        ComponentSpec pulse_counter(const CaseStudyConfig& cfg)
        {
            ComponentSpec s;
            s.id = "C1";
            s.inputs = {EventPortSpec{"pulse", {}, "pulse", InputPolicy::drop_when_busy}};
            s.outputs = {EventPortSpec{"motorStep", {"steps"}, "motorSteps", InputPolicy::queue}};
            const auto behaviour = [](const std::string& id, Time delay) {
                Ecc ecc;
                ecc.initial = "INIT";
                ecc.states = {
                    EccState{"INIT", {action("init", {{"steps", "0"}, {"_last_edge", "-1"}})}},
                    EccState{"COUNT",
                             {action("debounce", {{"delay_ms", delay.to_string()}, {"var", "_last_edge"}}),
                              action("counter", {{"var", "steps"}}, {"motorStep"})}},
                };
                ecc.transitions = {on("pulse", "COUNT")};
                return BehaviourSpec{id, ecc, "COUNT"};
            };
            s.behaviours = {behaviour("Beh1", cfg.debounce_beh1), behaviour("Beh2", cfg.debounce_beh2)};
            s.contracts = {ContractBinding{parse_contract(c1_contract_text(cfg)), "pulse", "", ""}};
            s.initial_behaviour = "Beh1";
            return s;
        }

        ComponentSpec single(const std::string& id, std::vector<EventPortSpec> inputs,
                             std::vector<EventPortSpec> outputs, std::vector<EccState> states,
                             std::vector<EccTransition> transitions)
        {
            ComponentSpec s;
            s.id = id;
            s.inputs = std::move(inputs);
            s.outputs = std::move(outputs);
            Ecc ecc;
            ecc.initial = "INIT";
            ecc.states = std::move(states);
            ecc.states.insert(ecc.states.begin(), EccState{"INIT", {}});
            ecc.transitions = std::move(transitions);
            s.behaviours = {BehaviourSpec{"Main", ecc, ""}};
            s.initial_behaviour = "Main";
            return s;
        }
    } // namespace

    CaseStudyCosts CaseStudyCosts::zero()
    {
        CaseStudyCosts c;
        c.c1_beh1 = c.c1_beh2 = c.c1_comm = Time::zero();
        c.c2 = c.c3 = c.c4 = c.c5 = c.c6 = c.c7 = Time::zero();
        return c;
    }

    std::string c1_contract_text(const CaseStudyConfig& config)
    {
        return "contract C1_timing {\n"
               "  input pulse : boolean\n"
               "  output motorStep : integer\n"
               "  guarantee timing every " +
               config.plant.geometry.step_period.to_string() + " ms within " + config.c1_deadline.to_string() +
               " ms\n}\n";
    }

    std::string c3_contract_text()
    {
        return "contract C3_colour {\n"
               "  output colour : real\n"
               "  guarantee member colour in [750, 755] | [568, 590] | [535, 558]\n}\n";
    }

    std::string c6_contract_text()
    {
        return "contract C6_duty {\n"
               "  output duty : real\n"
               "  guarantee bound duty in [0, 100]\n}\n";
    }

    std::string c7_contract_text(const CaseStudyConfig& config)
    {
        const auto& p = config.plant.pressure;
        return "contract C7_pressure {\n"
               "  input pressure : real\n"
               "  guarantee envelope pressure rate " +
               num(p.k1) + " init " + num(p.k2) + " tol 0.05\n}\n";
    }

    std::vector<ComponentSpec> case_study_components(const CaseStudyConfig& config)
    {
        const auto& g = config.plant.geometry;
        const auto offsets = g.trigger_offsets();
        std::vector<ComponentSpec> out;
        out.push_back(pulse_counter(config));

        out.push_back(single("C2", {EventPortSpec{"barrier", {"barrier"}, "barrier"}},
                             {EventPortSpec{"pieceAt", {"barrier"}, "pieceAt"}},
                             {EccState{"SEEN", {action("pass_through", {}, {"pieceAt"})}}}, {on("barrier", "SEEN")}));

        auto c3 = single("C3", {EventPortSpec{"reading", {"value"}, "reading"}},
                         {EventPortSpec{"colour", {"colour"}, "colour"}},
                         {EccState{"READ", {action("pass_through", {{"from", "value"}, {"to", "colour"}}, {"colour"})}}},
                         {on("reading", "READ")});
        c3.contracts = {ContractBinding{parse_contract(c3_contract_text()), "", "", ""}};
        out.push_back(std::move(c3));

        std::string classes;
        const char* names[] = {"red", "blue", "white"};
        const Colour colours[] = {Colour::red, Colour::blue, Colour::white};
        for (int i = 0; i < 3; ++i)
        {
            const Interval iv = colour_interval(colours[i]);
            const int bin = colour_bin(colours[i]);
            classes += (i ? "," : "") + std::string(names[i]) + ":" + num(iv.lo) + ":" + num(iv.hi) + ":" +
                       std::to_string(offsets[static_cast<std::size_t>(bin - 1)]) + ":" + std::to_string(bin);
        }
        out.push_back(single("C4",
                             {EventPortSpec{"colour", {"colour"}, "colour"},
                              EventPortSpec{"motorStep", {"steps"}, "motorSteps"}},
                             {EventPortSpec{"trigger", {"trigger", "ejector"}, "trigger"}},
                             {EccState{"RUN", {action("classify", {{"classes", classes}}, {"trigger"})}}},
                             {on("colour", "RUN"), on("motorStep", "RUN")}));

        for (int e = 1; e <= 3; ++e)
        {
            const std::string id = "C5.E" + std::to_string(e);
            out.push_back(single(id,
                                 {EventPortSpec{"trigger", {"trigger", "ejector"}, "trigger"},
                                  EventPortSpec{"motorStep", {"steps"}, "motorSteps"}},
                                 {EventPortSpec{"eject", {"fired_at_steps"}, "eject/E" + std::to_string(e)}},
                                 {EccState{"RUN", {action("threshold_trigger", {{"ejector", std::to_string(e)}},
                                                          {"eject"})}}},
                                 {on("trigger", "RUN"), on("motorStep", "RUN")}));
        }

        auto c6 = single("C6", {EventPortSpec{"motorStep", {"steps"}, "motorSteps"}},
                         {EventPortSpec{"pwm", {"duty"}, "pwm"}},
                         {EccState{"DRIVE", {action("pass_through", {}, {"pwm"})}}}, {on("motorStep", "DRIVE")});
        c6.behaviours[0].ecc.states[0].actions = {action("init", {{"duty", std::to_string(config.duty)}})};
        c6.contracts = {ContractBinding{parse_contract(c6_contract_text()), "", "", ""}};
        out.push_back(std::move(c6));

        auto c7 = single("C7",
                         {EventPortSpec{"valveOpen", {"pressure"}, "valveOpen"},
                          EventPortSpec{"valveClose", {}, "valveClose"},
                          EventPortSpec{"pressure", {"pressure"}, "pressure"}},
                         {}, {EccState{"MON", {action("pass_through", {})}}},
                         {on("valveOpen", "MON"), on("valveClose", "MON"), on("pressure", "MON")});
        c7.contracts = {ContractBinding{parse_contract(c7_contract_text(config)), "pressure", "valveOpen", "valveClose"}};
        out.push_back(std::move(c7));
        return out;
    }

    CaseStudy::CaseStudy(const CaseStudyConfig& config)
        : config_(config), kernel_(config.seed), platform_(kernel_), middleware_(kernel_, &platform_),
          runtime_(kernel_, platform_, middleware_, config.runtime), plant_(config.plant, &kernel_.rng(), &platform_)
    {
        for (const char* n : {"N1", "N2", "N3"})
        {
            platform_.add_node(n);
        }
        platform_.add_sensor(config_.plant.colour_sensor_id);
        platform_.add_sensor(config_.plant.air_id);
        platform_.add_sensor("ENC");
        platform_.set_degraded_policy(config_.degraded_policy);
        middleware_.set_default_link(config_.default_link);

        const auto& c = config_.costs;
        for (const auto& n : config_.extra_nodes)
        {
            platform_.add_node(n);
        }
        for (const auto& l : config_.platform_links)
        {
            platform_.add_link(l);
        }
        std::map<std::string, std::string> placement{{"C1", "N1"},   {"C2", "N1"},   {"C3", "N2"},
                                                           {"C4", "N2"},   {"C5.E1", "N3"}, {"C5.E2", "N3"},
                                                           {"C5.E3", "N3"}, {"C6", "N3"},   {"C7", "N3"}};
        for (const auto& [comp, node] : config_.mapping)
        {
            placement[comp] = node;
        }
        for (const auto& [comp, node] : placement)
        {
            platform_.assign(comp, node);
        }
        platform_.set_exec_cost("C1", "Beh1", c.c1_beh1);
        platform_.set_exec_cost("C1", "Beh2", c.c1_beh2);
        platform_.set_exec_cost("C2", "Main", c.c2);
        platform_.set_exec_cost("C3", "Main", c.c3);
        platform_.set_exec_cost("C4", "Main", c.c4);
        for (const char* e : {"C5.E1", "C5.E2", "C5.E3"})
        {
            platform_.set_exec_cost(e, "Main", c.c5);
        }
        platform_.set_exec_cost("C6", "Main", c.c6);
        platform_.set_exec_cost("C7", "Main", c.c7);
        for (const char* sub : {"C4", "C5.E1", "C5.E2", "C5.E3", "C6"})
        {
            for (const char* beh : {"Beh1", "Beh2"})
            {
                platform_.set_comm_cost(std::string("C1->") + sub, beh, c.c1_comm);
            }
        }

        for (const auto& o : config_.exec_costs)
        {
            platform_.set_exec_cost(o.key, o.behaviour, o.cost);
        }
        for (const auto& o : config_.comm_costs)
        {
            platform_.set_comm_cost(o.key, o.behaviour, o.cost);
        }
        for (const auto& t : config_.topics)
        {
            middleware_.add_topic(t);
        }
        for (const auto& l : config_.links)
        {
            middleware_.set_link(l.publisher, l.subscriber, l.link);
        }

        for (auto& spec : case_study_components(config_))
        {
            runtime_.add_component(std::move(spec));
        }
        for (const auto& f : config_.faults)
        {
            handles_.push_back(platform_.inject_fault(f));
        }
        plant_.attach(kernel_, middleware_);
        runtime_.start();
        for (const auto& s : config_.stimuli)
        {
            kernel_.schedule(s.at, s.component, "stimulus", s.event,
                             [this, s] { runtime_.inject(s.component, s.event, s.data); });
        }
    }

    void CaseStudy::run_until(Time t) { kernel_.run_until(t); }

    std::unique_ptr<CaseStudy> build_case_study(const CaseStudyConfig& config)
    {
        return std::make_unique<CaseStudy>(config);
    }
} // namespace rcps
