#pragma once

#include "rcps/component.hpp"
#include "rcps/kernel.hpp"
#include "rcps/middleware.hpp"
#include "rcps/plant.hpp"
#include "rcps/platform.hpp"
#include "rcps/runtime.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rcps
{
    /// Execution and communication costs of the sorter components.
    struct CaseStudyCosts
    {
        Time c1_beh1 = Time::from_ms_ratio(91, 10);
        Time c1_beh2 = Time::from_ms_ratio(41, 10);
        /// Transfer time of every message sent by C1.
        Time c1_comm = Time::from_ms_ratio(62, 100);
        Time c2 = Time::from_ms_ratio(1, 2);
        Time c3 = Time::from_ms_ratio(1, 1);
        Time c4 = Time::from_ms_ratio(1, 1);
        Time c5 = Time::from_ms_ratio(1, 1);
        Time c6 = Time::from_ms_ratio(1, 2);
        Time c7 = Time::from_ms_ratio(1, 2);

        /// Every cost zero.
        static CaseStudyCosts zero();
    };

    /// Replaces the default exec_cost (key = component) or comm_cost (key = edge) entry.
    struct CostOverride
    {
        std::string key;
        std::string behaviour;
        Time cost;
    };

    struct LinkOverride
    {
        std::string publisher;
        std::string subscriber;
        LinkModel link;
    };

    /// Input event handed directly to a component at a fixed time.
    struct Stimulus
    {
        Time at;
        std::string component;
        std::string event;
        Payload data;
    };

    struct CaseStudyConfig
    {
        PlantConfig plant;
        CaseStudyCosts costs;
        /// Processing deadline of C1's timing contract.
        Time c1_deadline = Time::from_ms_ratio(10, 1);
        Time debounce_beh1 = Time::from_ms_ratio(9, 1);
        Time debounce_beh2 = Time::from_ms_ratio(4, 1);
        /// Motor duty cycle commanded by C6, percent.
        double duty = 60.0;
        std::vector<FaultSpec> faults;
        std::uint64_t seed = 0;
        DegradedAvailability degraded_policy = DegradedAvailability::inverse_factor;
        RuntimeOptions runtime;
        LinkModel default_link;

        std::vector<std::string> extra_nodes;
        std::vector<std::string> platform_links;
        /// Component to node; entries replace the default placement.
        std::map<std::string, std::string> mapping;
        std::vector<CostOverride> exec_costs;
        std::vector<CostOverride> comm_costs;
        std::vector<TopicSpec> topics;
        std::vector<LinkOverride> links;
        std::vector<Stimulus> stimuli;
    };

    /// Contract texts of the sorter components, in the contract grammar.
    std::string c1_contract_text(const CaseStudyConfig& config);
    std::string c3_contract_text();
    std::string c6_contract_text();
    std::string c7_contract_text(const CaseStudyConfig& config);

    /// Component specs C1..C7 (C5 as C5.E1, C5.E2, C5.E3) in declaration order.
    std::vector<ComponentSpec> case_study_components(const CaseStudyConfig& config);

    /// Plant, platform N1..N3, middleware and the seven application components.
    class CaseStudy
    {
    public:
        explicit CaseStudy(const CaseStudyConfig& config);

        CaseStudy(const CaseStudy&) = delete;
        CaseStudy& operator=(const CaseStudy&) = delete;

        void run_until(Time t);

        [[nodiscard]] const CaseStudyConfig& config() const noexcept { return config_; }
        Kernel& kernel() noexcept { return kernel_; }
        Platform& platform() noexcept { return platform_; }
        Middleware& middleware() noexcept { return middleware_; }
        Runtime& runtime() noexcept { return runtime_; }
        Plant& plant() noexcept { return plant_; }
        [[nodiscard]] const std::vector<FaultHandle>& fault_handles() const noexcept { return handles_; }

    private:
        CaseStudyConfig config_;
        Kernel kernel_;
        Platform platform_;
        Middleware middleware_;
        Runtime runtime_;
        Plant plant_;
        std::vector<FaultHandle> handles_;
    };

    /// Builds the wired system; throws on inconsistent configuration.
    std::unique_ptr<CaseStudy> build_case_study(const CaseStudyConfig& config);
} // namespace rcps
