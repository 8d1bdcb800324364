#pragma once

#include "rcps/component.hpp"
#include "rcps/kernel.hpp"
#include "rcps/logs.hpp"
#include "rcps/middleware.hpp"
#include "rcps/platform.hpp"
#include "rcps/resilience_manager.hpp"

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rcps
{
    struct RuntimeOptions
    {
        /// Cyclic scheduling with this scan period; event-queued scheduling when unset.
        std::optional<Time> scan_period;
        /// Record observer state dumps after every resilience-manager step.
        bool observer_dumps = false;
        SynthesisOptions synthesis;
    };

    /// Executes component instances on the kernel.
    ///
    /// Event-queued mode activates a component when an input arrives; a component
    /// runs one activation at a time and handles inputs that arrive meanwhile according
    /// to their InputPolicy. Cyclic mode activates every component once per scan in
    /// declaration order, on the inputs latched before the scan.
    class Runtime
    {
    public:
        Runtime(Kernel& kernel, Platform& platform, Middleware& middleware, RuntimeOptions options = {});

        Runtime(const Runtime&) = delete;
        Runtime& operator=(const Runtime&) = delete;

        ComponentInstance& add_component(ComponentSpec spec);

        /// Subscribes all components, creating topics that are not declared yet, and in
        /// cyclic mode schedules the scans starting at the current time.
        void start();

        /// Hands an input event to a component at the current time, bypassing the middleware.
        void inject(const std::string& component, const std::string& event, const Payload& data = {});

        /// Runs one scan at time t; returns the number of activations.
        std::size_t cyclic_scan(Time t);

        [[nodiscard]] ComponentInstance& instance(const std::string& id);
        [[nodiscard]] ResilienceManager& manager(const std::string& id);
        [[nodiscard]] bool busy(const std::string& id) const;
        [[nodiscard]] const std::vector<std::string>& order() const noexcept { return order_; }

        [[nodiscard]] const std::vector<ActivationRecord>& activation_log() const noexcept { return activations_; }
        [[nodiscard]] const std::vector<VerdictRecord>& verdict_log() const noexcept { return verdicts_; }
        [[nodiscard]] const std::vector<std::string>& observer_dump_log() const noexcept { return dumps_; }

    private:
        struct Node
        {
            std::unique_ptr<ComponentInstance> inst;
            std::unique_ptr<ResilienceManager> rm;
            bool busy = false;
            std::deque<std::pair<std::string, Payload>> queue;
            std::vector<std::pair<std::string, Payload>> latched;
            std::set<Time> wakeups;
            std::size_t rm_log_seen = 0;
        };

        Node& node(const std::string& id);
        void handle_input(Node& n, const std::string& event, const Payload& data);
        void start_activation(Node& n, const std::string& event, const Payload& data);
        void complete_activation(Node& n, const std::vector<std::pair<std::string, Payload>>& events,
                                 const ActivationResult& result);
        void observe_start(Node& n, const std::string& event, const Payload& data, Time t);
        void observe_complete(Node& n, const std::string& event, const Payload& data,
                              const std::vector<Emission>& emissions, Time t);
        void after_rm(Node& n, const std::vector<RmDecision>& extra = {});
        void schedule_scan(Time t);

        Kernel& kernel_;
        Platform& platform_;
        Middleware& middleware_;
        RuntimeOptions options_;
        std::map<std::string, Node> nodes_;
        std::vector<std::string> order_;
        std::vector<ActivationRecord> activations_;
        std::vector<VerdictRecord> verdicts_;
        std::vector<std::string> dumps_;
        bool started_ = false;
    };
} // namespace rcps
