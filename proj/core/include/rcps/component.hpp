#pragma once

#include "rcps/algorithms.hpp"
#include "rcps/contract.hpp"
#include "rcps/ecc.hpp"
#include "rcps/platform.hpp"
#include "rcps/time.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rcps
{
    /// What happens to an input event that arrives while the component is executing.
    enum class InputPolicy
    {
        queue,         ///< kept in FIFO order and processed after the running activation
        drop_when_busy ///< discarded, like a sampled input read only between executions
    };

    struct EventPortSpec
    {
        std::string name;
        /// Data variables carried with the event.
        std::vector<std::string> data;
        /// Middleware topic; defaults to the event name.
        std::string topic;
        InputPolicy policy = InputPolicy::queue;

        [[nodiscard]] const std::string& topic_name() const { return topic.empty() ? name : topic; }
    };

    struct BehaviourSpec
    {
        std::string id;
        Ecc ecc;
        /// State taken when the component switches to this behaviour; defaults to the ECC's initial state.
        std::string entry_state;
    };

    /// Connects a contract to the component's events.
    ///
    /// Timing contracts treat activations on `sample_event` as samples and their
    /// completions as processing ends. Envelope contracts open and close their window
    /// on `start_event` and `stop_event`. Data contracts check every activation whose
    /// inputs or outputs carry the guaranteed port.
    struct ContractBinding
    {
        Contract contract;
        std::string sample_event;
        std::string start_event;
        std::string stop_event;
    };

    enum class FaultInPolicy
    {
        log_only,
        switch_next
    };

    struct ComponentSpec
    {
        std::string id;
        std::vector<EventPortSpec> inputs;
        std::vector<EventPortSpec> outputs;
        /// Declaration order is the resilience manager's preference order.
        std::vector<BehaviourSpec> behaviours;
        std::vector<ContractBinding> contracts;
        std::string initial_behaviour;
        FaultInPolicy fault_policy = FaultInPolicy::log_only;
        /// Fault-channel owners whose messages this component receives.
        std::vector<std::string> fault_sources;

        /// Throws ComponentError or ContractError when the spec is inconsistent.
        void validate() const;
        [[nodiscard]] const EventPortSpec* input(const std::string& name) const;
        [[nodiscard]] const EventPortSpec* output(const std::string& name) const;
        [[nodiscard]] std::vector<std::string> behaviour_ids() const;
    };

    struct Emission
    {
        std::string event;
        Payload data;
    };

    struct ActivationResult
    {
        bool fired = false;
        std::string behaviour;
        std::string state;
        std::vector<Emission> emissions;
        /// nullopt when the hosting node is down and the activation never completes.
        std::optional<Time> completion;
    };

    /// Emission list for logs: `event{k=v;...}|event{...}` or `-`.
    std::string emissions_to_string(const std::vector<Emission>& emissions);

    /// Function-block instance: interface, behaviours with their ECCs, shared variables.
    class ComponentInstance
    {
    public:
        /// Validates the spec and runs the initial behaviour's initial-state actions.
        explicit ComponentInstance(ComponentSpec spec);

        /// Latches the event data, takes the highest-priority enabled transition of the
        /// active behaviour and runs the target state's actions. The completion time
        /// comes from the platform's execution cost for the active behaviour, or is
        /// `t` when no platform is given.
        ActivationResult activate(const std::string& event, const Payload& data, Time t,
                                  const Platform* platform = nullptr);

        /// Latches a behaviour switch for the next activation boundary. Returns false
        /// when the behaviour is already active and nothing is pending.
        bool switch_behavior(const std::string& behaviour);

        /// Applies a latched switch. Returns true when the behaviour changed.
        bool apply_pending_switch(Time t);

        [[nodiscard]] const ComponentSpec& spec() const noexcept { return spec_; }
        [[nodiscard]] const std::string& id() const noexcept { return spec_.id; }
        [[nodiscard]] const std::string& active_behaviour() const;
        [[nodiscard]] std::optional<std::string> pending_behaviour() const;
        [[nodiscard]] const std::string& ecc_state() const noexcept { return state_; }
        [[nodiscard]] const Vars& vars() const noexcept { return vars_; }
        [[nodiscard]] Vars& vars() noexcept { return vars_; }
        [[nodiscard]] std::optional<Time> last_switch_at() const noexcept { return last_switch_at_; }

    private:
        struct BehaviourRuntime
        {
            std::map<std::string, std::vector<std::unique_ptr<Algorithm>>> algorithms; // per state
        };

        [[nodiscard]] std::size_t behaviour_index(const std::string& id) const;
        std::vector<Emission> run_state(const std::string& state, const std::string& event, Time t);

        ComponentSpec spec_;
        std::vector<BehaviourRuntime> runtimes_;
        std::size_t active_ = 0;
        std::optional<std::size_t> pending_;
        std::string state_;
        Vars vars_;
        std::optional<Time> last_switch_at_;
    };
} // namespace rcps
