#pragma once

#include "rcps/component.hpp"
#include "rcps/logs.hpp"
#include "rcps/observer.hpp"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rcps
{
    struct RmDecision
    {
        enum class Kind
        {
            switch_behaviour,
            fault_message,
            escalate
        };
        Kind kind = Kind::fault_message;
        std::string behaviour;
        std::string note;
        friend bool operator==(const RmDecision&, const RmDecision&) = default;
    };

    /// Per-component controller over the observers of the component's contracts.
    ///
    /// A violation opens a fault episode for its contract and blames the active
    /// behaviour; the manager then asks for the first behaviour in preference order
    /// that is not blamed, or escalates once when none is left. From the first activation
    /// after that decision a fresh probe observer watches the contract. The episode
    /// closes, and the probe replaces the primary observer, once the probe has seen the
    /// contract hold for one full period (timing), one conforming sample (bound and
    /// set membership), or one complete window (envelope).
    class ResilienceManager
    {
    public:
        ResilienceManager(std::string component, std::vector<std::string> preference,
                          std::vector<ContractBinding> bindings, FaultInPolicy policy = FaultInPolicy::log_only,
                          SynthesisOptions options = {});

        ResilienceManager(const ResilienceManager&) = delete;
        ResilienceManager& operator=(const ResilienceManager&) = delete;
        ResilienceManager(ResilienceManager&&) = default;

        /// Feeds an event to contract i's primary observer and, if running, its probe.
        void observe(std::size_t contract, const ObservedEvent& event, Time t);
        /// Advances every observer to t.
        void advance(Time t);
        /// Starts probes that wait for the first activation after a decision.
        void on_activation_start(Time t);

        /// Inspects verdicts and episodes at time t.
        std::vector<RmDecision> rm_step(Time t, const std::string& active_behaviour);
        std::vector<RmDecision> on_fault_message(const std::string& note, Time t, const std::string& active_behaviour);

        /// Times at which rm_step must run even without new events.
        [[nodiscard]] std::vector<Time> wakeups() const;

        [[nodiscard]] std::size_t contract_count() const noexcept { return slots_.size(); }
        [[nodiscard]] const ContractBinding& binding(std::size_t i) const { return slots_.at(i).binding; }
        [[nodiscard]] const Observer& observer(std::size_t i) const { return *slots_.at(i).primary; }
        [[nodiscard]] const Observer* probe(std::size_t i) const { return slots_.at(i).probe.get(); }
        [[nodiscard]] bool episode_open(std::size_t i) const { return slots_.at(i).episode.has_value(); }
        [[nodiscard]] const std::set<std::string>& blamed() const noexcept { return blamed_; }
        [[nodiscard]] const std::vector<VerdictRecord>& log() const noexcept { return log_; }
        [[nodiscard]] const std::string& component() const noexcept { return component_; }
        [[nodiscard]] std::vector<std::string> dump(Time t) const;

    private:
        struct Episode
        {
            Time detected_at;
            bool awaiting_probe = true;
            std::optional<Time> probe_start;
            std::optional<Time> close_at;
            bool probe_violation_handled = false;
        };

        struct Slot
        {
            ContractBinding binding;
            std::unique_ptr<Observer> primary;
            std::unique_ptr<Observer> probe;
            std::optional<Episode> episode;
        };

        void blame(Time t, const std::string& active, const std::string& reason, std::vector<RmDecision>& out);
        void log(Time t, const std::string& contract, const std::string& transition, const std::string& detail);

        std::string component_;
        std::vector<std::string> preference_;
        std::vector<Slot> slots_;
        FaultInPolicy policy_;
        SynthesisOptions options_;
        std::set<std::string> blamed_;
        std::optional<std::string> requested_;
        bool escalated_ = false;
        std::vector<VerdictRecord> log_;
    };
} // namespace rcps
