#pragma once

#include "rcps/kernel.hpp"
#include "rcps/logs.hpp"
#include "rcps/metrics.hpp"
#include "rcps/rational.hpp"
#include "rcps/time.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcps
{
    class PlatformError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class TargetKind
    {
        node,
        sensor,
        link
    };

    enum class Health
    {
        available,
        degraded,
        down
    };

    /// Current condition of a node, sensor, or link.
    struct TargetStatus
    {
        Health health = Health::available;
        /// 1 unless degraded.
        Rational slowdown{1, 1};
        /// Set while a stuck-value fault is active on a sensor.
        std::optional<double> stuck_value;
    };

    struct PlatformNode
    {
        std::string id;
        TargetStatus status;
    };

    /// Component placement and cost functions.
    ///
    /// exec_cost maps (component, behaviour) to a fixed execution time; comm_cost maps
    /// (edge, behaviour of the sending component) to a transfer time. Edges are named
    /// `publisher->subscriber`.
    struct PlatformMapping
    {
        std::map<std::string, std::string> assignments;
        std::map<std::pair<std::string, std::string>, Time> exec_cost;
        std::map<std::pair<std::string, std::string>, Time> comm_cost;
    };

    enum class FaultKind
    {
        permanent,
        intermittent,
        transient
    };

    enum class FaultEffect
    {
        down,
        slowdown,
        stuck_value
    };

    struct FaultSpec
    {
        FaultKind kind = FaultKind::permanent;
        /// Intermittent faults alternate `up_phase` (target healthy) and `down_phase`
        /// (effect active), starting with the healthy phase at t0.
        Time up_phase;
        Time down_phase;
        /// Transient faults keep the effect active over [t0, t0 + duration).
        Time duration;
        std::string target;
        Time t0;
        FaultEffect effect = FaultEffect::down;
        Rational factor{1, 1};
        double stuck_value = 0.0;

        /// Throws PlatformError on a malformed spec.
        void validate() const;
        [[nodiscard]] std::string kind_name() const;
        [[nodiscard]] std::string effect_name() const;
    };

    struct FaultHandle
    {
        std::size_t index = 0;
        std::string target;
    };

    /// How a degraded (slowed-down) target contributes to the availability trace.
    enum class DegradedAvailability
    {
        inverse_factor, ///< a(t) = 1 / slowdown factor
        up              ///< a(t) = 1 while degraded
    };

    /// Platform nodes, sensors and links, their fault state, and the application mapping.
    class Platform
    {
    public:
        explicit Platform(Kernel& kernel);

        void add_node(const std::string& id);
        void add_sensor(const std::string& id);
        void add_link(const std::string& id);
        [[nodiscard]] bool has_target(const std::string& id) const;
        [[nodiscard]] std::vector<PlatformNode> nodes() const;

        void assign(const std::string& component, const std::string& node);
        void set_exec_cost(const std::string& component, const std::string& behaviour, Time cost);
        void set_comm_cost(const std::string& edge, const std::string& behaviour, Time cost);
        [[nodiscard]] const PlatformMapping& mapping() const noexcept { return mapping_; }

        /// Throws PlatformError unless each listed component is assigned to a known node.
        void require_mapped(const std::vector<std::string>& components) const;

        [[nodiscard]] const std::string& node_of(const std::string& component) const;
        [[nodiscard]] const TargetStatus& status(const std::string& target) const;

        /// exec_cost scaled by the hosting node's slowdown; nullopt while the node is down.
        [[nodiscard]] std::optional<Time> execution_duration(const std::string& component,
                                                             const std::string& behaviour) const;
        [[nodiscard]] std::optional<Time> comm_cost(const std::string& edge, const std::string& behaviour) const;

        /// Schedules the fault's status changes on the kernel.
        FaultHandle inject_fault(const FaultSpec& spec);

        [[nodiscard]] StepTrace availability(const std::string& target, Time window_end) const;
        [[nodiscard]] StepTrace availability(const FaultHandle& handle, Time window_end) const;
        [[nodiscard]] const std::vector<FaultRecord>& fault_log() const noexcept { return fault_log_; }
        [[nodiscard]] const std::vector<FaultSpec>& faults() const noexcept { return faults_; }

        void set_degraded_policy(DegradedAvailability policy) noexcept { degraded_policy_ = policy; }

    private:
        struct Target
        {
            TargetKind kind = TargetKind::node;
            TargetStatus status;
            std::vector<std::size_t> active_faults;
            std::vector<std::pair<Time, double>> availability;
        };

        Target& target(const std::string& id);
        [[nodiscard]] const Target& target(const std::string& id) const;
        void add_target(const std::string& id, TargetKind kind);
        void activate(std::size_t fault, Time at);
        void deactivate(std::size_t fault, Time at);
        void refresh(const std::string& id, Time at);
        void schedule_intermittent(std::size_t fault, Time phase_start);

        Kernel& kernel_;
        std::map<std::string, Target> targets_;
        std::vector<std::string> node_order_;
        PlatformMapping mapping_;
        std::vector<FaultSpec> faults_;
        std::vector<FaultRecord> fault_log_;
        DegradedAvailability degraded_policy_ = DegradedAvailability::inverse_factor;
    };
} // namespace rcps
