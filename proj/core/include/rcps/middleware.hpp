#pragma once

#include "rcps/kernel.hpp"
#include "rcps/logs.hpp"
#include "rcps/platform.hpp"
#include "rcps/time.hpp"
#include "rcps/value.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcps
{
    class MiddlewareError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    inline constexpr const char* kFaultPrefix = "fault/";

    [[nodiscard]] inline bool is_fault_topic(const std::string& name)
    {
        return name.rfind(kFaultPrefix, 0) == 0;
    }

    struct QoS
    {
        /// Maximum gap between consecutive deliveries to one subscriber.
        std::optional<Time> deadline;
        /// Maximum transit time of a single message.
        std::optional<Time> latency_budget;
    };

    struct TopicSpec
    {
        std::string name;
        /// Free-form description of the payload fields, e.g. "steps:int".
        std::string domain;
        QoS qos;
    };

    /// Transfer characteristics of one publisher-to-subscriber edge.
    struct LinkModel
    {
        Time base_latency;
        /// Uniform extra delay in [0, jitter], drawn from the kernel generator.
        Time jitter;
        double drop_prob = 0.0;
        /// Platform link whose faults affect this edge; empty for none.
        std::string platform_link;
    };

    struct Message
    {
        std::string topic;
        std::string publisher;
        Payload payload;
        /// Free text used by fault-channel messages.
        std::string note;
        Time published_at;
        std::uint64_t seq = 0;
    };

    using SubscriptionId = std::uint64_t;
    using DeliveryHandler = std::function<void(const Message&)>;

    struct QosViolation
    {
        std::string topic;
        std::string subscriber;
        std::string kind; // qos_deadline | qos_latency
        Time at;
        friend bool operator==(const QosViolation&, const QosViolation&) = default;
    };

    /// Simulated publish-subscribe layer.
    ///
    /// Deliveries are kernel events. Per publisher/subscriber pair the delivery order
    /// equals the publish order. Topics under `fault/` are created on first use.
    class Middleware
    {
    public:
        Middleware(Kernel& kernel, Platform* platform = nullptr);

        void add_topic(TopicSpec spec);
        [[nodiscard]] bool has_topic(const std::string& name) const;
        [[nodiscard]] const TopicSpec& topic(const std::string& name) const;
        /// Creates `fault/<owner>` when missing and returns its name.
        std::string ensure_fault_topic(const std::string& owner);

        void set_default_link(LinkModel link) { default_link_ = std::move(link); }
        void set_link(const std::string& publisher, const std::string& subscriber, LinkModel link);
        [[nodiscard]] const LinkModel& link(const std::string& publisher, const std::string& subscriber) const;
        /// True when any link draws jitter or drops.
        [[nodiscard]] bool stochastic() const;

        SubscriptionId subscribe(const std::string& topic, const std::string& component, DeliveryHandler handler);
        void unsubscribe(SubscriptionId id);

        /// Returns the number of deliveries scheduled. `behaviour` selects the sender's
        /// comm_cost entry when a platform mapping is attached.
        std::size_t publish(const std::string& topic, const std::string& publisher, const Payload& payload,
                            const std::string& behaviour = "", const std::string& note = "");

        /// Evaluates the topic's QoS predicates at time t and reports violations that
        /// open a new episode. Each new episode also produces one fault-channel message
        /// on `fault/<subscriber>`.
        std::vector<QosViolation> qos_monitor_step(const std::string& topic, Time t);

        [[nodiscard]] const std::vector<DeliveryRecord>& delivery_log() const noexcept { return log_; }
        [[nodiscard]] const std::vector<QosViolation>& qos_violations() const noexcept { return violations_; }
        [[nodiscard]] std::vector<std::string> topic_names() const;

    private:
        struct Subscription
        {
            SubscriptionId id = 0;
            std::string topic;
            std::string component;
            DeliveryHandler handler;
        };

        struct InFlight
        {
            Time published;
            Time transit;
            bool delivered = false;
        };

        struct QosState
        {
            std::optional<Time> last_delivery;
            bool deadline_episode = false;
            bool latency_episode = false;
            std::vector<InFlight> in_flight;
        };

        [[nodiscard]] Time transit_for(const std::string& publisher, const std::string& subscriber,
                                       const std::string& behaviour, bool& dropped, std::string& status);
        void deliver(const Subscription& sub, const Message& msg, Time transit, std::size_t flight_index);
        void record(Time t, const Message& msg, const std::string& subscriber, Time transit,
                    const std::string& status);

        Kernel& kernel_;
        Platform* platform_;
        std::map<std::string, TopicSpec> topics_;
        std::vector<Subscription> subs_;
        SubscriptionId next_sub_ = 1;
        std::uint64_t next_msg_ = 1;
        LinkModel default_link_;
        std::map<std::pair<std::string, std::string>, LinkModel> links_;
        std::map<std::pair<std::string, std::string>, Time> fifo_;
        std::map<std::pair<std::string, std::string>, QosState> qos_;
        std::vector<DeliveryRecord> log_;
        std::vector<QosViolation> violations_;
    };
} // namespace rcps
