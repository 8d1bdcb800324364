#include "rcps/middleware.hpp"

#include <algorithm>

namespace rcps
{
    Middleware::Middleware(Kernel& kernel, Platform* platform) : kernel_(kernel), platform_(platform) {}

    void Middleware::add_topic(TopicSpec spec)
    {
        if (spec.name.empty())
        {
            throw MiddlewareError("topic name must not be empty");
        }
        if (topics_.contains(spec.name))
        {
            throw MiddlewareError("duplicate topic " + spec.name);
        }
        if ((spec.qos.deadline && spec.qos.deadline->ticks() <= 0) ||
            (spec.qos.latency_budget && spec.qos.latency_budget->ticks() <= 0))
        {
            throw MiddlewareError("QoS values of topic " + spec.name + " must be positive");
        }
        topics_.emplace(spec.name, std::move(spec));
    }

    bool Middleware::has_topic(const std::string& name) const { return topics_.contains(name); }

    const TopicSpec& Middleware::topic(const std::string& name) const
    {
        auto it = topics_.find(name);
        if (it == topics_.end())
        {
            throw MiddlewareError("unknown topic " + name);
        }
        return it->second;
    }

    std::string Middleware::ensure_fault_topic(const std::string& owner)
    {
        std::string name = std::string(kFaultPrefix) + owner;
        if (!topics_.contains(name))
        {
            topics_.emplace(name, TopicSpec{name, "fault", {}});
        }
        return name;
    }

    void Middleware::set_link(const std::string& publisher, const std::string& subscriber, LinkModel link)
    {
        if (link.drop_prob < 0.0 || link.drop_prob > 1.0)
        {
            throw MiddlewareError("drop probability must lie in [0,1]");
        }
        if (link.base_latency.ticks() < 0 || link.jitter.ticks() < 0)
        {
            throw MiddlewareError("link latency must be non-negative");
        }
        links_[{publisher, subscriber}] = std::move(link);
    }

    const LinkModel& Middleware::link(const std::string& publisher, const std::string& subscriber) const
    {
        auto it = links_.find({publisher, subscriber});
        return it == links_.end() ? default_link_ : it->second;
    }

    bool Middleware::stochastic() const
    {
        const auto random = [](const LinkModel& l) { return l.jitter.ticks() > 0 || l.drop_prob > 0.0; };
        if (random(default_link_))
        {
            return true;
        }
        return std::any_of(links_.begin(), links_.end(), [&](const auto& kv) { return random(kv.second); });
    }

    SubscriptionId Middleware::subscribe(const std::string& topic_name, const std::string& component,
                                         DeliveryHandler handler)
    {
        if (!topics_.contains(topic_name))
        {
            if (!is_fault_topic(topic_name))
            {
                throw MiddlewareError("unknown topic " + topic_name);
            }
            ensure_fault_topic(topic_name.substr(std::char_traits<char>::length(kFaultPrefix)));
        }
        for (const auto& s : subs_)
        {
            if (s.topic == topic_name && s.component == component)
            {
                throw MiddlewareError(component + " already subscribes to " + topic_name);
            }
        }
        subs_.push_back(Subscription{next_sub_, topic_name, component, std::move(handler)});
        return next_sub_++;
    }

    void Middleware::unsubscribe(SubscriptionId id)
    {
        auto it = std::find_if(subs_.begin(), subs_.end(), [&](const Subscription& s) { return s.id == id; });
        if (it == subs_.end())
        {
            throw MiddlewareError("unknown subscription " + std::to_string(id));
        }
        subs_.erase(it);
    }

    Time Middleware::transit_for(const std::string& publisher, const std::string& subscriber,
                                 const std::string& behaviour, bool& dropped, std::string& status)
    {
        const LinkModel& l = link(publisher, subscriber);
        Time base = l.base_latency;
        if (platform_ != nullptr)
        {
            if (auto cc = platform_->comm_cost(publisher + "->" + subscriber, behaviour))
            {
                base = *cc;
            }
        }
        if (l.jitter.ticks() > 0)
        {
            base += Time::from_ticks(kernel_.rng().uniform_int(0, l.jitter.ticks()));
        }
        if (l.drop_prob > 0.0 && kernel_.rng().bernoulli(l.drop_prob))
        {
            dropped = true;
            status = "dropped";
        }
        if (platform_ != nullptr && !l.platform_link.empty())
        {
            const auto& st = platform_->status(l.platform_link);
            if (st.health == Health::down)
            {
                dropped = true;
                status = "link_down";
            }
            else if (st.health == Health::degraded)
            {
                base = st.slowdown.scale(base);
            }
        }
        return base;
    }

    void Middleware::record(Time t, const Message& msg, const std::string& subscriber, Time transit,
                            const std::string& status)
    {
        std::string payload = payload_to_string(msg.payload);
        if (!msg.note.empty())
        {
            payload = payload.empty() ? msg.note : payload + ";" + msg.note;
        }
        log_.push_back(DeliveryRecord{t, msg.topic, msg.publisher, subscriber, payload, transit.ms(), status});
    }

    std::size_t Middleware::publish(const std::string& topic_name, const std::string& publisher,
                                    const Payload& payload, const std::string& behaviour, const std::string& note)
    {
        if (!topics_.contains(topic_name))
        {
            if (!is_fault_topic(topic_name))
            {
                throw MiddlewareError("unknown topic " + topic_name);
            }
            ensure_fault_topic(topic_name.substr(std::char_traits<char>::length(kFaultPrefix)));
        }
        const Time now = kernel_.now();
        Message msg{topic_name, publisher, payload, note, now, next_msg_++};
        const TopicSpec& spec = topics_.at(topic_name);

        std::vector<Subscription> targets;
        for (const auto& s : subs_)
        {
            if (s.topic == topic_name)
            {
                targets.push_back(s);
            }
        }
        if (targets.empty())
        {
            record(now, msg, "-", Time::zero(), "no_subscribers");
            return 0;
        }

        std::size_t scheduled = 0;
        for (const auto& sub : targets)
        {
            bool dropped = false;
            std::string status;
            Time transit = transit_for(publisher, sub.component, behaviour, dropped, status);
            if (dropped)
            {
                record(now, msg, sub.component, transit, status);
                continue;
            }
            const auto key = std::make_pair(publisher, sub.component);
            Time at = now + transit;
            if (auto it = fifo_.find(key); it != fifo_.end() && at < it->second)
            {
                at = it->second;
            }
            fifo_[key] = at;
            transit = at - now;

            auto& q = qos_[{topic_name, sub.component}];
            q.in_flight.push_back(InFlight{now, transit, false});
            const std::size_t flight = q.in_flight.size() - 1;
            if (spec.qos.latency_budget && transit > *spec.qos.latency_budget)
            {
                kernel_.schedule_tick_end(now + *spec.qos.latency_budget, "middleware", "qos_check", topic_name,
                                          [this, topic_name] { qos_monitor_step(topic_name, kernel_.now()); });
            }
            kernel_.schedule(at, sub.component, "deliver", topic_name,
                             [this, sub, msg, transit, flight] { deliver(sub, msg, transit, flight); });
            ++scheduled;
        }
        return scheduled;
    }

    void Middleware::deliver(const Subscription& sub, const Message& msg, Time transit, std::size_t flight_index)
    {
        const Time now = kernel_.now();
        auto& q = qos_[{msg.topic, sub.component}];
        q.in_flight[flight_index].delivered = true;
        q.last_delivery = now;
        q.deadline_episode = false;
        const TopicSpec& spec = topics_.at(msg.topic);
        if (!spec.qos.latency_budget || transit <= *spec.qos.latency_budget)
        {
            q.latency_episode = false;
        }
        if (spec.qos.deadline)
        {
            const std::string topic_name = msg.topic;
            kernel_.schedule_tick_end(now + *spec.qos.deadline, "middleware", "qos_check", topic_name,
                                      [this, topic_name] { qos_monitor_step(topic_name, kernel_.now()); });
        }

        const bool still_subscribed = std::any_of(subs_.begin(), subs_.end(), [&](const Subscription& s) {
            return s.topic == sub.topic && s.component == sub.component;
        });
        if (!still_subscribed)
        {
            record(now, msg, sub.component, transit, "unsubscribed");
            return;
        }
        record(now, msg, sub.component, transit, "delivered");
        sub.handler(msg);
    }

    std::vector<QosViolation> Middleware::qos_monitor_step(const std::string& topic_name, Time t)
    {
        const TopicSpec& spec = topic(topic_name);
        std::vector<QosViolation> found;
        for (auto& [key, q] : qos_)
        {
            if (key.first != topic_name)
            {
                continue;
            }
            const std::string& subscriber = key.second;
            if (spec.qos.deadline && q.last_delivery && !q.deadline_episode &&
                t - *q.last_delivery >= *spec.qos.deadline)
            {
                q.deadline_episode = true;
                found.push_back(QosViolation{topic_name, subscriber, "qos_deadline", *q.last_delivery + *spec.qos.deadline});
            }
            if (spec.qos.latency_budget && !q.latency_episode)
            {
                for (const auto& f : q.in_flight)
                {
                    if (!f.delivered && f.transit > *spec.qos.latency_budget &&
                        t >= f.published + *spec.qos.latency_budget)
                    {
                        q.latency_episode = true;
                        found.push_back(
                            QosViolation{topic_name, subscriber, "qos_latency", f.published + *spec.qos.latency_budget});
                        break;
                    }
                }
            }
        }
        for (const auto& v : found)
        {
            violations_.push_back(v);
            publish(ensure_fault_topic(v.subscriber), "middleware", {}, "",
                    v.kind + " topic=" + v.topic + " subscriber=" + v.subscriber);
        }
        return found;
    }

    std::vector<std::string> Middleware::topic_names() const
    {
        std::vector<std::string> out;
        for (const auto& [name, spec] : topics_)
        {
            out.push_back(name);
        }
        return out;
    }
} // namespace rcps
