#include "rcps/algorithms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <sstream>

namespace rcps
{
    Value parse_value(const std::string& text)
    {
        if (text == "true")
        {
            return true;
        }
        if (text == "false")
        {
            return false;
        }
        std::int64_t i = 0;
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), i);
        if (ec == std::errc{} && p == text.data() + text.size())
        {
            return i;
        }
        double d = 0.0;
        auto [q, ec2] = std::from_chars(text.data(), text.data() + text.size(), d);
        if (ec2 == std::errc{} && q == text.data() + text.size())
        {
            return d;
        }
        throw ComponentError("cannot parse value '" + text + "'");
    }

    namespace
    {
        using Params = std::map<std::string, std::string>;

        std::string param(const Params& p, const std::string& key, const std::string& fallback)
        {
            auto it = p.find(key);
            return it == p.end() ? fallback : it->second;
        }

        std::string required(const Params& p, const std::string& key, const std::string& kernel)
        {
            auto it = p.find(key);
            if (it == p.end())
            {
                throw ComponentError(kernel + " needs parameter '" + key + "'");
            }
            return it->second;
        }

        double number(const std::string& text)
        {
            return as_double(parse_value(text));
        }

        std::vector<std::string> split(const std::string& s, char sep)
        {
            std::vector<std::string> out;
            std::string item;
            std::istringstream in(s);
            while (std::getline(in, item, sep))
            {
                if (!item.empty())
                {
                    out.push_back(item);
                }
            }
            return out;
        }

        class Init final : public Algorithm
        {
        public:
            explicit Init(const Params& p)
            {
                for (const auto& [k, v] : p)
                {
                    values_[k] = parse_value(v);
                }
            }
            bool run(AlgContext& ctx) override
            {
                for (const auto& [k, v] : values_)
                {
                    ctx.vars[k] = v;
                }
                return true;
            }
            [[nodiscard]] std::unique_ptr<Algorithm> clone() const override { return std::make_unique<Init>(*this); }

        private:
            Vars values_;
        };

        // Accepts an edge only when the lockout window since the last accepted edge has passed.
        class Debounce final : public Algorithm
        {
        public:
            explicit Debounce(const Params& p)
                : delay_(Time::from_ms(number(required(p, "delay_ms", "debounce")))), var_(param(p, "var", ""))
            {
            }
            bool run(AlgContext& ctx) override
            {
                std::optional<Time> last;
                if (!var_.empty())
                {
                    if (auto it = ctx.vars.find(var_); it != ctx.vars.end() && as_int(it->second) >= 0)
                    {
                        last = Time::from_ticks(as_int(it->second));
                    }
                }
                else
                {
                    last = last_;
                }
                if (last && ctx.now - *last < delay_)
                {
                    return false;
                }
                last_ = ctx.now;
                if (!var_.empty())
                {
                    ctx.vars[var_] = ctx.now.ticks();
                }
                return true;
            }
            [[nodiscard]] std::unique_ptr<Algorithm> clone() const override
            {
                return std::make_unique<Debounce>(*this);
            }

        private:
            Time delay_;
            std::string var_;
            std::optional<Time> last_;
        };

        class Counter final : public Algorithm
        {
        public:
            explicit Counter(const Params& p)
                : var_(param(p, "var", "count")), step_(as_int(parse_value(param(p, "step", "1"))))
            {
            }
            bool run(AlgContext& ctx) override
            {
                std::int64_t v = 0;
                if (auto it = ctx.vars.find(var_); it != ctx.vars.end())
                {
                    v = as_int(it->second);
                }
                ctx.vars[var_] = v + step_;
                return true;
            }
            [[nodiscard]] std::unique_ptr<Algorithm> clone() const override
            {
                return std::make_unique<Counter>(*this);
            }

        private:
            std::string var_;
            std::int64_t step_;
        };

        class PassThrough final : public Algorithm
        {
        public:
            explicit PassThrough(const Params& p) : from_(param(p, "from", "")), to_(param(p, "to", ""))
            {
                if (from_.empty() != to_.empty())
                {
                    throw ComponentError("pass_through needs both 'from' and 'to' or neither");
                }
            }
            bool run(AlgContext& ctx) override
            {
                if (!from_.empty())
                {
                    auto it = ctx.vars.find(from_);
                    if (it == ctx.vars.end())
                    {
                        return false;
                    }
                    ctx.vars[to_] = it->second;
                }
                return true;
            }
            [[nodiscard]] std::unique_ptr<Algorithm> clone() const override
            {
                return std::make_unique<PassThrough>(*this);
            }

        private:
            std::string from_;
            std::string to_;
        };

        // Sorting controller. A colour reading queues the piece's class; the next step
        // count turns it into an ejection trigger `steps + offset` for the class's ejector.
        class Classify final : public Algorithm
        {
        public:
            explicit Classify(const Params& p)
                : value_var_(param(p, "value_var", "colour")), steps_var_(param(p, "steps_var", "steps")),
                  reading_event_(param(p, "reading_event", "colour")), step_event_(param(p, "step_event", "motorStep"))
            {
                for (const auto& entry : split(required(p, "classes", "classify"), ','))
                {
                    const auto f = split(entry, ':');
                    if (f.size() != 5)
                    {
                        throw ComponentError("classify class entry must be name:lo:hi:offset:ejector, got " + entry);
                    }
                    Class c{f[0], number(f[1]), number(f[2]), as_int(parse_value(f[3])), as_int(parse_value(f[4]))};
                    if (c.lo > c.hi)
                    {
                        throw ComponentError("classify interval for " + c.name + " is reversed");
                    }
                    classes_.push_back(c);
                }
            }
            bool run(AlgContext& ctx) override
            {
                if (ctx.event == reading_event_)
                {
                    auto it = ctx.vars.find(value_var_);
                    if (it == ctx.vars.end())
                    {
                        return false;
                    }
                    const double v = as_double(it->second);
                    for (std::size_t i = 0; i < classes_.size(); ++i)
                    {
                        if (classes_[i].lo <= v && v <= classes_[i].hi)
                        {
                            pending_.push_back(i);
                            return false;
                        }
                    }
                    std::int64_t rejected = 0;
                    if (auto r = ctx.vars.find("rejected"); r != ctx.vars.end())
                    {
                        rejected = as_int(r->second);
                    }
                    ctx.vars["rejected"] = rejected + 1;
                    return false;
                }
                if (ctx.event == step_event_)
                {
                    if (pending_.empty())
                    {
                        return false;
                    }
                    auto it = ctx.vars.find(steps_var_);
                    if (it == ctx.vars.end())
                    {
                        return false;
                    }
                    const Class& c = classes_[pending_.front()];
                    pending_.pop_front();
                    ctx.vars["trigger"] = as_int(it->second) + c.offset;
                    ctx.vars["ejector"] = c.ejector;
                    return true;
                }
                return false;
            }
            [[nodiscard]] std::unique_ptr<Algorithm> clone() const override
            {
                return std::make_unique<Classify>(*this);
            }

        private:
            struct Class
            {
                std::string name;
                double lo;
                double hi;
                std::int64_t offset;
                std::int64_t ejector;
            };
            std::vector<Class> classes_;
            std::deque<std::size_t> pending_;
            std::string value_var_;
            std::string steps_var_;
            std::string reading_event_;
            std::string step_event_;
        };

        // Ejector: keeps the triggers addressed to it and fires when the live step
        // count equals the earliest one. Triggers already passed are discarded.
        class ThresholdTrigger final : public Algorithm
        {
        public:
            explicit ThresholdTrigger(const Params& p)
                : ejector_(as_int(parse_value(required(p, "ejector", "threshold_trigger")))),
                  trigger_event_(param(p, "trigger_event", "trigger")), step_event_(param(p, "step_event", "motorStep")),
                  steps_var_(param(p, "steps_var", "steps"))
            {
            }
            bool run(AlgContext& ctx) override
            {
                if (ctx.event == trigger_event_)
                {
                    auto e = ctx.vars.find("ejector");
                    auto t = ctx.vars.find("trigger");
                    if (e == ctx.vars.end() || t == ctx.vars.end() || as_int(e->second) != ejector_)
                    {
                        return false;
                    }
                    const auto trig = as_int(t->second);
                    triggers_.insert(std::upper_bound(triggers_.begin(), triggers_.end(), trig), trig);
                    return false;
                }
                if (ctx.event == step_event_)
                {
                    auto it = ctx.vars.find(steps_var_);
                    if (it == ctx.vars.end())
                    {
                        return false;
                    }
                    const auto steps = as_int(it->second);
                    while (!triggers_.empty() && triggers_.front() < steps)
                    {
                        triggers_.pop_front();
                    }
                    if (!triggers_.empty() && triggers_.front() == steps)
                    {
                        triggers_.pop_front();
                        ctx.vars["fired_at_steps"] = steps;
                        return true;
                    }
                }
                return false;
            }
            [[nodiscard]] std::unique_ptr<Algorithm> clone() const override
            {
                return std::make_unique<ThresholdTrigger>(*this);
            }

        private:
            std::int64_t ejector_;
            std::deque<std::int64_t> triggers_;
            std::string trigger_event_;
            std::string step_event_;
            std::string steps_var_;
        };
    } // namespace

    std::unique_ptr<Algorithm> make_algorithm(const AlgorithmRef& ref)
    {
        try
        {
            if (ref.kernel == "init")
            {
                return std::make_unique<Init>(ref.params);
            }
            if (ref.kernel == "debounce")
            {
                return std::make_unique<Debounce>(ref.params);
            }
            if (ref.kernel == "counter")
            {
                return std::make_unique<Counter>(ref.params);
            }
            if (ref.kernel == "pass_through")
            {
                return std::make_unique<PassThrough>(ref.params);
            }
            if (ref.kernel == "classify")
            {
                return std::make_unique<Classify>(ref.params);
            }
            if (ref.kernel == "threshold_trigger")
            {
                return std::make_unique<ThresholdTrigger>(ref.params);
            }
        }
        catch (const std::invalid_argument& e)
        {
            throw ComponentError(ref.kernel + ": " + e.what());
        }
        throw ComponentError("unknown algorithm kernel '" + ref.kernel + "'");
    }

    std::vector<std::string> algorithm_kernels()
    {
        return {"init", "debounce", "counter", "pass_through", "classify", "threshold_trigger"};
    }
} // namespace rcps
