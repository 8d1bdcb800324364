#include "rcps/plant.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace rcps
{
    std::string colour_name(Colour c)
    {
        switch (c)
        {
        case Colour::red:
            return "red";
        case Colour::blue:
            return "blue";
        case Colour::white:
            return "white";
        }
        return "?";
    }

    Colour parse_colour(const std::string& s)
    {
        if (s == "red")
        {
            return Colour::red;
        }
        if (s == "blue")
        {
            return Colour::blue;
        }
        if (s == "white")
        {
            return Colour::white;
        }
        throw PlantError("unknown colour '" + s + "'");
    }

    Interval colour_interval(Colour c)
    {
        switch (c)
        {
        case Colour::red:
            return {568.0, 590.0};
        case Colour::blue:
            return {750.0, 755.0};
        case Colour::white:
            return {535.0, 558.0};
        }
        return {};
    }

    int colour_bin(Colour c)
    {
        switch (c)
        {
        case Colour::red:
            return 1;
        case Colour::blue:
            return 2;
        case Colour::white:
            return 3;
        }
        return 0;
    }

    void PlantGeometry::validate() const
    {
        if (step_period.ticks() <= 0)
        {
            throw PlantError("step period must be positive");
        }
        if (ejectors.size() != 3)
        {
            throw PlantError("the sorter needs exactly three ejectors");
        }
        std::int64_t prev = 0;
        if (colour_sensor <= prev)
        {
            throw PlantError("colour sensor must lie after LS0");
        }
        prev = colour_sensor;
        for (auto e : ejectors)
        {
            if (e <= prev)
            {
                throw PlantError("ejector at step " + std::to_string(e) + " is not after the previous sensor");
            }
            prev = e;
        }
        if (belt_end <= prev)
        {
            throw PlantError("belt end must lie after the last ejector");
        }
        if (!(ejector_window > 0.0 && ejector_window < 1.0))
        {
            throw PlantError("ejector window must lie in (0,1) steps");
        }
    }

    std::vector<std::int64_t> PlantGeometry::trigger_offsets() const
    {
        std::vector<std::int64_t> out;
        for (auto e : ejectors)
        {
            out.push_back(e - colour_sensor);
        }
        return out;
    }

    double WorkPiece::position(Time t, Time step_period) const
    {
        return static_cast<double>((t - ls0_at).ticks()) / static_cast<double>(step_period.ticks());
    }

    std::string PlantRecord::to_line() const
    {
        return std::to_string(time.ticks()) + "," + piece + "," + event + "," + detail;
    }

    Plant::Plant(PlantConfig config, Rng* rng, const Platform* platform)
        : config_(std::move(config)), rng_(rng), platform_(platform)
    {
        config_.geometry.validate();
        if (config_.bounce.probability < 0.0 || config_.bounce.probability > 1.0 || config_.bounce.max_edges < 1)
        {
            throw PlantError("invalid bounce configuration");
        }
        if (config_.bounce.probability > 0.0 && config_.bounce.window.ticks() <= 0)
        {
            throw PlantError("bounce window must be positive");
        }
        if (config_.pressure.enabled &&
            (config_.pressure.window.ticks() <= 0 || config_.pressure.sample_period.ticks() <= 0 ||
             config_.pressure.k2 <= 0.0))
        {
            throw PlantError("invalid pressure configuration");
        }
        std::size_t i = 0;
        for (const auto& p : config_.pieces)
        {
            WorkPiece w;
            w.id = i++;
            w.colour = p.colour;
            w.ls0_at = p.ls0_at;
            pieces_.push_back(w);
        }
    }

    std::vector<SensorEvent> Plant::step_plant(Time dt)
    {
        if (dt.ticks() <= 0)
        {
            throw PlantError("plant step must be positive");
        }
        const auto& g = config_.geometry;
        const Time from = now_;
        const Time to = now_ + dt;
        std::vector<SensorEvent> out;

        while (g.step_period * next_pulse_ < to)
        {
            const Time t = g.step_period * next_pulse_;
            ++next_pulse_;
            if (t < from)
            {
                continue;
            }
            ++true_steps_;
            out.push_back(SensorEvent{t, SensorKind::pulse, -1, 0, 0.0});
            if (rng_ != nullptr && config_.bounce.probability > 0.0 && rng_->bernoulli(config_.bounce.probability))
            {
                const auto n = rng_->uniform_int(1, config_.bounce.max_edges);
                for (std::int64_t k = 0; k < n; ++k)
                {
                    const auto off = rng_->uniform_int(1, config_.bounce.window.ticks());
                    out.push_back(SensorEvent{t + Time::from_ticks(off), SensorKind::bounce, -1, 0, 0.0});
                }
            }
        }

        for (const auto& p : pieces_)
        {
            if (p.status != PieceStatus::on_belt)
            {
                continue;
            }
            const auto crossing = [&](std::int64_t pos, SensorKind kind, int index) {
                const Time c = p.ls0_at + g.step_period * pos;
                if (from <= c && c < to)
                {
                    out.push_back(
                        SensorEvent{c, kind, static_cast<std::int64_t>(p.id), index, static_cast<double>(pos)});
                }
            };
            crossing(0, SensorKind::barrier, 0);
            crossing(g.colour_sensor, SensorKind::colour, 0);
            for (std::size_t e = 0; e < g.ejectors.size(); ++e)
            {
                crossing(g.ejectors[e], SensorKind::barrier, static_cast<int>(e + 1));
            }
            crossing(g.belt_end, SensorKind::belt_end, 0);
        }

        std::stable_sort(out.begin(), out.end(), [](const SensorEvent& a, const SensorEvent& b) {
            if (a.time != b.time)
            {
                return a.time < b.time;
            }
            return a.position < b.position;
        });
        now_ = to;
        return out;
    }

    double Plant::read_colour(std::size_t piece, Time t)
    {
        WorkPiece& p = pieces_.at(piece);
        double v = 0.0;
        std::optional<double> stuck;
        if (platform_ != nullptr && platform_->has_target(config_.colour_sensor_id))
        {
            stuck = platform_->status(config_.colour_sensor_id).stuck_value;
        }
        if (stuck)
        {
            v = *stuck;
        }
        else
        {
            const Interval iv = colour_interval(p.colour);
            v = rng_ != nullptr ? rng_->uniform(iv.lo, iv.hi) : 0.5 * (iv.lo + iv.hi);
        }
        p.reading = v;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", v);
        log_.push_back(PlantRecord{t, "P" + std::to_string(piece), "colour", colour_name(p.colour) + ":" + buf});
        return v;
    }

    std::optional<std::size_t> Plant::eject(int ejector, Time t)
    {
        const auto& g = config_.geometry;
        if (ejector < 1 || ejector > static_cast<int>(g.ejectors.size()))
        {
            throw PlantError("unknown ejector E" + std::to_string(ejector));
        }
        const double at = static_cast<double>(g.ejectors[static_cast<std::size_t>(ejector - 1)]);
        std::optional<std::size_t> best;
        double best_d = 0.0;
        for (const auto& p : pieces_)
        {
            if (p.status != PieceStatus::on_belt)
            {
                continue;
            }
            const double d = std::fabs(p.position(t, g.step_period) - at);
            if (d <= g.ejector_window && (!best || d < best_d))
            {
                best = p.id;
                best_d = d;
            }
        }
        if (!best)
        {
            log_.push_back(PlantRecord{t, "-", "eject_empty", "E" + std::to_string(ejector)});
            return std::nullopt;
        }
        WorkPiece& p = pieces_[*best];
        p.status = PieceStatus::ejected;
        p.bin = ejector;
        p.ejected_at = t;
        log_.push_back(PlantRecord{t, "P" + std::to_string(p.id), "ejected", "SB" + std::to_string(ejector)});
        return best;
    }

    double Plant::pressure_at(Time dt, double leak) const
    {
        const double seconds = dt.ms() / 1000.0;
        return config_.pressure.k2 * std::exp(config_.pressure.k1 * leak * seconds);
    }

    void Plant::dispatch(const SensorEvent& e, Kernel& kernel, Middleware& mw)
    {
        (void)kernel;
        switch (e.kind)
        {
        case SensorKind::pulse:
        case SensorKind::bounce:
            log_.push_back(PlantRecord{e.time, "-", e.kind == SensorKind::pulse ? "pulse" : "bounce", ""});
            mw.publish("pulse", "plant", {});
            return;
        default:
            break;
        }
        WorkPiece& p = pieces_.at(static_cast<std::size_t>(e.piece));
        if (p.status != PieceStatus::on_belt)
        {
            return;
        }
        const std::string name = "P" + std::to_string(p.id);
        switch (e.kind)
        {
        case SensorKind::barrier:
            log_.push_back(PlantRecord{e.time, name, "ls" + std::to_string(e.index), colour_name(p.colour)});
            mw.publish("barrier", "plant", {{"barrier", static_cast<std::int64_t>(e.index)}});
            break;
        case SensorKind::colour:
            mw.publish("reading", "plant", {{"value", read_colour(p.id, e.time)}});
            break;
        case SensorKind::belt_end:
            p.status = PieceStatus::missed;
            log_.push_back(PlantRecord{e.time, name, "missed", colour_name(p.colour)});
            break;
        default:
            break;
        }
    }

    void Plant::open_valve(int ejector, Time t, Kernel& kernel, Middleware& mw)
    {
        const auto& pc = config_.pressure;
        double leak = 1.0;
        if (platform_ != nullptr && platform_->has_target(config_.air_id))
        {
            const auto& st = platform_->status(config_.air_id);
            if (st.health == Health::degraded)
            {
                leak = st.slowdown.to_double();
            }
        }
        log_.push_back(PlantRecord{t, "-", "valve_open", "E" + std::to_string(ejector)});
        mw.publish("valveOpen", "plant", {{"pressure", pressure_at(Time::zero(), leak)}});
        const std::int64_t samples = pc.window.ticks() / pc.sample_period.ticks();
        for (std::int64_t k = 1; k <= samples; ++k)
        {
            const Time dt = pc.sample_period * k;
            kernel.schedule(t + dt, "plant", "pressure", "", [this, &mw, dt, leak] {
                mw.publish("pressure", "plant", {{"pressure", pressure_at(dt, leak)}});
            });
        }
        kernel.schedule(t + pc.window, "plant", "valve_close", "", [this, &mw, &kernel, ejector] {
            valve_busy_until_.reset();
            log_.push_back(PlantRecord{kernel.now(), "-", "valve_close", "E" + std::to_string(ejector)});
            mw.publish("valveClose", "plant", {});
        });
        valve_busy_until_ = t + pc.window;
    }

    void Plant::schedule_step(Kernel& kernel, Middleware& mw, Time at)
    {
        kernel.schedule(at, "plant", "step", "", [this, &kernel, &mw, at] {
            for (const auto& e : step_plant(at + config_.geometry.step_period - now_))
            {
                const std::string kind = e.kind == SensorKind::pulse    ? "pulse"
                                         : e.kind == SensorKind::bounce ? "bounce"
                                         : e.kind == SensorKind::colour ? "colour"
                                         : e.kind == SensorKind::barrier ? "barrier"
                                                                         : "belt_end";
                kernel.schedule(e.time, "plant", kind, "", [this, e, &kernel, &mw] { dispatch(e, kernel, mw); });
            }
            schedule_step(kernel, mw, at + config_.geometry.step_period);
        });
    }

    void Plant::attach(Kernel& kernel, Middleware& mw)
    {
        for (const char* topic : {"pulse", "barrier", "reading", "pressure", "valveOpen", "valveClose"})
        {
            if (!mw.has_topic(topic))
            {
                mw.add_topic(TopicSpec{topic, "", {}});
            }
        }
        for (std::size_t e = 1; e <= config_.geometry.ejectors.size(); ++e)
        {
            const std::string topic = "eject/E" + std::to_string(e);
            if (!mw.has_topic(topic))
            {
                mw.add_topic(TopicSpec{topic, "", {}});
            }
            const int idx = static_cast<int>(e);
            mw.subscribe(topic, "plant", [this, idx, &kernel, &mw](const Message&) {
                const Time t = kernel.now();
                if (eject(idx, t) && config_.pressure.enabled && (!valve_busy_until_ || *valve_busy_until_ <= t))
                {
                    open_valve(idx, t, kernel, mw);
                }
            });
        }
        now_ = kernel.now();
        next_pulse_ = (now_.ticks() + config_.geometry.step_period.ticks() - 1) / config_.geometry.step_period.ticks();
        schedule_step(kernel, mw, now_);
    }
} // namespace rcps
