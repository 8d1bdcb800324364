#pragma once

#include "rcps/contract.hpp"
#include "rcps/kernel.hpp"
#include "rcps/middleware.hpp"
#include "rcps/platform.hpp"
#include "rcps/time.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcps
{
    class PlantError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class Colour
    {
        red,
        blue,
        white
    };

    std::string colour_name(Colour c);
    Colour parse_colour(const std::string& s);
    /// Closed reading interval of a colour class.
    Interval colour_interval(Colour c);
    /// 1-based bin (and ejector) index: red 1, blue 2, white 3.
    int colour_bin(Colour c);

    /// Belt layout in conveyor steps, measured from light barrier LS0.
    struct PlantGeometry
    {
        Time step_period = Time::from_ms_ratio(150, 1);
        std::int64_t colour_sensor = 7;
        /// Ejector positions E1, E2, E3; light barriers LS1..LS3 sit at the same places.
        std::vector<std::int64_t> ejectors{25, 35, 43};
        std::int64_t belt_end = 50;
        /// A piece is pushed when it is within this many steps of the ejector.
        double ejector_window = 0.5;
        Time end_to_end_deadline = Time::from_ms_ratio(4000, 1);

        void validate() const;
        /// Steps between the colour sensor and each ejector.
        [[nodiscard]] std::vector<std::int64_t> trigger_offsets() const;
    };

    struct PieceSpec
    {
        Colour colour = Colour::red;
        /// Time the piece's leading edge crosses LS0; negative for pieces already on the belt.
        Time ls0_at;
    };

    /// Mechanical bounce on the encoder: after a real edge, with the given probability,
    /// a burst of 1..max_edges spurious edges at uniform offsets in (0, window].
    struct BounceConfig
    {
        double probability = 0.0;
        Time window;
        int max_edges = 1;
    };

    /// Air pressure seen by the pressure monitor while an ejector's valve is open:
    /// p(t) = k2 * exp(k1 * leak * t) with leak the AIR target's slowdown factor.
    struct PressureConfig
    {
        bool enabled = false;
        double k1 = -0.5;
        double k2 = 100.0;
        Time window = Time::from_ms_ratio(300, 1);
        Time sample_period = Time::from_ms_ratio(10, 1);
    };

    struct PlantConfig
    {
        PlantGeometry geometry;
        std::vector<PieceSpec> pieces;
        BounceConfig bounce;
        PressureConfig pressure;
        /// Platform sensor targets for faults.
        std::string colour_sensor_id = "CS";
        std::string air_id = "AIR";
    };

    enum class PieceStatus
    {
        on_belt,
        ejected,
        missed
    };

    struct WorkPiece
    {
        std::size_t id = 0;
        Colour colour = Colour::red;
        Time ls0_at;
        PieceStatus status = PieceStatus::on_belt;
        /// Bin the piece landed in (1..3) once ejected.
        int bin = 0;
        std::optional<Time> ejected_at;
        std::optional<double> reading;

        [[nodiscard]] double position(Time t, Time step_period) const;
        [[nodiscard]] int expected_bin() const { return colour_bin(colour); }
    };

    enum class SensorKind
    {
        pulse,
        bounce,
        barrier,
        colour,
        belt_end
    };

    struct SensorEvent
    {
        Time time;
        SensorKind kind = SensorKind::pulse;
        /// Piece index, or -1 for encoder edges.
        std::int64_t piece = -1;
        /// Barrier index (0 = LS0) for barrier events.
        int index = 0;
        /// Position along the belt in steps; orders same-tick events.
        double position = 0.0;
    };

    /// Plant log line: `tick,piece,event,detail`.
    struct PlantRecord
    {
        Time time;
        std::string piece;
        std::string event;
        std::string detail;
        [[nodiscard]] std::string to_line() const;
    };

    /// Constant-speed conveyor with pieces, sensors and ejectors.
    class Plant
    {
    public:
        explicit Plant(PlantConfig config, Rng* rng = nullptr, const Platform* platform = nullptr);

        /// Advances the plant clock by dt and returns the sensor events in
        /// [now, now + dt) in time order, same-tick events in belt order.
        std::vector<SensorEvent> step_plant(Time dt);

        /// Colour reading for a piece at time t: uniform in its class interval unless the
        /// colour sensor has a stuck-value fault.
        double read_colour(std::size_t piece, Time t);

        /// Pushes the piece within the window of ejector `ejector` (1-based) at time t.
        /// Returns the piece index, or nullopt when nothing was in front of the ejector.
        std::optional<std::size_t> eject(int ejector, Time t);

        /// Drives the plant from the kernel: publishes encoder edges on `pulse`, barrier
        /// crossings on `barrier`, colour readings on `reading`, pressure on `pressure`
        /// with `valveOpen`/`valveClose`, and listens on `eject/E<i>`.
        void attach(Kernel& kernel, Middleware& middleware);

        [[nodiscard]] const PlantConfig& config() const noexcept { return config_; }
        [[nodiscard]] const std::vector<WorkPiece>& pieces() const noexcept { return pieces_; }
        [[nodiscard]] const std::vector<PlantRecord>& log() const noexcept { return log_; }
        [[nodiscard]] std::size_t true_steps() const noexcept { return true_steps_; }
        [[nodiscard]] Time now() const noexcept { return now_; }
        /// Pressure at offset dt into a valve window opened with the given leak factor.
        [[nodiscard]] double pressure_at(Time dt, double leak) const;

    private:
        void dispatch(const SensorEvent& e, Kernel& kernel, Middleware& mw);
        void open_valve(int ejector, Time t, Kernel& kernel, Middleware& mw);
        void schedule_step(Kernel& kernel, Middleware& mw, Time at);

        PlantConfig config_;
        Rng* rng_;
        const Platform* platform_;
        std::vector<WorkPiece> pieces_;
        std::vector<PlantRecord> log_;
        Time now_;
        std::int64_t next_pulse_ = 0;
        std::size_t true_steps_ = 0;
        std::optional<Time> valve_busy_until_;
    };
} // namespace rcps
