#pragma once

#include "rcps/contract.hpp"
#include "rcps/time.hpp"
#include "rcps/timed_automaton.hpp"

#include <memory>
#include <optional>
#include <string>

namespace rcps
{
    enum class VerdictStatus
    {
        ok,
        violated
    };

    struct Verdict
    {
        VerdictStatus status = VerdictStatus::ok;
        std::optional<ViolationKind> kind;
        /// Detection time; meaningful only when violated.
        Time at;

        [[nodiscard]] bool violated() const noexcept { return status == VerdictStatus::violated; }
        [[nodiscard]] std::string to_string() const;
        friend bool operator==(const Verdict&, const Verdict&) = default;
    };

    enum class ObsEventKind
    {
        sample,   ///< input sample arrived (timing) or value observed (data contracts)
        complete, ///< processing of the current sample finished
        start,    ///< start of a monitored window (envelope)
        stop      ///< end of a monitored window (envelope)
    };

    std::string obs_event_name(ObsEventKind k);

    struct ObservedEvent
    {
        ObsEventKind kind = ObsEventKind::sample;
        Sample values;
    };

    enum class ObserverModel
    {
        fsm,
        timed,
        hybrid
    };

    enum class Integrator
    {
        euler,
        rk4
    };

    struct SynthesisOptions
    {
        /// Tick resolution the observer's integer constants are expressed in.
        std::int64_t ticks_per_ms = Time::kTicksPerMs;
        /// Hybrid observers: integration step in ticks of the chosen resolution.
        std::int64_t hybrid_step_ticks = Time::kTicksPerMs / 10;
        Integrator integrator = Integrator::rk4;
    };

    /// Executable monitor for one contract.
    ///
    /// Verdicts are sticky: once violated, only reset() clears them. Times passed in are
    /// simulation times in standard ticks; an observer synthesized at a finer resolution
    /// rescales them internally.
    class Observer
    {
    public:
        Observer(std::string id, Contract contract);
        virtual ~Observer() = default;

        /// Closes time strictly before t, then processes the event at t.
        virtual Verdict step_event(const ObservedEvent& event, Time t) = 0;
        /// Closes time up to and including t.
        virtual Verdict advance_time(Time t) = 0;
        virtual void reset() = 0;
        [[nodiscard]] virtual std::unique_ptr<Observer> clone() const = 0;
        [[nodiscard]] virtual ObserverModel model() const noexcept = 0;
        /// `tick,observer_id,location,clock=value...,verdict`
        [[nodiscard]] virtual std::string dump(Time t) const = 0;
        /// Earliest time at which the verdict may change with no further events.
        [[nodiscard]] virtual std::optional<Time> next_deadline() const { return std::nullopt; }

        [[nodiscard]] const Verdict& verdict() const noexcept { return verdict_; }
        [[nodiscard]] const std::string& id() const noexcept { return id_; }
        [[nodiscard]] const Contract& contract() const noexcept { return contract_; }

    protected:
        void violate(ViolationKind kind, Time at);
        void clear_verdict() noexcept { verdict_ = Verdict{}; }
        [[nodiscard]] std::string verdict_field() const;

    private:
        std::string id_;
        Contract contract_;
        Verdict verdict_;
    };

    /// Two-location monitor for Bound and SetMembership contracts.
    class FsmObserver final : public Observer
    {
    public:
        FsmObserver(std::string id, Contract contract);

        Verdict step_event(const ObservedEvent& event, Time t) override;
        Verdict advance_time(Time t) override;
        void reset() override;
        [[nodiscard]] std::unique_ptr<Observer> clone() const override;
        [[nodiscard]] ObserverModel model() const noexcept override { return ObserverModel::fsm; }
        [[nodiscard]] std::string dump(Time t) const override;

        /// Result of the most recent sample: false when that reading broke the guarantee.
        [[nodiscard]] bool last_reading_ok() const noexcept { return last_ok_; }
        [[nodiscard]] bool last_assumption_violated() const noexcept { return last_assumption_violated_; }
        [[nodiscard]] std::size_t failed_readings() const noexcept { return failed_; }

    private:
        Time last_;
        bool last_ok_ = true;
        bool last_assumption_violated_ = false;
        std::size_t failed_ = 0;
    };

    /// Timing monitor: clock x measures the gap since the last sample, clock y the
    /// processing time of the sample in progress.
    ///
    /// Locations Init, Idle, Busy and the absorbing MissedSample and MissedDeadline.
    /// In Busy the deadline edge outranks the missed-sample edge.
    class TimedObserver final : public Observer
    {
    public:
        TimedObserver(std::string id, Contract contract, std::int64_t ticks_per_ms = Time::kTicksPerMs);

        Verdict step_event(const ObservedEvent& event, Time t) override;
        Verdict advance_time(Time t) override;
        void reset() override;
        [[nodiscard]] std::unique_ptr<Observer> clone() const override;
        [[nodiscard]] ObserverModel model() const noexcept override { return ObserverModel::timed; }
        [[nodiscard]] std::string dump(Time t) const override;
        [[nodiscard]] std::optional<Time> next_deadline() const override;

        [[nodiscard]] const TimedAutomaton& automaton() const noexcept { return ta_; }
        [[nodiscard]] std::string location_name() const { return ta_.location_info().name; }

    private:
        [[nodiscard]] Time to_local(Time t) const;
        [[nodiscard]] Time to_global_ceil(Time local) const;
        void absorb_location();

        std::int64_t tpm_;
        TimedAutomaton ta_;
    };

    /// Envelope monitor integrating dp_exp/dt = k1 * p_exp with a fixed step.
    ///
    /// Modes: idle until a `start` event, tracking while the window is open, and the
    /// absorbing violated mode. Observed values are held between samples. After each
    /// integration step the low-side condition is checked before the high-side one.
    class HybridObserver final : public Observer
    {
    public:
        HybridObserver(std::string id, Contract contract, SynthesisOptions options = {});

        Verdict step_event(const ObservedEvent& event, Time t) override;
        Verdict advance_time(Time t) override;
        void reset() override;
        [[nodiscard]] std::unique_ptr<Observer> clone() const override;
        [[nodiscard]] ObserverModel model() const noexcept override { return ObserverModel::hybrid; }
        [[nodiscard]] std::string dump(Time t) const override;

        [[nodiscard]] std::string mode_name() const;
        /// Integrated p_exp at the last completed step.
        [[nodiscard]] double expected() const noexcept { return p_exp_; }
        [[nodiscard]] std::optional<double> observed() const noexcept { return p_obs_; }
        /// Time of the last completed integration step.
        [[nodiscard]] Time step_time() const;
        [[nodiscard]] double step_seconds() const noexcept { return h_s_; }

    private:
        enum class Mode
        {
            idle,
            tracking,
            violated
        };

        void integrate_through(std::int64_t local_tick);
        [[nodiscard]] double flow_step(double p) const;

        EnvelopeGuarantee g_;
        SynthesisOptions options_;
        double h_s_;
        Mode mode_ = Mode::idle;
        std::int64_t origin_ = 0;      // local tick of the window start
        std::int64_t steps_done_ = 0;
        double p_exp_ = 0.0;
        std::optional<double> p_obs_;
        Time last_;
    };

    /// Builds the monitor that matches the contract's guarantee kind.
    std::unique_ptr<Observer> synthesize_observer(const Contract& contract, const SynthesisOptions& options = {});
    std::unique_ptr<Observer> synthesize_observer(const std::string& id, const Contract& contract,
                                                  const SynthesisOptions& options = {});
} // namespace rcps
