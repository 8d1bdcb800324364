#pragma once

#include "rcps/timed_automaton.hpp"
#include "rcps/value.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcps
{
    class ComponentError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Instance variables, shared by every behaviour of a component.
    using Vars = std::map<std::string, Value>;

    /// `var op value`; a missing variable makes the guard false.
    struct DataGuard
    {
        std::string var;
        CmpOp op = CmpOp::eq;
        double value = 0.0;

        [[nodiscard]] bool eval(const Vars& vars) const;
    };

    struct AlgorithmRef
    {
        std::string kernel;
        std::map<std::string, std::string> params;
    };

    /// Runs an algorithm; its events are emitted only when the algorithm reports
    /// success, and a failed algorithm skips the rest of the state's actions.
    struct EccAction
    {
        AlgorithmRef algorithm;
        std::vector<std::string> emits;
    };

    struct EccState
    {
        std::string name;
        std::vector<EccAction> actions;
    };

    struct EccTransition
    {
        /// Source state, or "*" for any state.
        std::string src;
        std::string event;
        std::optional<DataGuard> guard;
        std::string dst;
        /// Larger value wins; ties go to declaration order.
        int priority = 0;
    };

    struct Ecc
    {
        std::string initial;
        std::vector<EccState> states;
        std::vector<EccTransition> transitions;

        [[nodiscard]] const EccState& state(const std::string& name) const;
        [[nodiscard]] bool has_state(const std::string& name) const;

        /// Highest-priority enabled transition, or nullptr.
        [[nodiscard]] const EccTransition* select(const std::string& current, const std::string& event,
                                                  const Vars& vars) const;

        /// Throws ComponentError on unknown states, events, or emitted outputs.
        void validate(const std::set<std::string>& inputs, const std::set<std::string>& outputs) const;
    };
} // namespace rcps
