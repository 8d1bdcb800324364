#pragma once

#include "rcps/ecc.hpp"
#include "rcps/time.hpp"

#include <memory>
#include <string>
#include <vector>

namespace rcps
{
    struct AlgContext
    {
        Time now;
        const std::string& event;
        Vars& vars;
    };

    /// Built-in algorithm kernel. Returns true when the action's events should be emitted.
    class Algorithm
    {
    public:
        virtual ~Algorithm() = default;
        virtual bool run(AlgContext& ctx) = 0;
        [[nodiscard]] virtual std::unique_ptr<Algorithm> clone() const = 0;
    };

    /// Kernels: init, debounce, counter, pass_through, classify, threshold_trigger.
    /// Throws ComponentError for unknown kernels or malformed parameters.
    std::unique_ptr<Algorithm> make_algorithm(const AlgorithmRef& ref);

    [[nodiscard]] std::vector<std::string> algorithm_kernels();

    /// "true"/"false", integer literal, or real literal.
    Value parse_value(const std::string& text);
} // namespace rcps
