#pragma once

#include "rcps/contract.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace rcps
{
    /// Syntax error with a 1-based source position.
    class ParseError : public ContractError
    {
    public:
        ParseError(int line, int column, const std::string& message);

        [[nodiscard]] int line() const noexcept { return line_; }
        [[nodiscard]] int column() const noexcept { return column_; }

    private:
        int line_;
        int column_;
    };

    /// Parses every `contract <id> { ... }` block in the text.
    ///
    /// Grammar (keywords are case-sensitive, `#` starts a comment):
    ///
    ///     contract   := "contract" IDENT "{" item* guarantee item* "}"
    ///     item       := ("input" | "output") IDENT ":" domain
    ///                 | "assume" IDENT "in" interval
    ///     domain     := "real" | "integer" | "boolean"
    ///     guarantee  := "guarantee" "timing" "every" NUM "ms" "within" NUM "ms"
    ///                 | "guarantee" "bound" IDENT "in" interval
    ///                 | "guarantee" "member" IDENT "in" interval ("|" interval)*
    ///                 | "guarantee" "envelope" IDENT "rate" NUM "init" NUM "tol" NUM
    ///     interval   := "[" NUM "," NUM "]"
    std::vector<Contract> parse_contracts(std::string_view text);

    /// Parses text that holds exactly one contract.
    Contract parse_contract(std::string_view text);
} // namespace rcps
