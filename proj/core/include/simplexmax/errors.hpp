#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace simplexmax {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid user-supplied data: malformed matrices, bad exponents, unknown
// flags. CLI maps this to exit code 2.
struct InvalidInputError : Error {
    using Error::Error;
};

// A search exceeded its node budget. Always a hard error, never silent
// truncation. CLI maps this to exit code 3.
struct BudgetExceededError : Error {
    std::uint64_t nodes_spent;
    BudgetExceededError(const std::string& what, std::uint64_t spent)
        : Error(what), nodes_spent(spent) {}
};

// A_lambda was requested for a lambda with N_{lambda Delta} = 0.
struct EmptyAverageError : Error {
    using Error::Error;
};

// Degenerate geometric configuration where a ratio form is undefined.
struct DegenerateConfigError : Error {
    using Error::Error;
};

} // namespace simplexmax
