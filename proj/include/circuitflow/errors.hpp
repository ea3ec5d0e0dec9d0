#pragma once

#include <stdexcept>
#include <string>

#include "circuitflow/ring.hpp"

namespace circuitflow {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A circuit violates a structural invariant (arity, ordering, outputs).
struct StructuralError : Error {
    using Error::Error;
};

// An operation was handed an input outside its contract.
struct ContractError : Error {
    using Error::Error;
};

// Work limit exceeded (term budget, enumeration limit). Carries the exact
// count that tripped the limit when it is known.
struct BudgetError : Error {
    BudgetError(const std::string& what, Int count_)
        : Error(what), count(std::move(count_)) {}
    Int count;
};

// Bad runtime configuration (prime, trials, parameters).
struct ConfigError : Error {
    using Error::Error;
};

// Text-format parse failure; cites the 1-based line.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t line_)
        : Error("line " + std::to_string(line_) + ": " + what), line(line_) {}
    std::size_t line;
};

// Random generation could not satisfy its caps.
struct GenerationError : Error {
    using Error::Error;
};

} // namespace circuitflow
