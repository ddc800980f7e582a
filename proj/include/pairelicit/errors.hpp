#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pairelicit {

// Input text could not be parsed. `line` is 1-based.
struct ParseError : std::runtime_error {
    ParseError(std::size_t line_, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
    std::size_t line;
};

// Raised by estimators and assignment rules that divide by (2*prior_pos - 1).
struct BalancedPriorError : std::domain_error {
    using std::domain_error::domain_error;
};

// SGD produced a non-finite objective. `epoch` is the first epoch where it was seen.
struct DivergenceError : std::runtime_error {
    DivergenceError(std::size_t epoch_, const std::string& what_)
        : std::runtime_error(what_ + " (epoch " + std::to_string(epoch_) + ")"), epoch(epoch_) {}
    std::size_t epoch;
};

}  // namespace pairelicit
