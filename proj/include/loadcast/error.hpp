#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace loadcast {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text: CSV rows, timestamps, holiday files. Messages carry
// source/line context where available.
struct ParseError : Error {
    using Error::Error;
};

// Shape or length mismatch between related containers.
struct DimensionError : Error {
    using Error::Error;
};

// Invalid configuration values: fractions, ranges, masks, candidate lists.
struct ConfigError : Error {
    using Error::Error;
};

// Data violating a contract: duplicate timestamps, unrepairable gaps,
// residual holes, partial aggregation periods.
struct DataError : Error {
    using Error::Error;
};

// Training produced a non-finite loss.
struct DivergenceError : Error {
    DivergenceError(const std::string& msg, std::size_t epoch_index)
        : Error(msg), epoch(epoch_index) {}
    std::size_t epoch;
};

}  // namespace loadcast
