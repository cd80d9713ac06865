#pragma once

#include <stdexcept>
#include <string>

namespace quint {

/// Base class for all quint errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed text input (edge lists, label files); message carries the line number.
struct ParseError : Error {
    using Error::Error;
};

/// Malformed binary input (sketch files); message names the offending field.
struct FormatError : Error {
    using Error::Error;
};

/// Invalid argument values: out-of-range ids, bad probabilities, dimension mismatches.
struct ParameterError : Error {
    using Error::Error;
};

/// Dense-oracle guard exceeded or an otherwise infeasible problem size.
struct SizeError : Error {
    using Error::Error;
};

}  // namespace quint
