#pragma once

#include <stdexcept>
#include <string>

namespace flyprac {

/// Invalid or inconsistent configuration values.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed serialized frame (wrong size for the configuration).
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Multiplicative inverse of zero requested.
struct ZeroInverseError : std::domain_error {
    ZeroInverseError() : std::domain_error("zero has no multiplicative inverse") {}
};

/// Decoding requested with fewer than g linearly independent packets.
struct RankDeficientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Elimination over a dependent group produced no zero-coefficient row.
/// Cannot happen for a well-formed group; signals corrupted coefficients upstream.
struct NoDependentRowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Recoding requested from an empty buffer.
struct EmptyBufferError : std::runtime_error {
    EmptyBufferError() : std::runtime_error("cannot recode from an empty buffer") {}
};

}  // namespace flyprac
