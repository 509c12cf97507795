#pragma once

#include <cstdint>

#include "flyprac/crc.hpp"
#include "flyprac/recovery.hpp"

namespace flyprac::mc {

/// Fraction of simulated columns whose error patterns cancel: at least one
/// of the R symbols is hit, yet every bit position is hit an even number of
/// times. Companion measurement to the closed-form round false-positive
/// probability.
double column_false_positive_rate(double epsilon, unsigned R, unsigned b,
                                  std::uint64_t columns, std::uint64_t seed);

/// Empirical symbol survival rate over `symbols` b-bit symbols.
double symbol_ok_rate(double epsilon, unsigned b, std::uint64_t symbols,
                      std::uint64_t seed);

/// Fraction of groups whose estimation covers every truly corrupted column:
/// R rows of l b-bit symbols are corrupted, the XOR mix is compared against
/// the ground-truth corruption map.
double estimation_no_failure_rate(double epsilon, unsigned R, unsigned b, unsigned l,
                                  std::uint64_t groups, std::uint64_t seed);

/// Fraction of corrupted (message || crc) blocks whose error pattern the
/// checksum fails to detect.
double undetected_rate(unsigned n_p, double epsilon, const crc::CrcSpec& spec,
                       std::uint64_t segments, std::uint64_t seed);

/// End-to-end segment recovery oracle: inject independent bit errors over an
/// n_p-bit segment (1-bit symbols plus checksum), hand the true corrupted
/// columns to the real correction search, and count exact restorations.
/// Error-free draws count as successes; errors touching checksum bits are
/// unrecoverable by construction and count as failures.
double segment_recovery_rate(unsigned n_p, double epsilon, const crc::CrcSpec& spec,
                             const RecoveryConfig& rcfg, std::uint64_t trials,
                             std::uint64_t seed);

}  // namespace flyprac::mc
