#pragma once

#include "flyprac/crc.hpp"

namespace flyprac::analysis {

/// Probability that a b-bit symbol crosses the channel untouched.
double p_symbol_ok(double epsilon, unsigned b);

/// Probability that a column of R symbols is entirely error-free.
double p_column_ok(double epsilon, unsigned b, unsigned R);

/// Expected number of inconsistent columns among l, as the binomial sum.
double expected_inconsistent_columns(double epsilon, unsigned b, unsigned R, unsigned l);
/// Same quantity in closed form, l * (1 - p_column_ok).
double expected_inconsistent_columns_closed(double epsilon, unsigned b, unsigned R,
                                            unsigned l);

/// Probability that an even positive number of the R symbols flip in one bit
/// position.
double p_even(double epsilon, unsigned R);
/// Probability that a bit position is clean across all R symbols.
double p_zero(double epsilon, unsigned R);

/// Probability that a column's error patterns cancel: every bit position is
/// either clean or hit an even number of times, with at least one hit.
double p_fpe_round(double epsilon, unsigned R, unsigned b);

/// Probability that none of the l estimation rounds is falsely verified.
double p_no_estimation_failure(double epsilon, unsigned R, unsigned b, unsigned l);

/// Probability that a corrupted segment of n_p bits slips past its checksum:
/// the chance its error pattern lands on a nonzero valid codeword.
double p_undetected(unsigned n_p, double epsilon, const crc::CrcSpec& spec = {});

/// The no-false-positive factor per trial weight can be read two ways from
/// its defining text: as the product of per-trial survival probabilities, or
/// as one minus that product. Both are computed; `product` matches the
/// Monte-Carlo oracle and is the default everywhere else.
enum class NqReading { product, one_minus_product };

/// Probability of surviving all correction trials of weight a2 against an
/// error of weight a1 without a false positive (a2 < a1 case).
double p_nq(unsigned n_p, unsigned a1, unsigned a2, const crc::WeightDistribution& wd,
            NqReading reading);
/// Same for the a2 == a1 case, where the final trial is the true answer.
double p_eq(unsigned n_p, unsigned a1, const crc::WeightDistribution& wd,
            NqReading reading);

/// Probability of recovering a segment: no false positive fires before the
/// search reaches the true pattern. Outer sum over error weights is cut off
/// once the remaining terms fall below tail_epsilon relative to the
/// accumulated value.
double p_successful_segment_recovery(unsigned n_p, double epsilon,
                                     const crc::CrcSpec& spec = {},
                                     NqReading reading = NqReading::product,
                                     double tail_epsilon = 1e-15);

/// Probability of a false positive during correction trials; complement of
/// successful recovery.
double p_fpc(unsigned n_p, double epsilon, const crc::CrcSpec& spec = {},
             NqReading reading = NqReading::product);

}  // namespace flyprac::analysis
