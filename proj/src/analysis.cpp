#include "flyprac/analysis.hpp"

#include <cmath>

#include "flyprac/errors.hpp"

namespace flyprac::analysis {

namespace {

long double log_choose(unsigned n, unsigned k) {
    if (k > n) return -INFINITY;
    return std::lgamma(n + 1.0L) - std::lgamma(k + 1.0L) - std::lgamma(n - k + 1.0L);
}

long double choose(unsigned n, unsigned k) {
    if (k > n) return 0.0L;
    return std::exp(log_choose(n, k));
}

void check_epsilon(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw ConfigError("epsilon must lie in [0, 1]");
}

}  // namespace

double p_symbol_ok(double epsilon, unsigned b) {
    check_epsilon(epsilon);
    return static_cast<double>(std::pow(1.0L - epsilon, b));
}

double p_column_ok(double epsilon, unsigned b, unsigned R) {
    check_epsilon(epsilon);
    return static_cast<double>(std::pow(1.0L - epsilon, static_cast<long double>(b) * R));
}

double expected_inconsistent_columns_closed(double epsilon, unsigned b, unsigned R,
                                            unsigned l) {
    return l * (1.0 - p_column_ok(epsilon, b, R));
}

double expected_inconsistent_columns(double epsilon, unsigned b, unsigned R, unsigned l) {
    long double p = std::pow(1.0L - epsilon, static_cast<long double>(b) * R);
    if (p >= 1.0L) return 0.0;
    long double log_p = std::log(p);
    long double log_q = std::log1p(-p);
    long double sum = 0.0L;
    for (unsigned i = 1; i <= l; ++i) {
        long double log_term = log_choose(l, i) + (l - i) * log_p + i * log_q;
        sum += i * std::exp(log_term);
    }
    return static_cast<double>(sum);
}

double p_even(double epsilon, unsigned R) {
    check_epsilon(epsilon);
    if (epsilon == 0.0) return 0.0;
    long double le = std::log(static_cast<long double>(epsilon));
    long double l1e = (epsilon < 1.0) ? std::log1p(-static_cast<long double>(epsilon))
                                      : -INFINITY;
    long double sum = 0.0L;
    for (unsigned i = 1; 2 * i <= R; ++i) {
        long double log_term = log_choose(R, 2 * i) + 2.0L * i * le;
        if (R > 2 * i) {
            if (epsilon >= 1.0) continue;
            log_term += (R - 2 * i) * l1e;
        }
        sum += std::exp(log_term);
    }
    return static_cast<double>(sum);
}

double p_zero(double epsilon, unsigned R) {
    check_epsilon(epsilon);
    return static_cast<double>(std::pow(1.0L - epsilon, R));
}

double p_fpe_round(double epsilon, unsigned R, unsigned b) {
    long double even = p_even(epsilon, R);
    long double zero = p_zero(epsilon, R);
    long double sum = 0.0L;
    for (unsigned i = 1; i <= b; ++i)
        sum += choose(b, i) * std::pow(even, i) * std::pow(zero, b - i);
    return static_cast<double>(sum);
}

double p_no_estimation_failure(double epsilon, unsigned R, unsigned b, unsigned l) {
    return static_cast<double>(
        std::pow(1.0L - static_cast<long double>(p_fpe_round(epsilon, R, b)), l));
}

double p_undetected(unsigned n_p, double epsilon, const crc::CrcSpec& spec) {
    check_epsilon(epsilon);
    auto wd = crc::weight_distribution(n_p, spec);
    if (epsilon == 0.0) return 0.0;
    long double le = std::log(static_cast<long double>(epsilon));
    long double l1e = (epsilon < 1.0) ? std::log1p(-static_cast<long double>(epsilon))
                                      : -INFINITY;
    long double sum = 0.0L;
    for (unsigned i = 1; i <= n_p; ++i) {
        if (wd.counts[i] == 0) continue;
        long double log_term = i * le;
        if (n_p > i) {
            if (epsilon >= 1.0) continue;
            log_term += (n_p - i) * l1e;
        }
        sum += wd.counts[i] * std::exp(log_term);
    }
    if (epsilon >= 1.0 && wd.counts[n_p] > 0) sum = wd.counts[n_p];
    return static_cast<double>(sum);
}

namespace {

/// log of the per-trial survival product over j: each trial tests a pattern
/// whose distance from the true data is a1 + a2 - 2j, and there are
/// C(a2, j) * C(n_p - a2, a2 - j) such trials.
long double log_survival_product(unsigned n_p, unsigned a1, unsigned a2, unsigned j_hi,
                                 const crc::WeightDistribution& wd) {
    unsigned j_min = (a1 + a2 > n_p) ? (a1 + a2 - n_p) : 0;
    long double log_prod = 0.0L;
    for (unsigned j = j_min; j <= j_hi; ++j) {
        unsigned h_d = a1 + a2 - 2 * j;
        if (h_d > n_p) continue;
        long double valid = (h_d <= wd.codeword_length)
                                ? static_cast<long double>(wd.counts[h_d]) / choose(n_p, h_d)
                                : 0.0L;
        if (valid <= 0.0L) continue;
        long double trials = choose(a2, j) * choose(n_p - a2, a2 - j);
        if (valid >= 1.0L) return -INFINITY;
        log_prod += trials * std::log1p(-valid);
    }
    return log_prod;
}

double reading_value(long double log_prod, NqReading reading) {
    long double prod = std::exp(log_prod);
    return static_cast<double>(reading == NqReading::product ? prod : 1.0L - prod);
}

}  // namespace

double p_nq(unsigned n_p, unsigned a1, unsigned a2, const crc::WeightDistribution& wd,
            NqReading reading) {
    return reading_value(log_survival_product(n_p, a1, a2, a2, wd), reading);
}

double p_eq(unsigned n_p, unsigned a1, const crc::WeightDistribution& wd,
            NqReading reading) {
    if (a1 == 0) return 1.0;
    return reading_value(log_survival_product(n_p, a1, a1, a1 - 1, wd), reading);
}

double p_successful_segment_recovery(unsigned n_p, double epsilon,
                                     const crc::CrcSpec& spec, NqReading reading,
                                     double tail_epsilon) {
    check_epsilon(epsilon);
    auto wd = crc::weight_distribution(n_p, spec);
    long double le = (epsilon > 0.0) ? std::log(static_cast<long double>(epsilon))
                                     : -INFINITY;
    long double l1e = (epsilon < 1.0) ? std::log1p(-static_cast<long double>(epsilon))
                                      : -INFINITY;
    long double sum = 0.0L;
    for (unsigned a1 = 0; a1 <= n_p; ++a1) {
        long double log_w = 0.0L;
        if (a1 > 0) {
            if (epsilon == 0.0) break;
            log_w += a1 * le;
        }
        if (n_p > a1) {
            if (epsilon >= 1.0) {
                if (a1 != n_p) continue;
            } else {
                log_w += (n_p - a1) * l1e;
            }
        }
        long double weight = std::exp(log_w);
        if (a1 > 0 && sum > 0.0L && weight < tail_epsilon * sum) break;

        long double factors = 1.0L;
        for (unsigned a2 = 0; a2 <= a1 && factors > 0.0L; ++a2) {
            double f;
            if (a2 == 0 && a1 == 0) {
                f = 1.0;
            } else if (a2 == a1) {
                f = p_eq(n_p, a1, wd, reading);
            } else {  // a2 < a1
                f = p_nq(n_p, a1, a2, wd, reading);
            }
            factors *= f;
        }
        sum += weight * factors;
    }
    return static_cast<double>(sum);
}

double p_fpc(unsigned n_p, double epsilon, const crc::CrcSpec& spec, NqReading reading) {
    return 1.0 - p_successful_segment_recovery(n_p, epsilon, spec, reading);
}

}  // namespace flyprac::analysis
