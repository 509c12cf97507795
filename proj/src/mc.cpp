#include "flyprac/mc.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "flyprac/rng.hpp"

namespace flyprac::mc {

namespace {

/// Visit flip positions of an n-bit Bernoulli(epsilon) pattern.
template <typename Fn>
void for_each_flip(std::size_t n_bits, double epsilon, Rng& rng, Fn&& fn) {
    if (epsilon <= 0.0) return;
    if (epsilon >= 1.0) {
        for (std::size_t i = 0; i < n_bits; ++i) fn(i);
        return;
    }
    const double denom = std::log1p(-epsilon);
    std::size_t pos = static_cast<std::size_t>(std::log(rng.next_double_open()) / denom);
    while (pos < n_bits) {
        fn(pos);
        pos += 1 + static_cast<std::size_t>(std::log(rng.next_double_open()) / denom);
    }
}

}  // namespace

double column_false_positive_rate(double epsilon, unsigned R, unsigned b,
                                  std::uint64_t columns, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n_bits = static_cast<std::size_t>(R) * b;
    std::uint64_t events = 0;
    std::vector<unsigned> parity(b);
    for (std::uint64_t c = 0; c < columns; ++c) {
        std::fill(parity.begin(), parity.end(), 0u);
        bool any = false;
        for_each_flip(n_bits, epsilon, rng, [&](std::size_t pos) {
            parity[pos % b] ^= 1u;
            any = true;
        });
        if (!any) continue;
        bool cancelled = std::all_of(parity.begin(), parity.end(),
                                     [](unsigned v) { return v == 0; });
        if (cancelled) ++events;
    }
    return static_cast<double>(events) / static_cast<double>(columns);
}

double symbol_ok_rate(double epsilon, unsigned b, std::uint64_t symbols,
                      std::uint64_t seed) {
    Rng rng(seed);
    // One long bit stream of `symbols * b` bits, counting untouched symbols.
    std::uint64_t corrupted = 0;
    std::uint64_t hit_symbol = UINT64_MAX;
    for_each_flip(static_cast<std::size_t>(symbols) * b, epsilon, rng,
                  [&](std::size_t pos) {
                      std::uint64_t sym = pos / b;
                      if (sym != hit_symbol) {
                          ++corrupted;
                          hit_symbol = sym;
                      }
                  });
    return static_cast<double>(symbols - corrupted) / static_cast<double>(symbols);
}

double estimation_no_failure_rate(double epsilon, unsigned R, unsigned b, unsigned l,
                                  std::uint64_t groups, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t bits_per_group = static_cast<std::size_t>(R) * l * b;
    std::vector<std::uint8_t> mix(l);       // XOR of error patterns per column
    std::vector<std::uint8_t> touched(l);   // ground truth: column had an error
    std::uint64_t ok = 0;
    for (std::uint64_t gi = 0; gi < groups; ++gi) {
        std::fill(mix.begin(), mix.end(), 0);
        std::fill(touched.begin(), touched.end(), 0);
        for_each_flip(bits_per_group, epsilon, rng, [&](std::size_t pos) {
            // Row-major: row, then column, then bit within symbol.
            std::size_t col = (pos / b) % l;
            unsigned bit = static_cast<unsigned>(pos % b);
            mix[col] ^= static_cast<std::uint8_t>(1u << bit);
            touched[col] = 1;
        });
        bool covered = true;
        for (unsigned c = 0; c < l && covered; ++c)
            if (touched[c] && mix[c] == 0) covered = false;
        if (covered) ++ok;
    }
    return static_cast<double>(ok) / static_cast<double>(groups);
}

double undetected_rate(unsigned n_p, double epsilon, const crc::CrcSpec& spec,
                       std::uint64_t segments, std::uint64_t seed) {
    crc::Crc8 crc(spec);
    Rng rng(seed);
    const unsigned data_bits = n_p - 8;
    std::uint64_t undetected = 0;
    for (std::uint64_t t = 0; t < segments; ++t) {
        std::uint8_t data_syndrome = 0;  // crc of the data error pattern
        std::uint8_t crc_error = 0;
        bool any = false;
        for_each_flip(n_p, epsilon, rng, [&](std::size_t pos) {
            any = true;
            if (pos < data_bits) {
                data_syndrome ^= crc.single_bit(pos, data_bits);
            } else {
                crc_error ^= static_cast<std::uint8_t>(0x80u >> (pos - data_bits));
            }
        });
        if (any && data_syndrome == crc_error) ++undetected;
    }
    return static_cast<double>(undetected) / static_cast<double>(segments);
}

double segment_recovery_rate(unsigned n_p, double epsilon, const crc::CrcSpec& spec,
                             const RecoveryConfig& rcfg, std::uint64_t trials,
                             std::uint64_t seed) {
    crc::Crc8 crc(spec);
    Rng rng(seed);
    const unsigned data_bits = n_p - 8;
    std::uint64_t successes = 0;

    std::vector<std::uint8_t> truth(data_bits);
    std::vector<std::uint8_t> received(data_bits);
    std::vector<std::uint32_t> suspects;
    for (std::uint64_t t = 0; t < trials; ++t) {
        for (auto& v : truth) v = static_cast<std::uint8_t>(rng.next() & 1u);
        std::uint8_t true_crc = crc.of_symbols(truth, 1);
        received = truth;
        std::uint8_t received_crc = true_crc;
        suspects.clear();
        for_each_flip(n_p, epsilon, rng, [&](std::size_t pos) {
            if (pos < data_bits) {
                received[pos] ^= 1u;
                suspects.push_back(static_cast<std::uint32_t>(pos));
            } else {
                received_crc ^= static_cast<std::uint8_t>(0x80u >> (pos - data_bits));
            }
        });
        if (suspects.empty() && received_crc == true_crc) {
            ++successes;  // clean arrival
            continue;
        }
        if (crc.of_symbols(received, 1) == received_crc) continue;  // undetected: wrong data kept
        SegmentFix fix = search_segment(received, received_crc, suspects, 1, spec, rcfg);
        if (fix.status == SegmentFix::Status::recovered && fix.symbols == truth)
            ++successes;
    }
    return static_cast<double>(successes) / static_cast<double>(trials);
}

}  // namespace flyprac::mc
