#include "flyprac/crc.hpp"

#include <bit>

namespace flyprac::crc {

Crc8::Crc8(CrcSpec spec) : spec_(spec) {
    for (unsigned b = 0; b < 256; ++b) {
        std::uint8_t state = static_cast<std::uint8_t>(b);
        for (int i = 0; i < 8; ++i) {
            state = (state & 0x80) ? static_cast<std::uint8_t>((state << 1) ^ spec_.divisor)
                                   : static_cast<std::uint8_t>(state << 1);
        }
        byte_table_[b] = state;
    }
}

std::uint8_t Crc8::of_symbols(std::span<const std::uint8_t> symbols, unsigned q) const {
    std::uint8_t state = spec_.initial_value;
    if (q == 8) {
        for (std::uint8_t s : symbols) state = step_byte(state, s);
    } else {
        for (std::uint8_t s : symbols) {
            for (unsigned bit = q; bit-- > 0;)
                state = step_bit(state, (s >> bit) & 1);
        }
    }
    return state;
}

std::uint8_t Crc8::x_pow(std::size_t k) const {
    if (k < 8) return static_cast<std::uint8_t>(1u << k);
    // Walk up from x^7, reducing one shift at a time.
    std::uint8_t state = 0x80;
    for (std::size_t i = 7; i < k; ++i) state = step_bit(state, false);
    return state;
}

std::uint8_t Crc8::single_bit(std::size_t bit_index, std::size_t message_bits) const {
    // Bit i of an n-bit message carries weight x^(n-1-i); the checksum is the
    // remainder of message(x) * x^8.
    return x_pow(message_bits - 1 - bit_index + 8);
}

WeightDistribution weight_distribution(unsigned n_p, CrcSpec spec) {
    if (n_p <= 8) throw ConfigError("codeword length must exceed the CRC width");
    if (n_p > 72) throw ConfigError("exact weight counts supported for N_p <= 72");
    const unsigned message_bits = n_p - 8;

    Crc8 crc(spec);
    // counts[state][w] = number of length-t prefixes with register `state`
    // and Hamming weight w.
    std::vector<std::array<std::uint64_t, 73>> cur(256), nxt(256);
    cur[0][0] = 1;
    for (unsigned t = 0; t < message_bits; ++t) {
        for (auto& row : nxt) row.fill(0);
        for (unsigned st = 0; st < 256; ++st) {
            for (unsigned w = 0; w <= t; ++w) {
                std::uint64_t c = cur[st][w];
                if (!c) continue;
                nxt[crc.step_bit(static_cast<std::uint8_t>(st), false)][w] += c;
                nxt[crc.step_bit(static_cast<std::uint8_t>(st), true)][w + 1] += c;
            }
        }
        std::swap(cur, nxt);
    }

    WeightDistribution out;
    out.codeword_length = n_p;
    out.counts.assign(n_p + 1, 0);
    for (unsigned st = 0; st < 256; ++st) {
        unsigned crc_weight = std::popcount(st);
        for (unsigned w = 0; w <= message_bits; ++w) {
            if (cur[st][w]) out.counts[w + crc_weight] += cur[st][w];
        }
    }
    return out;
}

}  // namespace flyprac::crc
