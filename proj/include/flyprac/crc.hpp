#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "flyprac/errors.hpp"

namespace flyprac::crc {

/// 8-bit CRC parameters. `divisor` is the low byte of a degree-8 generator
/// with an implicit x^8 term. Zero init and zero final XOR keep the checksum
/// XOR-linear, which the false-positive analysis relies on; bits are
/// processed most-significant-first with no reflection.
struct CrcSpec {
    std::uint8_t divisor = 0xE7;

    static constexpr unsigned width = 8;
    static constexpr std::uint8_t initial_value = 0;
    static constexpr std::uint8_t final_xor = 0;

    bool operator==(const CrcSpec&) const = default;
};

/// Codeword weight histogram for (message || crc) blocks of `codeword_length`
/// bits: counts[w] = number of valid codewords of Hamming weight w.
struct WeightDistribution {
    unsigned codeword_length = 0;          // N_p, message bits + 8
    std::vector<std::uint64_t> counts;     // size codeword_length + 1
};

class Crc8 {
public:
    explicit Crc8(CrcSpec spec = {});

    const CrcSpec& spec() const { return spec_; }

    std::uint8_t step_bit(std::uint8_t state, bool bit) const {
        std::uint8_t top = static_cast<std::uint8_t>((state >> 7) ^ (bit ? 1 : 0));
        state = static_cast<std::uint8_t>(state << 1);
        return top ? static_cast<std::uint8_t>(state ^ spec_.divisor) : state;
    }

    std::uint8_t step_byte(std::uint8_t state, std::uint8_t byte) const {
        return byte_table_[state ^ byte];
    }

    /// Checksum over the low q bits of each symbol, most significant bit
    /// first. This matches the serialized bit order of a segment.
    std::uint8_t of_symbols(std::span<const std::uint8_t> symbols, unsigned q) const;

    bool verify(std::span<const std::uint8_t> symbols, unsigned q,
                std::uint8_t received) const {
        return of_symbols(symbols, q) == received;
    }

    /// Remainder contributed by a single set bit at `bit_index` within a
    /// message of `message_bits` bits (bit 0 transmitted first). By linearity
    /// crc(m ^ e_i) = crc(m) ^ single_bit(i, n), which makes correction
    /// trials O(pattern weight).
    std::uint8_t single_bit(std::size_t bit_index, std::size_t message_bits) const;

    /// Remainder of x^k modulo the generator.
    std::uint8_t x_pow(std::size_t k) const;

private:
    CrcSpec spec_;
    std::array<std::uint8_t, 256> byte_table_{};
};

/// Exact codeword weight histogram for N_p-bit codewords (N_p - 8 message
/// bits followed by their checksum). Dynamic programming over the 256 CRC
/// register states; counts are exact in uint64 for N_p <= 72.
WeightDistribution weight_distribution(unsigned n_p, CrcSpec spec = {});

}  // namespace flyprac::crc
