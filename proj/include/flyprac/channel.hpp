#pragma once

#include <cstdint>
#include <span>

#include "flyprac/errors.hpp"
#include "flyprac/rng.hpp"

namespace flyprac {

/// Binary symmetric channel over the protected region of a frame.
struct ChannelConfig {
    double epsilon = 0.0;   // bit error rate
    std::uint64_t seed = 0;

    void validate() const {
        if (!(epsilon >= 0.0 && epsilon <= 1.0))
            throw ConfigError("epsilon must lie in [0, 1]");
    }
};

/// Flip each bit in [first_bit, first_bit + bit_count) independently with
/// probability epsilon. Uses geometric gap sampling, so cost scales with the
/// number of flips rather than the number of bits.
void corrupt_bits(std::span<std::uint8_t> frame, std::size_t first_bit,
                  std::size_t bit_count, double epsilon, Rng& rng);

/// One noisy link. Per-packet noise streams are derived from
/// (seed, packet_index), so two runs that transmit the same packet index see
/// identical noise regardless of what happened in between.
class Channel {
public:
    explicit Channel(ChannelConfig cfg) : cfg_(cfg) { cfg_.validate(); }

    void transmit(std::span<std::uint8_t> frame, std::size_t protected_first_bit,
                  std::size_t protected_bit_count) {
        Rng rng(Rng::derive(cfg_.seed, packet_index_++));
        corrupt_bits(frame, protected_first_bit, protected_bit_count, cfg_.epsilon, rng);
    }

    const ChannelConfig& config() const { return cfg_; }

private:
    ChannelConfig cfg_;
    std::uint64_t packet_index_ = 0;
};

}  // namespace flyprac
