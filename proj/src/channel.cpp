#include "flyprac/channel.hpp"

#include <cmath>

namespace flyprac {

void corrupt_bits(std::span<std::uint8_t> frame, std::size_t first_bit,
                  std::size_t bit_count, double epsilon, Rng& rng) {
    if (epsilon <= 0.0 || bit_count == 0) return;
    if (epsilon >= 1.0) {
        for (std::size_t i = 0; i < bit_count; ++i) {
            std::size_t bit = first_bit + i;
            frame[bit >> 3] ^= std::uint8_t(0x80u >> (bit & 7));
        }
        return;
    }
    const double denom = std::log1p(-epsilon);
    // Position of the next flip; gaps between flips are geometric.
    double u = rng.next_double_open();
    std::size_t pos = static_cast<std::size_t>(std::log(u) / denom);
    while (pos < bit_count) {
        std::size_t bit = first_bit + pos;
        frame[bit >> 3] ^= std::uint8_t(0x80u >> (bit & 7));
        u = rng.next_double_open();
        pos += 1 + static_cast<std::size_t>(std::log(u) / denom);
    }
}

}  // namespace flyprac
