#pragma once

#include <cstdint>

namespace flyprac {

/// Counter-based 64-bit generator (SplitMix64). Each draw hashes an
/// incrementing counter, so streams can be derived for (trial, link, packet)
/// tuples and replayed independently of call interleaving. Fixed here so
/// simulation traces reproduce across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in (0, 1]; never returns 0 so it is safe under log().
    double next_double_open() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be nonzero.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    bool bernoulli(double p) { return next_double() < p; }

    /// Derive an independent stream seed from a key and up to three indices.
    static std::uint64_t derive(std::uint64_t key, std::uint64_t a, std::uint64_t b = 0,
                                std::uint64_t c = 0) {
        Rng h(key);
        std::uint64_t s = h.next() ^ mix(a);
        s = Rng(s).next() ^ mix(b ^ 0x6a09e667f3bcc909ull);
        s = Rng(s).next() ^ mix(c ^ 0xbb67ae8584caa73bull);
        return Rng(s).next();
    }

private:
    static std::uint64_t mix(std::uint64_t v) {
        v ^= v >> 33;
        v *= 0xff51afd7ed558ccdull;
        v ^= v >> 33;
        v *= 0xc4ceb9fe1a85ec53ull;
        return v ^ (v >> 33);
    }

    std::uint64_t state_;
};

}  // namespace flyprac
