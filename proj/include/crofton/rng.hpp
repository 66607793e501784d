#pragma once

#include <cstdint>

namespace crofton {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based stream: the state is a pure function of (seed, index), so the
/// i-th sample never depends on how many samples were drawn before it or on
/// which thread draws it.
class SampleStream {
public:
    SampleStream(std::uint64_t seed, std::uint64_t index)
        : state_(mix64(mix64(seed ^ 0x6A09E667F3BCC909ULL) ^ mix64(index + 0xBB67AE8584CAA73BULL))) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    // UniformRandomBitGenerator interface, for use with <random> distributions.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return next(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

/// Derives an independent seed for a labelled sub-stream (restarts, panels).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
    return mix64(seed * 0xD1B54A32D192ED03ULL + mix64(label + 0x243F6A8885A308D3ULL));
}

}  // namespace crofton
