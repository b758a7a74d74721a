#pragma once

#include <cstdint>
#include <string_view>

namespace mfvdm {

/// Counter-based generator: output n is a SplitMix64 finalizer applied to
/// key + n * golden-gamma. Streams are keyed by (seed, name, index) so any
/// index range can be generated independently of the others.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    /// Stream for a named purpose derived from a base seed.
    static CounterRng stream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound);
    /// Standard normal (Box-Muller, one draw per call).
    double normal();

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_name(std::string_view name);

}  // namespace mfvdm
