#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace levysde {

/// Finalizer of SplitMix64; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// What a substream is used for. Distinct purposes never share draws.
enum class StreamPurpose : std::uint64_t {
    Jumps = 1,
    Brownian = 2,
    Initial = 3,
    Verifier = 4,
    Test = 5,
};

/// Counter-based random stream: the n-th output is mix64(key + n * gamma).
///
/// A stream is fully determined by its key, so substreams for any
/// (seed, purpose, path, ...) tuple can be created in any order, on any thread,
/// and replayed bit-exactly. Satisfies std::uniform_random_bit_generator.
class CounterStream {
public:
    using result_type = std::uint64_t;

    constexpr explicit CounterStream(std::uint64_t key) noexcept : key_(mix64(key)) {}

    /// Substream keyed by a root seed plus an arbitrary list of labels.
    static constexpr CounterStream derive(std::uint64_t seed, StreamPurpose purpose,
                                          std::initializer_list<std::uint64_t> labels = {}) noexcept {
        std::uint64_t k = mix64(seed ^ 0x6A09E667F3BCC909ULL);
        k = mix64(k ^ static_cast<std::uint64_t>(purpose));
        for (std::uint64_t label : labels) k = mix64(k ^ mix64(label + 0x3C6EF372FE94F82BULL));
        return CounterStream(k);
    }

    /// Independent child stream keyed by this stream's key and the labels;
    /// does not consume draws from this stream.
    constexpr CounterStream child(std::initializer_list<std::uint64_t> labels) const noexcept {
        std::uint64_t k = key_;
        for (std::uint64_t label : labels) k = mix64(k ^ mix64(label + 0x3C6EF372FE94F82BULL));
        return CounterStream(k);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        ++counter_;
        return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    constexpr std::uint64_t key() const noexcept { return key_; }
    constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace levysde
