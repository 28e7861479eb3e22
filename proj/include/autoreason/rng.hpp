#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace autoreason {

// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        state_ += kGamma;
        return mix64(state_);
    }

private:
    std::uint64_t state_;
};

inline constexpr std::uint64_t kIterationMultiplier = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kRunMultiplier = 0xC2B2AE3D27D4EB4FULL;

// mix64(seed ^ iteration * kIterationMultiplier ^ run * kRunMultiplier), with
// 1-based iteration and run indices.
constexpr std::uint64_t derive_subseed(std::uint64_t seed, std::uint64_t iteration,
                                       std::uint64_t run) {
    return mix64(seed ^ (iteration * kIterationMultiplier) ^ (run * kRunMultiplier));
}

// Descending Fisher-Yates: for i = n-1 down to 1, j = rng.next() % (i + 1),
// swap(items[i], items[j]).
template <typename T>
std::vector<T> fisher_yates_shuffle(std::vector<T> items, SplitMix64& rng) {
    for (std::size_t i = items.size(); i-- > 1;) {
        const auto j = static_cast<std::size_t>(rng.next() % (i + 1));
        using std::swap;
        swap(items[i], items[j]);
    }
    return items;
}

}  // namespace autoreason
