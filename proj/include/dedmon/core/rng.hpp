#pragma once

#include <cstdint>
#include <initializer_list>

namespace dedmon {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives a stream key from a seed and any number of identifiers, e.g.
/// (seed, class, row). Order matters.
constexpr std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) noexcept {
    std::uint64_t h = mix64(seed ^ 0x243f6a8885a308d3ULL);
    for (std::uint64_t id : ids) {
        h = mix64(h ^ mix64(id + 0x13198a2e03707344ULL));
    }
    return h;
}

/// Counter-based generator: the n-th draw is a pure function of (key, n), so
/// any partition of work over keys reproduces the serial sequence exactly.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

    std::uint64_t next_u64() noexcept { return mix64(key_ ^ mix64(counter_++)); }

    /// Uniform in [0, 1).
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1].
    double uniform_open_low() noexcept { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t index(std::uint64_t n) noexcept;

    /// Standard normal (Box-Muller, caches the second variate).
    double normal() noexcept;

    double exponential(double rate) noexcept;

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace dedmon
