#include "dedmon/core/rng.hpp"

#include <cmath>
#include <numbers>

namespace dedmon {

std::uint64_t CounterRng::index(std::uint64_t n) noexcept {
    // Rejection keeps the draw exactly uniform.
    const std::uint64_t limit = ~0ULL - (~0ULL % n);
    std::uint64_t r;
    do {
        r = next_u64();
    } while (r >= limit);
    return r % n;
}

double CounterRng::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform_open_low();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

double CounterRng::exponential(double rate) noexcept { return -std::log(uniform_open_low()) / rate; }

}  // namespace dedmon
