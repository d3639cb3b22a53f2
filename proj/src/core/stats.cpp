#include "dedmon/core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dedmon::stats {

double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sample_std(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double median_inplace(std::vector<double>& scratch) {
    if (scratch.empty()) throw std::invalid_argument("median of empty sequence");
    const std::size_t n = scratch.size();
    const std::size_t mid = n / 2;
    std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(mid), scratch.end());
    const double upper = scratch[mid];
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double median(std::span<const double> x) {
    std::vector<double> scratch(x.begin(), x.end());
    return median_inplace(scratch);
}

double quantile(std::span<const double> x, double q) {
    if (x.empty()) throw std::invalid_argument("quantile of empty sequence");
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, s.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return s[lo] + frac * (s[hi] - s[lo]);
}

}  // namespace dedmon::stats
