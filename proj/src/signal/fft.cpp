#include "dedmon/signal/fft.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <unordered_map>

#include "dedmon/core/error.hpp"

namespace dedmon::signal {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

FftPlan::FftPlan(std::size_t n) : n_(n) {
    if (!is_power_of_two(n)) {
        raise(ErrorKind::InvalidInput, "FFT length " + std::to_string(n) + " is not a power of two");
    }
    bitrev_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b) {
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        }
        bitrev_[i] = r;
    }
    twiddles_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        twiddles_[k] = {std::cos(angle), std::sin(angle)};
    }
}

void FftPlan::forward(std::span<std::complex<double>> data) const {
    if (data.size() != n_) raise(ErrorKind::InvalidInput, "FFT buffer length does not match plan");
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j = bitrev_[i];
        if (i < j) std::swap(data[i], data[j]);
    }
    // Explicit real arithmetic; std::complex multiplication carries NaN
    // recovery branches that dominate small transforms.
    auto* d = reinterpret_cast<double*>(data.data());
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n_ / len;
        for (std::size_t start = 0; start < n_; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const std::complex<double> tw = twiddles_[k * stride];
                double* u = d + 2 * (start + k);
                double* v = d + 2 * (start + k + half);
                const double tr = tw.real() * v[0] - tw.imag() * v[1];
                const double ti = tw.real() * v[1] + tw.imag() * v[0];
                v[0] = u[0] - tr;
                v[1] = u[1] - ti;
                u[0] += tr;
                u[1] += ti;
            }
        }
    }
}

namespace {

const FftPlan& cached_plan(std::size_t n) {
    thread_local std::unordered_map<std::size_t, std::unique_ptr<FftPlan>> plans;
    auto& slot = plans[n];
    if (!slot) slot = std::make_unique<FftPlan>(n);
    return *slot;
}

}  // namespace

std::vector<std::complex<double>> fft_complex(std::span<const double> window) {
    if (!is_power_of_two(window.size())) {
        raise(ErrorKind::InvalidInput, "FFT length " + std::to_string(window.size()) + " is not a power of two");
    }
    std::vector<std::complex<double>> data(window.begin(), window.end());
    cached_plan(window.size()).forward(data);
    return data;
}

Spectrum fft(std::span<const double> window, double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0)) raise(ErrorKind::InvalidInput, "sample rate must be positive");
    const auto bins = fft_complex(window);
    const std::size_t n = window.size();
    Spectrum spectrum;
    spectrum.bin_width_hz = sample_rate_hz / static_cast<double>(n);
    spectrum.source_window_len = n;
    spectrum.magnitudes.resize(n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k) spectrum.magnitudes[k] = std::sqrt(std::norm(bins[k]));
    return spectrum;
}

std::pair<Spectrum, Spectrum> fft_pair(std::span<const double> a, std::span<const double> b, double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0)) raise(ErrorKind::InvalidInput, "sample rate must be positive");
    if (a.size() != b.size()) raise(ErrorKind::InvalidInput, "paired FFT windows differ in length");
    const std::size_t n = a.size();
    if (!is_power_of_two(n)) raise(ErrorKind::InvalidInput, "FFT length " + std::to_string(n) + " is not a power of two");
    thread_local std::vector<std::complex<double>> z;
    z.resize(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = {a[i], b[i]};
    cached_plan(n).forward(z);

    std::pair<Spectrum, Spectrum> out;
    for (Spectrum* s : {&out.first, &out.second}) {
        s->bin_width_hz = sample_rate_hz / static_cast<double>(n);
        s->source_window_len = n;
        s->magnitudes.resize(n / 2 + 1);
    }
    // With z = a + ib: A_k = (Z_k + conj Z_{n-k}) / 2, B_k = (Z_k - conj Z_{n-k}) / 2i.
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const std::complex<double> zk = z[k];
        const std::complex<double> zr = std::conj(z[(n - k) % n]);
        out.first.magnitudes[k] = 0.5 * std::sqrt(std::norm(zk + zr));
        out.second.magnitudes[k] = 0.5 * std::sqrt(std::norm(zk - zr));
    }
    return out;
}

}  // namespace dedmon::signal
