#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace dedmon::signal {

/// One-sided magnitude spectrum of a real window: bins 0..N/2, unnormalized
/// (|X_k| of the plain forward DFT).
struct Spectrum {
    double bin_width_hz = 0.0;
    std::vector<double> magnitudes;
    std::size_t source_window_len = 0;

    double frequency(std::size_t bin) const { return bin_width_hz * static_cast<double>(bin); }
};

bool is_power_of_two(std::size_t n) noexcept;

/// Precomputed twiddles and bit-reversal table for an in-place iterative
/// radix-2 transform of length n.
class FftPlan {
public:
    explicit FftPlan(std::size_t n);

    std::size_t size() const noexcept { return n_; }

    /// Forward DFT, X_k = sum_j x_j exp(-2 pi i jk / n), in place.
    void forward(std::span<std::complex<double>> data) const;

private:
    std::size_t n_;
    std::vector<std::size_t> bitrev_;
    std::vector<std::complex<double>> twiddles_;
};

/// Full complex DFT of a real window. Throws InvalidInput unless the length
/// is a power of two.
std::vector<std::complex<double>> fft_complex(std::span<const double> window);

Spectrum fft(std::span<const double> window, double sample_rate_hz);

/// Spectra of two equal-length real windows from one complex transform.
std::pair<Spectrum, Spectrum> fft_pair(std::span<const double> a, std::span<const double> b, double sample_rate_hz);

}  // namespace dedmon::signal
