#pragma once

#include <complex>
#include <span>
#include <vector>

namespace dedmon::signal {

enum class FilterKind { Highpass };

struct IirFilter {
    std::vector<double> b;  // feedforward, b[0..order]
    std::vector<double> a;  // feedback, a[0] == 1
    int order = 0;
    double cutoff_hz = 0.0;
    double sample_rate_hz = 0.0;
    FilterKind kind = FilterKind::Highpass;
};

/// Digital Butterworth high-pass: analog prototype, s -> wc/s, bilinear
/// transform with the cutoff pre-warped so |H(cutoff)| = 1/sqrt(2).
IirFilter design_butterworth_highpass(double cutoff_hz, int order, double sample_rate_hz);

/// Roots of the feedback polynomial a(z).
std::vector<std::complex<double>> filter_poles(const IirFilter& filter);

bool is_stable(const IirFilter& filter);

/// |H(exp(j 2 pi f / fs))| evaluated from the coefficients.
double magnitude_response(const IirFilter& filter, double frequency_hz);

/// Causal direct-form-II-transposed filtering with zero initial state.
std::vector<double> apply_iir(const IirFilter& filter, std::span<const double> samples);

}  // namespace dedmon::signal
