#include "dedmon/signal/iir.hpp"

#include <cmath>
#include <numbers>

#include "dedmon/core/error.hpp"

namespace dedmon::signal {
namespace {

using Complex = std::complex<double>;

// Coefficients (highest power of z^-1 last) of prod_k (1 - r_k z^-1).
std::vector<Complex> expand_roots(const std::vector<Complex>& roots) {
    std::vector<Complex> poly{1.0};
    for (const Complex& r : roots) {
        std::vector<Complex> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= r * poly[i];
        }
        poly = std::move(next);
    }
    return poly;
}

Complex evaluate(const std::vector<double>& coeffs, Complex z_inv) {
    Complex acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z_inv + *it;
    return acc;
}

}  // namespace

IirFilter design_butterworth_highpass(double cutoff_hz, int order, double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0)) raise(ErrorKind::InvalidInput, "sample rate must be positive");
    if (!(cutoff_hz > 0.0) || !(cutoff_hz < sample_rate_hz / 2.0)) {
        raise(ErrorKind::InvalidInput, "cutoff must lie strictly between 0 and Nyquist");
    }
    if (order < 1 || order > 8) raise(ErrorKind::InvalidInput, "filter order must be in 1..8");

    const double fs2 = 2.0 * sample_rate_hz;
    const double warped = fs2 * std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);

    std::vector<Complex> digital_poles;
    std::vector<Complex> digital_zeros(static_cast<std::size_t>(order), Complex{1.0, 0.0});
    for (int k = 1; k <= order; ++k) {
        const double theta = std::numbers::pi * (2.0 * k + order - 1) / (2.0 * order);
        const Complex prototype = std::polar(1.0, theta);
        const Complex analog = warped / prototype;
        digital_poles.push_back((fs2 + analog) / (fs2 - analog));
    }

    const auto a_complex = expand_roots(digital_poles);
    const auto b_complex = expand_roots(digital_zeros);

    IirFilter filter;
    filter.order = order;
    filter.cutoff_hz = cutoff_hz;
    filter.sample_rate_hz = sample_rate_hz;
    filter.kind = FilterKind::Highpass;
    for (const auto& c : a_complex) filter.a.push_back(c.real());
    for (const auto& c : b_complex) filter.b.push_back(c.real());

    // Unit gain at Nyquist, where the analog high-pass tends to 1.
    const double gain = std::abs(evaluate(filter.a, -1.0)) / std::abs(evaluate(filter.b, -1.0));
    for (double& c : filter.b) c *= gain;
    return filter;
}

std::vector<std::complex<double>> filter_poles(const IirFilter& filter) {
    // Roots of z^n + a1 z^(n-1) + ... + an by Durand-Kerner iteration.
    const std::size_t n = filter.a.size() - 1;
    std::vector<Complex> roots(n);
    if (n == 0) return roots;
    const Complex seed{0.4, 0.9};
    for (std::size_t i = 0; i < n; ++i) roots[i] = std::pow(seed, static_cast<double>(i));
    auto poly = [&](Complex z) {
        Complex acc = 1.0;
        for (std::size_t i = 1; i <= n; ++i) acc = acc * z + filter.a[i];
        return acc;
    };
    for (int iter = 0; iter < 500; ++iter) {
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Complex denom = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) denom *= roots[i] - roots[j];
            }
            const Complex step = poly(roots[i]) / denom;
            roots[i] -= step;
            delta = std::max(delta, std::abs(step));
        }
        if (delta < 1e-15) break;
    }
    return roots;
}

bool is_stable(const IirFilter& filter) {
    if (filter.a.empty() || filter.a[0] != 1.0) return false;
    for (const auto& p : filter_poles(filter)) {
        if (!(std::abs(p) < 1.0)) return false;
    }
    return true;
}

double magnitude_response(const IirFilter& filter, double frequency_hz) {
    const double omega = 2.0 * std::numbers::pi * frequency_hz / filter.sample_rate_hz;
    const Complex z_inv = std::polar(1.0, -omega);
    return std::abs(evaluate(filter.b, z_inv) / evaluate(filter.a, z_inv));
}

std::vector<double> apply_iir(const IirFilter& filter, std::span<const double> samples) {
    const std::size_t taps = std::max(filter.a.size(), filter.b.size());
    std::vector<double> b(taps, 0.0), a(taps, 0.0);
    std::copy(filter.b.begin(), filter.b.end(), b.begin());
    std::copy(filter.a.begin(), filter.a.end(), a.begin());
    std::vector<double> state(taps, 0.0);
    std::vector<double> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double x = samples[i];
        if (!std::isfinite(x)) raise(ErrorKind::InvalidInput, "non-finite sample at index " + std::to_string(i));
        const double y = b[0] * x + state[0];
        for (std::size_t k = 1; k < taps; ++k) {
            state[k - 1] = b[k] * x - a[k] * y + (k < taps - 1 ? state[k] : 0.0);
        }
        out[i] = y;
    }
    return out;
}

}  // namespace dedmon::signal
