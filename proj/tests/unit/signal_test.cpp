#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "dedmon/core/error.hpp"
#include "dedmon/signal/decibel.hpp"
#include "dedmon/signal/fft.hpp"
#include "dedmon/signal/iir.hpp"
#include "dedmon/signal/recording.hpp"
#include "test_support.hpp"

using namespace dedmon;
using namespace dedmon::signal;
using dedmon::testing::random_vector;

namespace {

std::vector<std::complex<double>> naive_dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            // Reduce the phase index first so large jk stays exact.
            const double phase = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
            s += x[j] * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        out[k] = s;
    }
    return out;
}

/// Amplitude of the `freq` component by least squares on sin and cos.
double tone_amplitude(const std::vector<double>& y, std::size_t from, double freq, double fs) {
    double ss = 0, cc = 0, sc = 0, ys = 0, yc = 0;
    for (std::size_t i = from; i < y.size(); ++i) {
        const double w = 2.0 * std::numbers::pi * freq * static_cast<double>(i) / fs;
        const double s = std::sin(w), c = std::cos(w);
        ss += s * s;
        cc += c * c;
        sc += s * c;
        ys += y[i] * s;
        yc += y[i] * c;
    }
    const double det = ss * cc - sc * sc;
    const double a = (ys * cc - yc * sc) / det;
    const double b = (yc * ss - ys * sc) / det;
    return std::hypot(a, b);
}

double butterworth_oracle(double f, double fc, int order, double fs) {
    const double omega = 2.0 * fs * std::tan(std::numbers::pi * f / fs);
    const double wc = 2.0 * fs * std::tan(std::numbers::pi * fc / fs);
    return 1.0 / std::sqrt(1.0 + std::pow(wc / omega, 2.0 * order));
}

}  // namespace

TEST(Fft, MatchesNaiveDftOnRandomWindows) {
    CounterRng rng(2024);
    for (std::size_t n : {1u, 2u, 4u, 8u, 64u, 256u, 1024u}) {
        const auto x = random_vector(rng, n);
        const auto fast = fft_complex(x);
        const auto slow = naive_dft(x);
        double max_abs = 0.0;
        for (const auto& v : slow) max_abs = std::max(max_abs, std::abs(v));
        for (std::size_t k = 0; k < n; ++k) ASSERT_LT(std::abs(fast[k] - slow[k]), 1e-9 * std::max(1.0, max_abs)) << n;
    }
}

TEST(Fft, ParsevalHolds) {
    CounterRng rng(7);
    const auto x = random_vector(rng, 1024, 3.0);
    const auto X = fft_complex(x);
    double time = 0.0, freq = 0.0;
    for (double v : x) time += v * v;
    for (const auto& v : X) freq += std::norm(v);
    EXPECT_LT(dedmon::testing::relative_error(time, freq / 1024.0), 1e-12);
}

TEST(Fft, OneSidedSpectrumShapeAndBins) {
    std::vector<double> x(1024);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * std::numbers::pi * 64.0 * i / 1024.0);
    const auto s = fft(x, 500000.0);
    ASSERT_EQ(s.magnitudes.size(), 513u);
    EXPECT_DOUBLE_EQ(s.bin_width_hz, 500000.0 / 1024.0);
    const auto peak = std::max_element(s.magnitudes.begin(), s.magnitudes.end()) - s.magnitudes.begin();
    EXPECT_EQ(peak, 64);
    EXPECT_NEAR(s.magnitudes[64], 512.0, 1e-9);
}

TEST(Fft, PairedTransformEqualsTwoSingleTransforms) {
    CounterRng rng(3);
    const auto a = random_vector(rng, 512);
    const auto b = random_vector(rng, 512, 0.01);
    const auto [sa, sb] = fft_pair(a, b, 1000.0);
    const auto ra = fft(a, 1000.0);
    const auto rb = fft(b, 1000.0);
    ASSERT_EQ(sa.magnitudes.size(), ra.magnitudes.size());
    for (std::size_t k = 0; k < ra.magnitudes.size(); ++k) {
        EXPECT_NEAR(sa.magnitudes[k], ra.magnitudes[k], 1e-10 * (1.0 + ra.magnitudes[k]));
        EXPECT_NEAR(sb.magnitudes[k], rb.magnitudes[k], 1e-10 * (1.0 + ra.magnitudes[k]));
    }
}

TEST(Fft, RejectsNonPowerOfTwo) {
    std::vector<double> x(1000, 1.0);
    EXPECT_THROW(fft_complex(x), Error);
    EXPECT_FALSE(is_power_of_two(0));
    EXPECT_TRUE(is_power_of_two(1));
    EXPECT_FALSE(is_power_of_two(96));
}

TEST(Butterworth, MagnitudeMatchesAnalyticBilinearResponse) {
    for (int order : {1, 2, 4, 6}) {
        const auto f = design_butterworth_highpass(150e3, order, 500e3);
        ASSERT_TRUE(is_stable(f));
        for (double freq : {10e3, 50e3, 75e3, 120e3, 150e3, 200e3, 245e3}) {
            EXPECT_NEAR(magnitude_response(f, freq), butterworth_oracle(freq, 150e3, order, 500e3), 1e-9)
                << order << " " << freq;
        }
    }
}

TEST(Butterworth, PolesInsideUnitCircle) {
    const auto f = design_butterworth_highpass(150e3, 4, 500e3);
    const auto poles = filter_poles(f);
    ASSERT_EQ(poles.size(), 4u);
    for (const auto& p : poles) EXPECT_LT(std::abs(p), 1.0);
    EXPECT_DOUBLE_EQ(f.a[0], 1.0);
}

TEST(Butterworth, ToneGainsThroughApplyIir) {
    const double fs = 500e3;
    const auto f = design_butterworth_highpass(150e3, 4, fs);
    const auto measure_db = [&](double freq) {
        std::vector<double> x(40000);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * std::numbers::pi * freq * i / fs);
        return 20.0 * std::log10(tone_amplitude(apply_iir(f, x), 10000, freq, fs));
    };
    EXPECT_NEAR(measure_db(150e3), -3.0103, 0.1);
    EXPECT_LE(measure_db(75e3), -20.0);
    EXPECT_GE(measure_db(245e3), -0.5);
}

TEST(Butterworth, RejectsBadDesigns) {
    EXPECT_THROW(design_butterworth_highpass(0.0, 4, 500e3), Error);
    EXPECT_THROW(design_butterworth_highpass(250e3, 4, 500e3), Error);
    EXPECT_THROW(design_butterworth_highpass(150e3, 0, 500e3), Error);
    EXPECT_THROW(design_butterworth_highpass(150e3, 4, -1.0), Error);
}

TEST(ApplyIir, ImpulseResponseFollowsDifferenceEquation) {
    const auto f = design_butterworth_highpass(100e3, 2, 500e3);
    std::vector<double> x(50, 0.0);
    x[0] = 1.0;
    const auto y = apply_iir(f, x);
    // Direct-form-I reference.
    std::vector<double> ref(x.size(), 0.0);
    for (std::size_t n = 0; n < x.size(); ++n) {
        double acc = 0.0;
        for (std::size_t k = 0; k < f.b.size() && k <= n; ++k) acc += f.b[k] * x[n - k];
        for (std::size_t k = 1; k < f.a.size() && k <= n; ++k) acc -= f.a[k] * ref[n - k];
        ref[n] = acc;
    }
    for (std::size_t n = 0; n < x.size(); ++n) EXPECT_NEAR(y[n], ref[n], 1e-12);
}

TEST(ApplyIir, RejectsNonFiniteSamples) {
    const auto f = design_butterworth_highpass(100e3, 2, 500e3);
    std::vector<double> x{0.0, NAN};
    EXPECT_THROW(apply_iir(f, x), Error);
}

TEST(Decibel, ReferenceAndFloor) {
    EXPECT_DOUBLE_EQ(amplitude_db(1e-6), 0.0);
    EXPECT_NEAR(amplitude_db(1e-3), 60.0, 1e-12);
    EXPECT_NEAR(amplitude_db(-1e-3), 60.0, 1e-12);
    EXPECT_NEAR(amplitude_db(0.0), -120.0, 1e-9);
    EXPECT_NEAR(amplitude_db(2.0, 1.0), 20.0 * std::log10(2.0), 1e-12);
}

TEST(Recording, ValidateRejectsBadInput) {
    AeRecording r;
    EXPECT_THROW(validate(r), Error);
    r.samples = {0.0f, 1.0f};
    EXPECT_NO_THROW(validate(r));
    r.sample_rate_hz = 0.0;
    EXPECT_THROW(validate(r), Error);
    r.sample_rate_hz = 1.0;
    r.samples[1] = INFINITY;
    EXPECT_THROW(validate(r), Error);
}
