// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dedmon/ae/segmentation.hpp"
#include "dedmon/ae/window_features.hpp"
#include "dedmon/app/config.hpp"
#include "dedmon/app/stages.hpp"
#include "dedmon/core/log.hpp"
#include "dedmon/core/rng.hpp"
#include "dedmon/core/stats.hpp"
#include "dedmon/fusion/anova.hpp"
#include "dedmon/io/csv.hpp"
#include "dedmon/io/files.hpp"
#include "dedmon/io/frames.hpp"
#include "dedmon/io/manifest.hpp"
#include "dedmon/io/report.hpp"
#include "dedmon/io/stamp.hpp"
#include "dedmon/io/waveform.hpp"
#include "dedmon/ml/ablation.hpp"
#include "dedmon/ml/logistic.hpp"
#include "dedmon/ml/metrics.hpp"
#include "dedmon/ml/mlp.hpp"
#include "dedmon/signal/fft.hpp"
#include "dedmon/signal/iir.hpp"
#include "dedmon/vision/geometry.hpp"
#include "dedmon/vision/melt_pool.hpp"

namespace fs = std::filesystem;
using namespace dedmon;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double rel(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

std::vector<double> normal_vector(CounterRng& rng, std::size_t n, double scale = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) x = scale * rng.normal();
    return v;
}

// 1. Metric identity -------------------------------------------------------

Outcome metric_identity() {
    std::vector<int> truth, pred;
    auto add = [&](int t, int p, int n) {
        truth.insert(truth.end(), static_cast<std::size_t>(n), t);
        pred.insert(pred.end(), static_cast<std::size_t>(n), p);
    };
    add(1, 1, 30);
    add(2, 2, 29);
    add(0, 1, 4);
    add(1, 0, 1);
    add(0, 0, 26);
    const auto r = ml::classification_metrics(truth, pred, {});
    auto r3 = [](double x) { return std::round(x * 1000.0) / 1000.0; };
    const bool counts = r.binarized == ml::BinaryCounts{59, 4, 1, 26};
    const bool ok = counts && r3(r.accuracy) == 0.944 && r3(r.precision) == 0.937 && r3(r.recall) == 0.983 &&
                    r3(r.f1) == 0.959;
    return {ok, fmt("accuracy %.3f", r.accuracy) + fmt(" precision %.3f", r.precision) + fmt(" recall %.3f", r.recall) +
                    fmt(" f1 %.3f", r.f1)};
}

// 2. FFT oracle -------------------------------------------------------------

Outcome fft_oracle() {
    const auto t0 = Clock::now();
    CounterRng rng(derive_key(42, {2}));
    constexpr std::size_t n = 1024;
    std::vector<std::complex<long double>> twiddle(n);
    for (std::size_t m = 0; m < n; ++m) {
        const long double ph = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>(m) / static_cast<long double>(n);
        twiddle[m] = {std::cos(ph), std::sin(ph)};
    }
    double worst = 0.0, worst_parseval = 0.0;
    for (int w = 0; w < 100; ++w) {
        const auto x = normal_vector(rng, n);
        const auto fast = signal::fft_complex(x);
        std::vector<std::complex<long double>> slow(n);
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<long double> s = 0.0L;
            for (std::size_t j = 0; j < n; ++j) s += static_cast<long double>(x[j]) * twiddle[(j * k) % n];
            slow[k] = s;
        }
        long double peak = 0.0L, diff = 0.0L;
        for (std::size_t k = 0; k < n; ++k) {
            peak = std::max(peak, std::abs(slow[k]));
            const std::complex<long double> f(fast[k].real(), fast[k].imag());
            diff = std::max(diff, std::abs(f - slow[k]));
        }
        worst = std::max(worst, static_cast<double>(diff / peak));
        double et = 0.0, ef = 0.0;
        for (double v : x) et += v * v;
        for (const auto& v : fast) ef += std::norm(v);
        worst_parseval = std::max(worst_parseval, rel(et, ef / static_cast<double>(n)));
    }
    const double secs = seconds_since(t0);
    return {worst < 1e-9 && worst_parseval < 1e-9 && secs < 10.0,
            fmt("max rel err %.2e", worst) + fmt(", Parseval %.2e", worst_parseval) + fmt(", %.1f s", secs)};
}

// 3. Filter response --------------------------------------------------------

double tone_gain_db(const signal::IirFilter& f, double freq) {
    const double fs = f.sample_rate_hz;
    std::vector<double> x(50000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / fs);
    const auto y = signal::apply_iir(f, x);
    // Least-squares amplitude over the steady-state tail.
    double ss = 0, cc = 0, sc = 0, ys = 0, yc = 0;
    for (std::size_t i = 10000; i < y.size(); ++i) {
        const double w = 2.0 * std::numbers::pi * freq * static_cast<double>(i) / fs;
        const double s = std::sin(w), c = std::cos(w);
        ss += s * s;
        cc += c * c;
        sc += s * c;
        ys += y[i] * s;
        yc += y[i] * c;
    }
    const double det = ss * cc - sc * sc;
    return 20.0 * std::log10(std::hypot((ys * cc - yc * sc) / det, (yc * ss - ys * sc) / det));
}

Outcome filter_response() {
    const auto t0 = Clock::now();
    const auto f = signal::design_butterworth_highpass(150e3, 4, 500e3);
    const double g150 = tone_gain_db(f, 150e3), g75 = tone_gain_db(f, 75e3), g245 = tone_gain_db(f, 245e3);
    const double secs = seconds_since(t0);
    const bool ok = std::abs(g150 + 3.01) <= 0.1 && g75 <= -20.0 && g245 >= -0.5 && secs < 5.0;
    return {ok, fmt("150 kHz %.3f dB", g150) + fmt(", 75 kHz %.2f dB", g75) + fmt(", 245 kHz %.4f dB", g245)};
}

// 4. Feature formulas -------------------------------------------------------

Outcome feature_formulas() {
    const auto t0 = Clock::now();
    CounterRng rng(derive_key(42, {4}));
    double worst = 0.0;
    for (int w = 0; w < 1000; ++w) {
        auto x = normal_vector(rng, 1024, 1e-4 + 1e-3 * rng.uniform());
        for (double& v : x) v += 1e-4 * (rng.uniform() - 0.5);
        const auto f = ae::time_domain_features(x);
        long double mean = 0, sum_abs = 0, sum_sq = 0;
        for (double v : x) {
            mean += v;
            sum_abs += std::abs(static_cast<long double>(v));
            sum_sq += static_cast<long double>(v) * v;
        }
        const long double n = static_cast<long double>(x.size());
        mean /= n;
        long double m2 = 0, m4 = 0;
        for (double v : x) {
            const long double d = static_cast<long double>(v) - mean;
            m2 += d * d;
            m4 += d * d * d * d;
        }
        m2 /= n;
        m4 /= n;
        worst = std::max({worst, rel(f.kurtosis, static_cast<double>(m4 / (m2 * m2))),
                          rel(f.maa, static_cast<double>(sum_abs / n)),
                          rel(f.std, static_cast<double>(std::sqrt(m2 * n / (n - 1)))),
                          rel(f.rms, static_cast<double>(std::sqrt(sum_sq / n))), rel(f.abs_energy, static_cast<double>(sum_sq))});
    }

    const double fs = 500e3, bw = fs / 1024.0;
    bool ratio_ok = true;
    for (int t = 0; t < 50; ++t) {
        std::vector<double> mags(513, 0.0);
        const auto split = static_cast<std::size_t>(std::ceil(150e3 / bw));
        const double m = 0.1 + rng.uniform();
        mags[1 + rng.index(split - 1)] = m;
        mags[split + rng.index(513 - split)] = m;
        signal::Spectrum s{bw, mags, 1024};
        ratio_ok = ratio_ok && std::abs(ae::frequency_domain_features(s).energy_ratio_lowhigh - 1.0) < 1e-12;
    }

    bool centroid_ok = true;
    for (int t = 0; t < 50; ++t) {
        const double tone = 5e3 + 240e3 * rng.uniform();
        std::vector<double> x(1024);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * std::numbers::pi * tone * static_cast<double>(i) / fs);
        centroid_ok = centroid_ok && std::abs(ae::frequency_domain_features(signal::fft(x, fs)).centroid_hz - tone) <= bw;
    }

    double worst_band = 0.0;
    for (int t = 0; t < 200; ++t) {
        const auto s = signal::fft(normal_vector(rng, 1024), fs);
        const auto f = ae::frequency_domain_features(s);
        double total = 0.0, bands = 0.0;
        for (double m : s.magnitudes) total += m * m;
        for (double e : f.band_energies) bands += e;
        worst_band = std::max(worst_band, rel(total, bands));
    }
    const double secs = seconds_since(t0);
    const bool ok = worst < 1e-12 && ratio_ok && centroid_ok && worst_band < 1e-9 && secs < 30.0;
    return {ok, fmt("time-domain max rel err %.2e", worst) + std::string(", ratio ") + (ratio_ok ? "ok" : "off") +
                    ", centroid " + (centroid_ok ? "ok" : "off") + fmt(", band partition %.2e", worst_band)};
}

// 5. Geometry oracles -------------------------------------------------------

double brute_force_radius(const std::vector<vision::Point2>& pts) {
    if (pts.size() == 1) return 0.0;
    auto encloses = [&](double cx, double cy, double r) {
        for (const auto& p : pts) {
            if (std::hypot(p.x - cx, p.y - cy) > r + 1e-9) return false;
        }
        return true;
    };
    double best = HUGE_VAL;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double cx = (pts[i].x + pts[j].x) / 2, cy = (pts[i].y + pts[j].y) / 2;
            const double r = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y) / 2;
            if (r < best && encloses(cx, cy, r)) best = r;
            for (std::size_t k = j + 1; k < n; ++k) {
                const double ax = pts[i].x, ay = pts[i].y, bx = pts[j].x, by = pts[j].y, qx = pts[k].x, qy = pts[k].y;
                const double d = 2 * (ax * (by - qy) + bx * (qy - ay) + qx * (ay - by));
                if (std::abs(d) < 1e-12) continue;
                const double ux =
                    ((ax * ax + ay * ay) * (by - qy) + (bx * bx + by * by) * (qy - ay) + (qx * qx + qy * qy) * (ay - by)) / d;
                const double uy =
                    ((ax * ax + ay * ay) * (qx - bx) + (bx * bx + by * by) * (ax - qx) + (qx * qx + qy * qy) * (bx - ax)) / d;
                const double rr = std::hypot(ax - ux, ay - uy);
                if (rr < best && encloses(ux, uy, rr)) best = rr;
            }
        }
    }
    return best;
}

vision::Mask random_mask(CounterRng& rng, int size) {
    vision::Mask m(size, size);
    const int blobs = 1 + static_cast<int>(rng.index(4));
    for (int b = 0; b < blobs; ++b) {
        const double cx = size * (0.3 + 0.4 * rng.uniform()), cy = size * (0.3 + 0.4 * rng.uniform());
        const double rx = 2.0 + 10.0 * rng.uniform(), ry = 2.0 + 10.0 * rng.uniform();
        for (int y = 0; y < size; ++y) {
            for (int x = 0; x < size; ++x) {
                const double u = (x - cx) / rx, v = (y - cy) / ry;
                if (u * u + v * v <= 1.0) m.at(x, y) = 1;
            }
        }
    }
    for (int i = 0; i < 20; ++i) m.at(static_cast<int>(rng.index(size)), static_cast<int>(rng.index(size))) = 1;
    return vision::largest_component(m);
}

Outcome geometry_oracles() {
    const auto t0 = Clock::now();
    CounterRng rng(derive_key(42, {5}));
    double worst = 0.0;
    bool contained = true;
    for (int t = 0; t < 200; ++t) {
        std::vector<vision::Point2> pts(1 + rng.index(32));
        for (auto& p : pts) p = {100.0 * rng.uniform(), 100.0 * rng.uniform()};
        const auto c = vision::min_enclosing_circle(pts);
        worst = std::max(worst, std::abs(c.radius - brute_force_radius(pts)));
        for (const auto& p : pts) contained = contained && std::hypot(p.x - c.center.x, p.y - c.center.y) <= c.radius + 1e-9;
    }
    int masks = 0, attempts = 0;
    bool ratios_ok = true;
    while (masks < 500 && attempts < 5000) {
        ++attempts;
        const auto g = vision::melt_pool_geometry(random_mask(rng, 64), 4.5);
        if (!g.valid) continue;
        ++masks;
        ratios_ok = ratios_ok && g.core2circle_ratio > 0.0 && g.core2circle_ratio <= 1.0 && g.convexity > 0.0 &&
                    g.convexity <= 1.0;
    }
    double worst_square = 0.0;
    for (int side : {57, 70, 90, 110}) {
        vision::Mask m(128, 128);
        for (int y = 8; y < 8 + side; ++y) {
            for (int x = 9; x < 9 + side; ++x) m.at(x, y) = 1;
        }
        const auto g = vision::melt_pool_geometry(m, 1.0, 1.0);
        worst_square = std::max(worst_square, std::abs(g.core2circle_ratio - 2.0 / std::numbers::pi));
    }
    const double secs = seconds_since(t0);
    const bool ok = worst < 1e-9 && contained && masks == 500 && ratios_ok && worst_square <= 0.03 && secs < 60.0;
    return {ok, fmt("circle radius diff %.2e", worst) + ", " + std::to_string(masks) + " masks in (0,1]" +
                    fmt(", square |c2c - 2/pi| %.4f", worst_square)};
}

// 6. ANOVA -------------------------------------------------------------------

Outcome anova() {
    const auto identical = fusion::one_way_anova(std::vector<double>{1, 2, 3, 1, 2, 3}, std::vector<int>{0, 0, 0, 1, 1, 1});
    const auto hand = fusion::one_way_anova(std::vector<double>{0, 1, 2, 3}, std::vector<int>{0, 0, 1, 1});
    // Upper-tail F probabilities from an independent incomplete-beta oracle.
    struct Case {
        double f, d1, d2, p;
    };
    const Case cases[] = {
        {8.0, 1, 2, 0.10557280900008414},      {0.5, 2, 10, 0.62092132305915504},
        {1.0, 2, 57, 0.37424073280677622},     {3.2, 2, 237, 0.042529570391692986},
        {12.7, 3, 40, 5.6725899893350961e-06}, {414.4, 2, 237, 4.2472386795687288e-78},
        {0.01, 5, 5, 0.9999475708664215},      {2.5, 10, 100, 0.010095208380047811},
        {50.0, 2, 3, 0.004970797199900164},    {1.5, 1, 1000, 0.22095978373258701},
    };
    double worst_p = 0.0;
    for (const auto& c : cases) worst_p = std::max(worst_p, std::abs(fusion::f_survival(c.f, c.d1, c.d2) - c.p));
    CounterRng rng(derive_key(42, {6}));
    double worst_ss = 0.0;
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 9 + rng.index(200);
        std::vector<double> v(n);
        std::vector<int> g(n);
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = static_cast<int>(i % 3);
            v[i] = (1.0 + 100.0 * rng.uniform()) * rng.normal() + 3.0 * g[i];
        }
        const auto s = fusion::one_way_anova(v, g);
        worst_ss = std::max(worst_ss, rel(s.sst, s.ssb + s.ssw));
    }
    const bool ok = identical.f == 0.0 && hand.f == 8.0 && worst_p < 1e-6 && worst_ss < 1e-9;
    return {ok, fmt("identical F=%g", identical.f) + fmt(", hand F=%.17g", hand.f) + fmt(", max |dp| %.2e", worst_p) +
                    fmt(", SST rel %.2e", worst_ss)};
}

// 7. Gradient checks --------------------------------------------------------

ml::Dataset random_dataset(CounterRng& rng, std::size_t rows, std::size_t d) {
    ml::Dataset data;
    data.x = ml::Matrix(rows, d);
    for (std::size_t i = 0; i < rows; ++i) {
        data.y.push_back(static_cast<int>(i % 3));
        for (std::size_t j = 0; j < d; ++j) data.x.at(i, j) = rng.normal() + (j % 3 == i % 3 ? 1.0 : 0.0);
    }
    return data;
}

Outcome gradient_checks() {
    CounterRng rng(derive_key(42, {7}));
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t d = 2 + rng.index(6);
        std::vector<std::size_t> hidden{2 + rng.index(8)};
        if (t % 2) hidden.push_back(2 + rng.index(6));
        const auto data = random_dataset(rng, 12, d);
        auto params = ml::init_mlp(d, hidden, derive_key(42, {7, static_cast<std::uint64_t>(t)}));
        for (auto& layer : params.layers) {
            for (double& b : layer.bias) b = 0.1 * rng.normal();
        }
        std::vector<double> grad;
        ml::mlp_loss(params, data, 0.01, &grad);
        const auto theta = ml::flatten(params);
        const double h = 1e-6;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            auto a = params, b = params;
            auto ta = theta, tb = theta;
            ta[i] += h;
            tb[i] -= h;
            ml::unflatten(ta, a);
            ml::unflatten(tb, b);
            const double fd = (ml::mlp_loss(a, data, 0.01, nullptr) - ml::mlp_loss(b, data, 0.01, nullptr)) / (2 * h);
            worst = std::max(worst, std::abs(fd - grad[i]) / std::max({std::abs(fd), std::abs(grad[i]), 1e-4}));
        }
    }
    bool monotone = true;
    std::size_t steps = 0;
    for (int t = 0; t < 5; ++t) {
        const auto data = random_dataset(rng, 60, 6);
        const auto fit = ml::fit_logistic(data, {0.1 + 0.2 * t, 1e-8, 500});
        steps += fit.loss_history.size();
        for (std::size_t i = 1; i < fit.loss_history.size(); ++i) monotone = monotone && fit.loss_history[i] <= fit.loss_history[i - 1];
    }
    return {worst < 1e-4 && monotone, fmt("MLP max rel err %.2e", worst) + ", logistic loss " +
                                          (monotone ? "non-increasing" : "increased") + " over " + std::to_string(steps) +
                                          " iterates"};
}

// Shared desk run for criteria 8-11 -------------------------------------------

struct DeskRun {
    fs::path dir;
    double seconds = 0.0;
    bool ok = false;
    std::string error;
};

DeskRun run_desk(const fs::path& dir, bool reuse) {
    DeskRun r;
    r.dir = dir;
    if (reuse && fs::exists(dir / "eval" / "summary.txt") && fs::exists(dir / "specimens")) {
        r.ok = true;
        return r;
    }
    fs::remove_all(dir);
    app::StageContext ctx;
    ctx.config = app::load_config(std::nullopt, synth::ProfileName::Desk, 42);
    ctx.jobs = std::max(1u, std::thread::hardware_concurrency());
    ctx.config.ablation.jobs = ctx.jobs;
    ctx.out = dir;
    ctx.in = dir;
    const auto t0 = Clock::now();
    try {
        app::run_pipeline(ctx);
        r.ok = true;
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    r.seconds = seconds_since(t0);
    return r;
}

// 8. Closed-loop segmentation ---------------------------------------------------

Outcome segmentation(const DeskRun& run) {
    if (!run.ok) return {false, "desk pipeline failed: " + run.error};
    const auto t0 = Clock::now();
    const auto manifest = io::read_manifest(run.dir / "manifest.json");
    const auto cfg = app::default_config(synth::ProfileName::Desk).extraction;
    std::size_t good = 0;
    double worst_ae = 0.0, worst_v = 0.0;
    std::string first_bad;
    for (const auto& e : manifest.specimens) {
        const auto rec = io::read_waveform(run.dir / e.ae_file);
        const auto frames = io::read_frame_stream(run.dir / e.frames_dir);
        const auto ae_det = ae::detect_layers_ae(rec, cfg.ae_segmentation);
        const auto v_det = vision::detect_layers_vision(frames, cfg.vision_segmentation);
        const auto& truth = e.ground_truth->layers;
        bool ok = ae_det.intervals.size() == 5 && v_det.ranges.size() == 5 && truth.size() == 5;
        for (std::size_t l = 0; ok && l < 5; ++l) {
            const double fs = rec.sample_rate_hz;
            const double da = std::max(std::abs(static_cast<double>(ae_det.intervals[l].begin) / fs - truth[l].start_s),
                                       std::abs(static_cast<double>(ae_det.intervals[l].end) / fs - truth[l].end_s));
            const double dv = std::max(std::abs(static_cast<double>(v_det.ranges[l].begin) - static_cast<double>(truth[l].first_frame)),
                                       std::abs(static_cast<double>(v_det.ranges[l].end) - static_cast<double>(truth[l].end_frame)));
            worst_ae = std::max(worst_ae, da);
            worst_v = std::max(worst_v, dv);
            ok = da <= 0.1 && dv <= 2.0;
        }
        if (ok) {
            ++good;
        } else if (first_bad.empty()) {
            first_bad = e.id;
        }
    }
    const double secs = seconds_since(t0);
    const bool ok = manifest.specimens.size() == 60 && good == 60 && secs < 180.0;
    return {ok, std::to_string(good) + "/" + std::to_string(manifest.specimens.size()) + " specimens with 5 layers" +
                    fmt(", max AE offset %.4f s", worst_ae) + fmt(", max vision offset %.0f frames", worst_v) +
                    fmt(", %.0f s", secs) + (first_bad.empty() ? "" : ", first miss " + first_bad)};
}

// 9. Qualitative orderings --------------------------------------------------

Outcome orderings(const DeskRun& run) {
    if (!run.ok) return {false, "desk pipeline failed: " + run.error};
    const auto fused = io::read_feature_table(run.dir / "features" / "fused.csv");
    auto medians = [&](const std::string& name) {
        std::array<double, 3> out{};
        const auto col = fused.column(*fused.column_index(name));
        for (fusion::Condition c : fusion::kAllConditions) {
            std::vector<double> v;
            for (std::size_t i = 0; i < fused.rows(); ++i) {
                if (fused.meta(i).label == c) v.push_back(col[i]);
            }
            out[static_cast<std::size_t>(fusion::code(c))] = stats::median(v);
        }
        return out;
    };
    // Indices: 0 NoHole, 1 Hole3mm, 2 Hole5mm.
    const auto kurt = medians("filtered_kurtosis_mean");
    const auto raw_e = medians("raw_abs_energy_std");
    const auto filt_e = medians("filtered_abs_energy_std");
    const auto c2c = medians("core2circle_ratio_mean");
    const auto rad = medians("circle_radius_std");
    const bool k_ok = kurt[1] > kurt[2] && kurt[2] > kurt[0];
    const bool e_ok = raw_e[2] > raw_e[0] && raw_e[0] > raw_e[1] && filt_e[2] > filt_e[0] && filt_e[0] > filt_e[1];
    const bool c_ok = c2c[1] > c2c[0] && c2c[1] > c2c[2];
    const bool r_ok = rad[0] > rad[1] && rad[0] > rad[2];
    std::string d = std::to_string(fused.rows()) + " layer rows; kurtosis " + (k_ok ? "ok" : "off") + fmt(" (%.4f", kurt[1]) +
                    fmt(" > %.4f", kurt[2]) + fmt(" > %.4f)", kurt[0]) + ", abs-energy std " + (e_ok ? "ok" : "off") +
                    ", core2circle " + (c_ok ? "ok" : "off") + ", radius std " + (r_ok ? "ok" : "off");
    return {k_ok && e_ok && c_ok && r_ok && fused.rows() == 240, d};
}

// 10. End-to-end ablation -----------------------------------------------------

Outcome ablation(const DeskRun& run) {
    if (!run.ok) return {false, "desk pipeline failed: " + run.error};
    std::map<std::pair<std::string, std::string>, double> acc;
    for (ml::ModelKind k : ml::kAllModelKinds) {
        for (ml::FeatureSet s : ml::kAllFeatureSets) {
            const auto name = std::string(ml::to_string(k)) + "_" + ml::to_string(s) + ".json";
            const auto r = io::metrics_from_json(io::parse_json(io::read_file(run.dir / "eval" / name), name));
            acc[{ml::to_string(k), ml::to_string(s)}] = r.accuracy;
        }
    }
    int wins = 0;
    std::string d;
    for (ml::ModelKind k : ml::kAllModelKinds) {
        const std::string kn = ml::to_string(k);
        const double mm = acc[{kn, "multimodal"}];
        const bool win = mm >= std::max(acc[{kn, "ae_only"}], acc[{kn, "camera_only"}]);
        wins += win;
        d += kn + fmt(" %.3f/", acc[{kn, "ae_only"}]) + fmt("%.3f/", acc[{kn, "camera_only"}]) + fmt("%.3f; ", mm);
    }
    const double mlp = acc[{"mlp", "multimodal"}];
    const bool time_ok = run.seconds < 600.0;
    d += std::to_string(wins) + "/4 multimodal >= best single" + fmt(", MLP multimodal %.3f", mlp);
    d += run.seconds > 0.0 ? fmt(", pipeline %.0f s", run.seconds) + " with " +
                                 std::to_string(std::max(1u, std::thread::hardware_concurrency())) + " thread(s)"
                           : ", pipeline reused";
    return {wins >= 3 && mlp >= 0.90 && time_ok, d};
}

// 11. Determinism and hygiene -------------------------------------------------

std::map<std::string, std::uint32_t> tree_digest(const fs::path& root) {
    std::map<std::string, std::uint32_t> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = io::crc32_file(e.path());
    }
    return out;
}

app::PipelineConfig reduced_config() {
    const nlohmann::json doc = nlohmann::json::parse(R"({
      "synth": {"specimens_per_condition": 3, "layer_active_s": 3.0, "trim_head_s": 0.5, "trim_tail_s": 0.25},
      "ml": {"mlp_seeds": 2, "grids": {
         "logistic_regression": {"c": [1.0]},
         "mlp": {"hidden_units": [16], "patience": [10]},
         "random_forest": {"n_estimators": [30], "max_depth": [5]},
         "gradient_boosting": {"n_estimators": [30], "max_depth": [3]}}}})");
    auto c = app::config_from_json(doc, synth::ProfileName::Desk);
    c.validate();
    return c;
}

double smote_reconstruction_error(const ml::PreparedData& data, std::size_t k, std::size_t& checked) {
    const auto& t = data.train;
    std::vector<std::size_t> real;
    for (std::size_t i = 0; i < t.rows(); ++i) {
        if (t.meta(i).provenance == fusion::Provenance::Real) real.push_back(i);
    }
    auto dist = [&](std::size_t a, std::size_t b) {
        double s = 0.0;
        for (std::size_t j = 0; j < t.cols(); ++j) s += (t.at(a, j) - t.at(b, j)) * (t.at(a, j) - t.at(b, j));
        return s;
    };
    std::map<std::size_t, std::vector<std::size_t>> neighbours;
    for (std::size_t r : real) {
        std::vector<std::pair<double, std::size_t>> d;
        for (std::size_t n : real) {
            if (n != r && t.meta(n).label == t.meta(r).label) d.emplace_back(dist(r, n), n);
        }
        std::sort(d.begin(), d.end());
        for (std::size_t i = 0; i < std::min(k, d.size()); ++i) neighbours[r].push_back(d[i].second);
    }
    double worst = 0.0;
    for (std::size_t s = 0; s < t.rows(); ++s) {
        if (t.meta(s).provenance != fusion::Provenance::SyntheticSmote) continue;
        ++checked;
        double best = HUGE_VAL;
        for (std::size_t r : real) {
            if (t.meta(r).label != t.meta(s).label) continue;
            for (std::size_t n : neighbours[r]) {
                // Least-squares u for s = r + u (n - r), clamped to [0, 1].
                double num = 0.0, den = 0.0;
                for (std::size_t j = 0; j < t.cols(); ++j) {
                    const double dn = t.at(n, j) - t.at(r, j);
                    num += (t.at(s, j) - t.at(r, j)) * dn;
                    den += dn * dn;
                }
                const double u = den > 0.0 ? std::clamp(num / den, 0.0, 1.0) : 0.0;
                double err = 0.0;
                for (std::size_t j = 0; j < t.cols(); ++j) {
                    err = std::max(err, std::abs(t.at(r, j) + u * (t.at(n, j) - t.at(r, j)) - t.at(s, j)));
                }
                best = std::min(best, err);
            }
        }
        worst = std::max(worst, best);
    }
    return worst;
}

Outcome determinism(const DeskRun& run, const fs::path& work) {
    if (!run.ok) return {false, "desk pipeline failed: " + run.error};
    std::vector<std::map<std::string, std::uint32_t>> digests;
    for (const auto& [name, jobs] : std::vector<std::pair<std::string, std::size_t>>{{"det_a", 1}, {"det_b", 1}, {"det_c", 8}}) {
        app::StageContext ctx;
        ctx.config = reduced_config();
        ctx.config.ablation.jobs = jobs;
        ctx.jobs = jobs;
        ctx.out = ctx.in = work / name;
        fs::remove_all(ctx.out);
        app::run_pipeline(ctx);
        digests.push_back(tree_digest(ctx.out));
        fs::remove_all(ctx.out);
    }
    const bool same_seed = digests[0] == digests[1] && !digests[0].empty();
    const bool same_jobs = digests[0] == digests[2];

    const auto fused = io::read_feature_table(run.dir / "features" / "fused.csv");
    const auto cfg = app::default_config(synth::ProfileName::Desk).ablation;
    const auto prepared = ml::prepare_ablation(fused, cfg, 42);
    std::size_t synthetic_in_test = 0, test_rows = 0, checked = 0;
    double worst = 0.0;
    for (const auto& [set, data] : prepared.prepared) {
        test_rows += data.test.rows();
        for (std::size_t i = 0; i < data.test.rows(); ++i) synthetic_in_test += data.test.meta(i).provenance != fusion::Provenance::Real;
        worst = std::max(worst, smote_reconstruction_error(data, cfg.preprocess.smote_k, checked));
    }
    const bool ok = same_seed && same_jobs && synthetic_in_test == 0 && checked > 0 && worst < 1e-9;
    return {ok, std::to_string(digests[0].size()) + " files " + (same_seed ? "identical" : "DIFFER") + " across reruns, " +
                    (same_jobs ? "identical" : "DIFFER") + " for jobs 1 vs 8; " + std::to_string(synthetic_in_test) +
                    " synthetic of " + std::to_string(test_rows) + " test rows; " + std::to_string(checked) +
                    " SMOTE rows" + fmt(" reconstruct within %.2e", worst)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Acceptance criteria"};
    std::string work = "acceptance_run";
    bool keep = false, reuse = false;
    std::vector<int> only;
    cli.add_option("--work-dir", work, "Scratch directory for the desk runs")->capture_default_str();
    cli.add_flag("--keep-data", keep, "Keep generated specimen data");
    cli.add_flag("--reuse", reuse, "Reuse an earlier desk run in the work directory");
    cli.add_option("--only", only, "Run only these criteria");
    CLI11_PARSE(cli, argc, argv);

    set_warning_sink([](const std::string&) {});
    const fs::path work_dir = fs::absolute(work);
    fs::create_directories(work_dir);
    auto selected = [&](int n) { return only.empty() || std::find(only.begin(), only.end(), n) != only.end(); };

    const std::vector<std::pair<int, std::string>> names{
        {1, "metric identity"},    {2, "FFT oracle"},        {3, "filter response"},   {4, "feature formulas"},
        {5, "geometry oracles"},   {6, "ANOVA"},             {7, "gradient checks"},   {8, "closed-loop segmentation"},
        {9, "qualitative orderings"}, {10, "end-to-end ablation"}, {11, "determinism and hygiene"}};

    std::optional<DeskRun> desk;
    auto need_desk = [&]() -> const DeskRun& {
        if (!desk) desk = run_desk(work_dir / "desk", reuse);
        return *desk;
    };
    const std::map<int, std::function<Outcome()>> checks{
        {1, metric_identity},
        {2, fft_oracle},
        {3, filter_response},
        {4, feature_formulas},
        {5, geometry_oracles},
        {6, anova},
        {7, gradient_checks},
        {8, [&] { return segmentation(need_desk()); }},
        {9, [&] { return orderings(need_desk()); }},
        {10, [&] { return ablation(need_desk()); }},
        {11, [&] { return determinism(need_desk(), work_dir); }},
    };

    int failures = 0;
    for (const auto& [n, name] : names) {
        if (!selected(n)) continue;
        Outcome o;
        try {
            o = checks.at(n)();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s  %2d  %-26s %s\n", o.pass ? "PASS" : "FAIL", n, name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    if (desk && !keep) fs::remove_all(work_dir / "desk" / "specimens");
    return failures == 0 ? 0 : 1;
}
