#include "dedmon/fusion/anova.hpp"

#include <algorithm>
#include <cmath>

#include "dedmon/core/error.hpp"
#include "dedmon/core/log.hpp"

namespace dedmon::fusion {
namespace {

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-12;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) return h;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) raise(ErrorKind::InvalidInput, "incomplete beta needs positive parameters");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_survival(double f, double d1, double d2) {
    if (std::isinf(f)) return 0.0;
    if (!(f > 0.0)) return 1.0;
    return regularized_incomplete_beta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * f));
}

AnovaStat one_way_anova(std::span<const double> values, std::span<const int> groups) {
    if (values.size() != groups.size()) raise(ErrorKind::InvalidGrouping, "values and group codes differ in length");
    int max_code = -1;
    for (int g : groups) {
        if (g < 0) raise(ErrorKind::InvalidGrouping, "negative group code");
        max_code = std::max(max_code, g);
    }
    std::vector<std::size_t> sizes(static_cast<std::size_t>(max_code + 1), 0);
    std::vector<double> sums(sizes.size(), 0.0);
    double grand_sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        ++sizes[static_cast<std::size_t>(groups[i])];
        sums[static_cast<std::size_t>(groups[i])] += values[i];
        grand_sum += values[i];
    }
    AnovaStat s;
    s.total = values.size();
    for (std::size_t g = 0; g < sizes.size(); ++g) {
        if (sizes[g] == 0) continue;
        if (sizes[g] < 2) raise(ErrorKind::InvalidGrouping, "group " + std::to_string(g) + " has fewer than 2 members");
        s.group_sizes.push_back(sizes[g]);
    }
    s.groups = static_cast<int>(s.group_sizes.size());
    if (s.groups < 2) raise(ErrorKind::InvalidGrouping, "ANOVA needs at least two groups");
    if (s.total <= static_cast<std::size_t>(s.groups)) raise(ErrorKind::InvalidGrouping, "ANOVA needs N > k");

    const double grand_mean = grand_sum / static_cast<double>(s.total);
    std::vector<double> means(sizes.size(), 0.0);
    for (std::size_t g = 0; g < sizes.size(); ++g) {
        if (sizes[g] > 0) means[g] = sums[g] / static_cast<double>(sizes[g]);
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double x = values[i];
        const double dw = x - means[static_cast<std::size_t>(groups[i])];
        const double dt = x - grand_mean;
        s.ssw += dw * dw;
        s.sst += dt * dt;
        scale += x * x;
    }
    for (std::size_t g = 0; g < sizes.size(); ++g) {
        if (sizes[g] == 0) continue;
        const double d = means[g] - grand_mean;
        s.ssb += static_cast<double>(sizes[g]) * d * d;
    }

    const double df_between = s.groups - 1.0;
    const double df_within = static_cast<double>(s.total) - s.groups;
    // Rounding residue of a constant column is not variance.
    const bool constant = s.sst <= 1e-24 * std::max(scale, 1e-300);
    const bool no_within = s.ssw <= 1e-14 * s.sst;
    if (constant) {
        s.f = 0.0;
        s.p = 1.0;
    } else if (no_within) {
        s.f = std::numeric_limits<double>::infinity();
        s.p = 0.0;
    } else {
        s.f = (s.ssb / df_between) / (s.ssw / df_within);
        s.p = f_survival(s.f, df_between, df_within);
    }
    return s;
}

AnovaStat anova_f(const FeatureTable& table, const std::string& feature) {
    const auto j = table.column_index(feature);
    if (!j) raise(ErrorKind::Schema, "table has no column '" + feature + "'");
    const auto values = table.column(*j);
    const auto labels = table.labels();
    return one_way_anova(values, labels);
}

std::vector<FeatureScore> rank_features(const FeatureTable& table) {
    const auto labels = table.labels();
    std::vector<FeatureScore> scores;
    for (std::size_t j = 0; j < table.cols(); ++j) {
        const Modality m = modality_of(table.columns()[j]);
        if (m == Modality::Other) continue;
        const auto values = table.column(j);
        const auto stat = one_way_anova(values, labels);
        scores.push_back({table.columns()[j], m, stat.f, stat.p});
    }
    std::sort(scores.begin(), scores.end(), [](const FeatureScore& a, const FeatureScore& b) {
        if (a.f != b.f) return a.f > b.f;
        return a.feature < b.feature;
    });
    return scores;
}

std::vector<std::string> select_top_features(const std::vector<FeatureScore>& scores, std::size_t top_k_ae,
                                             std::size_t top_k_vision) {
    std::vector<std::string> out;
    for (auto [modality, k] : {std::pair{Modality::Ae, top_k_ae}, std::pair{Modality::Vision, top_k_vision}}) {
        std::vector<FeatureScore> subset;
        for (const auto& s : scores) {
            if (s.modality == modality) subset.push_back(s);
        }
        std::sort(subset.begin(), subset.end(), [](const FeatureScore& a, const FeatureScore& b) {
            if (a.f != b.f) return a.f > b.f;
            return a.feature < b.feature;
        });
        if (k > subset.size()) {
            warn(std::string("requested ") + std::to_string(k) + " " + to_string(modality) + " features, only " +
                 std::to_string(subset.size()) + " available");
            k = subset.size();
        }
        for (std::size_t i = 0; i < k; ++i) out.push_back(subset[i].feature);
    }
    return out;
}

}  // namespace dedmon::fusion
