#include "dedmon/fusion/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dedmon/core/error.hpp"
#include "dedmon/core/rng.hpp"
#include "dedmon/core/stats.hpp"

namespace dedmon::fusion {
namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return s;
}

}  // namespace

FeatureTable smote_augment(const FeatureTable& table, std::size_t k_neighbors, std::size_t target_count_per_class,
                           std::uint64_t seed) {
    if (k_neighbors == 0) raise(ErrorKind::Augmentation, "SMOTE needs k >= 1");
    FeatureTable out = table;
    const auto counts = table.class_counts();
    std::vector<double> buf(table.cols());
    for (Condition c : kAllConditions) {
        const std::size_t have = counts[static_cast<std::size_t>(code(c))];
        if (have >= target_count_per_class) continue;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < table.rows(); ++i) {
            if (table.meta(i).label == c && table.meta(i).provenance == Provenance::Real) members.push_back(i);
        }
        if (members.size() < k_neighbors + 1) {
            raise(ErrorKind::Augmentation, std::string("class ") + to_string(c) + " has " +
                                               std::to_string(members.size()) + " real rows, SMOTE with k=" +
                                               std::to_string(k_neighbors) + " needs " +
                                               std::to_string(k_neighbors + 1));
        }
        // k nearest same-class neighbours per member; ties by row order.
        std::vector<std::vector<std::size_t>> neighbours(members.size());
        for (std::size_t a = 0; a < members.size(); ++a) {
            std::vector<std::pair<double, std::size_t>> d;
            d.reserve(members.size() - 1);
            for (std::size_t b = 0; b < members.size(); ++b) {
                if (a == b) continue;
                d.emplace_back(squared_distance(table.row(members[a]), table.row(members[b])), b);
            }
            std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k_neighbors), d.end());
            for (std::size_t t = 0; t < k_neighbors; ++t) neighbours[a].push_back(d[t].second);
        }
        const std::size_t need = target_count_per_class - have;
        for (std::size_t j = 0; j < need; ++j) {
            CounterRng rng(derive_key(seed, {static_cast<std::uint64_t>(code(c)), j}));
            const std::size_t src = rng.index(members.size());
            const std::size_t nb = neighbours[src][rng.index(k_neighbors)];
            const double u = rng.uniform();
            const auto r = table.row(members[src]);
            const auto n = table.row(members[nb]);
            for (std::size_t col = 0; col < buf.size(); ++col) buf[col] = r[col] + u * (n[col] - r[col]);
            RowMeta meta = table.meta(members[src]);
            meta.provenance = Provenance::SyntheticSmote;
            out.add_row(buf, std::move(meta));
        }
    }
    return out;
}

FeatureTable gaussian_perturb(const FeatureTable& table, double noise_fraction, std::size_t copies,
                              std::uint64_t seed) {
    if (!(noise_fraction > 0.0)) raise(ErrorKind::Augmentation, "noise fraction must be positive");
    std::vector<std::size_t> real;
    for (std::size_t i = 0; i < table.rows(); ++i) {
        if (table.meta(i).provenance == Provenance::Real) real.push_back(i);
    }
    const FeatureTable real_rows = table.select_rows(real);
    std::vector<double> sigma(table.cols());
    for (std::size_t j = 0; j < table.cols(); ++j) sigma[j] = stats::sample_std(real_rows.column(j));

    FeatureTable out = table;
    std::vector<double> buf(table.cols());
    for (std::size_t copy = 0; copy < copies; ++copy) {
        for (std::size_t t = 0; t < real.size(); ++t) {
            CounterRng rng(derive_key(seed, {0x6e6f697365ULL, copy, t}));
            const auto r = table.row(real[t]);
            for (std::size_t j = 0; j < buf.size(); ++j) buf[j] = r[j] + noise_fraction * sigma[j] * rng.normal();
            RowMeta meta = table.meta(real[t]);
            meta.provenance = Provenance::SyntheticNoise;
            out.add_row(buf, std::move(meta));
        }
    }
    return out;
}

FeatureTable balance_classes(const FeatureTable& table, std::size_t k_neighbors, std::uint64_t seed) {
    const auto counts = table.class_counts();
    const std::size_t target = *std::max_element(counts.begin(), counts.end());
    return smote_augment(table, k_neighbors, target, derive_key(seed, {0x62616c616e6365ULL}));
}

}  // namespace dedmon::fusion
