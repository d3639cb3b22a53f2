#include "dedmon/ml/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dedmon/core/error.hpp"
#include "dedmon/core/rng.hpp"
#include "dedmon/ml/model.hpp"

namespace dedmon::ml {

namespace {

std::vector<std::vector<std::size_t>> shuffled_classes(std::span<const int> labels, std::uint64_t seed,
                                                       std::uint64_t stream) {
    std::vector<std::vector<std::size_t>> members(kClassCount);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= kClassCount) raise(ErrorKind::InvalidInput, "label outside the three conditions");
        members[static_cast<std::size_t>(labels[i])].push_back(i);
    }
    for (std::size_t c = 0; c < members.size(); ++c) {
        CounterRng rng(derive_key(seed, {stream, c}));
        auto& m = members[c];
        for (std::size_t i = m.size(); i > 1; --i) std::swap(m[i - 1], m[rng.index(i)]);
    }
    return members;
}

}  // namespace

SplitIndices stratified_split(const fusion::FeatureTable& table, double train_fraction, std::uint64_t seed) {
    if (table.real_rows() != table.rows()) raise(ErrorKind::Split, "splits are drawn from real rows only");
    const auto labels = table.labels();
    return stratified_split(labels, train_fraction, seed);
}

SplitIndices stratified_split(std::span<const int> labels, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) raise(ErrorKind::Config, "train fraction must be in (0, 1)");
    auto members = shuffled_classes(labels, seed, 1);
    for (std::size_t c = 0; c < members.size(); ++c) {
        if (members[c].size() == 1) {
            raise(ErrorKind::Split, std::string("class ") + fusion::to_string(static_cast<fusion::Condition>(c)) +
                                        " has a single row");
        }
    }

    const auto total = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(labels.size())));
    std::vector<std::size_t> take(kClassCount, 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < members.size(); ++c) {
        const double exact = train_fraction * static_cast<double>(members[c].size());
        take[c] = static_cast<std::size_t>(std::floor(exact));
        assigned += take[c];
        remainders.emplace_back(exact - std::floor(exact), c);
    }
    std::stable_sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [frac, c] : remainders) {
        if (assigned >= total) break;
        if (take[c] < members[c].size()) {
            ++take[c];
            ++assigned;
        }
    }

    SplitIndices out;
    for (std::size_t c = 0; c < members.size(); ++c) {
        const auto& m = members[c];
        if (m.empty()) continue;
        const std::size_t n_train = std::clamp<std::size_t>(take[c], 1, m.size() - 1);
        out.train.insert(out.train.end(), m.begin(), m.begin() + static_cast<std::ptrdiff_t>(n_train));
        out.test.insert(out.test.end(), m.begin() + static_cast<std::ptrdiff_t>(n_train), m.end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
    if (k < 2) raise(ErrorKind::Config, "cross-validation needs at least two folds");
    const auto members = shuffled_classes(labels, seed, 2);
    std::vector<std::vector<std::size_t>> folds(k);
    for (std::size_t c = 0; c < members.size(); ++c) {
        const auto& m = members[c];
        if (m.empty()) continue;
        if (m.size() < k + 1) {
            raise(ErrorKind::Fold, std::string("class ") + fusion::to_string(static_cast<fusion::Condition>(c)) +
                                       " has " + std::to_string(m.size()) + " rows for " + std::to_string(k) +
                                       " folds");
        }
        for (std::size_t i = 0; i < m.size(); ++i) folds[i % k].push_back(m[i]);
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

std::vector<std::size_t> complement(std::size_t n, std::span<const std::size_t> test) {
    std::vector<std::size_t> out;
    out.reserve(n - std::min(n, test.size()));
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (j < test.size() && test[j] == i) {
            ++j;
            continue;
        }
        out.push_back(i);
    }
    return out;
}

}  // namespace dedmon::ml
