#include "dedmon/ml/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dedmon/core/error.hpp"
#include "dedmon/core/rng.hpp"
#include "dedmon/ml/logistic.hpp"

namespace dedmon::ml {

namespace {

constexpr double kMinGain = 1e-12;

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double score = 0.0;  // larger is better
};

double midpoint(double lo, double hi) {
    const double mid = lo + 0.5 * (hi - lo);
    return mid < hi ? mid : lo;
}

std::vector<std::size_t> draw_features(std::size_t d, std::size_t count, CounterRng& rng) {
    std::vector<std::size_t> f(d);
    std::iota(f.begin(), f.end(), 0);
    if (count == 0 || count >= d) return f;
    for (std::size_t i = 0; i < count; ++i) std::swap(f[i], f[i + rng.index(d - i)]);
    f.resize(count);
    std::sort(f.begin(), f.end());
    return f;
}

std::vector<std::pair<double, std::size_t>> sorted_by(const Dataset& data, std::span<const std::size_t> rows,
                                                      std::size_t feature) {
    std::vector<std::pair<double, std::size_t>> v;
    v.reserve(rows.size());
    for (std::size_t r : rows) v.emplace_back(data.x.at(r, feature), r);
    std::sort(v.begin(), v.end());
    return v;
}

class ClassificationBuilder {
public:
    ClassificationBuilder(const Dataset& data, const TreeConfig& config, std::uint64_t seed)
        : data_(data), config_(config), rng_(seed) {}

    Tree build(std::span<const std::size_t> rows) {
        std::vector<std::size_t> r(rows.begin(), rows.end());
        grow(r, 0);
        return std::move(tree_);
    }

private:
    using Counts = std::array<double, kClassCount>;

    static double gini_mass(const Counts& c, double n) {
        if (n <= 0.0) return 0.0;
        double s = 0.0;
        for (double v : c) s += v * v;
        return n - s / n;  // n * gini
    }

    int grow(std::vector<std::size_t>& rows, int depth) {
        const int index = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        Counts counts{};
        for (std::size_t r : rows) counts[static_cast<std::size_t>(data_.y[r])] += 1.0;
        const double n = static_cast<double>(rows.size());

        auto make_leaf = [&] {
            TreeNode& node = tree_.nodes[static_cast<std::size_t>(index)];
            node.value.resize(kClassCount);
            for (std::size_t k = 0; k < counts.size(); ++k) node.value[k] = counts[k] / n;
            return index;
        };
        const bool pure = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }) <= 1;
        if (pure || depth >= config_.max_depth || rows.size() < config_.min_samples_split) return make_leaf();

        const double parent = gini_mass(counts, n);
        Split best;
        best.score = -HUGE_VAL;
        for (std::size_t f : draw_features(data_.x.cols, config_.max_features, rng_)) {
            const auto sorted = sorted_by(data_, rows, f);
            Counts left{};
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                left[static_cast<std::size_t>(data_.y[sorted[i].second])] += 1.0;
                if (!(sorted[i].first < sorted[i + 1].first)) continue;
                Counts right{};
                for (std::size_t k = 0; k < counts.size(); ++k) right[k] = counts[k] - left[k];
                const double nl = static_cast<double>(i + 1);
                const double score = parent - gini_mass(left, nl) - gini_mass(right, n - nl);
                if (score > best.score) {
                    best = {static_cast<int>(f), midpoint(sorted[i].first, sorted[i + 1].first), score};
                }
            }
        }
        if (best.feature < 0 || !(best.score > kMinGain * n)) return make_leaf();

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows) {
            (data_.x.at(r, static_cast<std::size_t>(best.feature)) <= best.threshold ? left_rows : right_rows).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();
        const int l = grow(left_rows, depth + 1);
        const int r = grow(right_rows, depth + 1);
        TreeNode& node = tree_.nodes[static_cast<std::size_t>(index)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = l;
        node.right = r;
        return index;
    }

    const Dataset& data_;
    TreeConfig config_;
    CounterRng rng_;
    Tree tree_;
};

/// Second-order regression tree: splits maximise G_L^2/(H_L+l) + G_R^2/(H_R+l),
/// leaves output scale * sum(num) / (sum(den) + leaf_lambda).
struct RegressionTask {
    std::span<const double> g;
    std::span<const double> h;
    double split_lambda = 0.0;
    std::span<const double> leaf_num;
    std::span<const double> leaf_den;
    double leaf_lambda = 0.0;
    double leaf_scale = 1.0;
};

class RegressionBuilder {
public:
    RegressionBuilder(const Dataset& data, const RegressionTask& task, int max_depth, std::size_t min_split,
                      std::vector<std::size_t> features)
        : data_(data), task_(task), max_depth_(max_depth), min_split_(min_split), features_(std::move(features)) {}

    Tree build(std::vector<std::size_t> rows) {
        grow(rows, 0);
        return std::move(tree_);
    }

private:
    double gain_term(double g, double h) const {
        const double denom = h + task_.split_lambda;
        return denom > 0.0 ? g * g / denom : 0.0;
    }

    int grow(std::vector<std::size_t>& rows, int depth) {
        const int index = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        double gsum = 0.0, hsum = 0.0;
        for (std::size_t r : rows) {
            gsum += task_.g[r];
            hsum += task_.h[r];
        }
        auto make_leaf = [&] {
            double num = 0.0, den = 0.0;
            for (std::size_t r : rows) {
                num += task_.leaf_num[r];
                den += task_.leaf_den[r];
            }
            den += task_.leaf_lambda;
            tree_.nodes[static_cast<std::size_t>(index)].value = {den > 1e-12 ? task_.leaf_scale * num / den : 0.0};
            return index;
        };
        if (depth >= max_depth_ || rows.size() < min_split_) return make_leaf();

        const double parent = gain_term(gsum, hsum);
        Split best;
        best.score = -HUGE_VAL;
        for (std::size_t f : features_) {
            const auto sorted = sorted_by(data_, rows, f);
            double gl = 0.0, hl = 0.0;
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                gl += task_.g[sorted[i].second];
                hl += task_.h[sorted[i].second];
                if (!(sorted[i].first < sorted[i + 1].first)) continue;
                const double score = gain_term(gl, hl) + gain_term(gsum - gl, hsum - hl) - parent;
                if (score > best.score) {
                    best = {static_cast<int>(f), midpoint(sorted[i].first, sorted[i + 1].first), score};
                }
            }
        }
        if (best.feature < 0 || !(best.score > kMinGain)) return make_leaf();

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows) {
            (data_.x.at(r, static_cast<std::size_t>(best.feature)) <= best.threshold ? left_rows : right_rows).push_back(r);
        }
        const int l = grow(left_rows, depth + 1);
        const int r = grow(right_rows, depth + 1);
        TreeNode& node = tree_.nodes[static_cast<std::size_t>(index)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = l;
        node.right = r;
        return index;
    }

    const Dataset& data_;
    RegressionTask task_;
    int max_depth_;
    std::size_t min_split_;
    std::vector<std::size_t> features_;
    Tree tree_;
};

}  // namespace

Tree fit_classification_tree(const Dataset& data, std::span<const std::size_t> rows, const TreeConfig& config,
                             std::uint64_t seed) {
    if (rows.empty()) raise(ErrorKind::InvalidInput, "tree needs at least one row");
    if (config.max_depth < 0) raise(ErrorKind::Config, "tree depth must be non-negative");
    return ClassificationBuilder(data, config, seed).build(rows);
}

ForestParams fit_forest(const Dataset& data, const ForestConfig& config) {
    const std::size_t n = data.x.rows;
    if (n == 0) raise(ErrorKind::InvalidInput, "forest needs training rows");
    TreeConfig tree_cfg = config.tree;
    if (tree_cfg.max_features == 0) {
        tree_cfg.max_features =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(data.x.cols)))));
    }
    ForestParams forest;
    forest.trees.reserve(config.trees);
    std::vector<std::size_t> rows(n);
    for (std::size_t t = 0; t < config.trees; ++t) {
        if (config.bootstrap) {
            CounterRng rng(derive_key(config.seed, {1, t}));
            for (std::size_t& r : rows) r = rng.index(n);
        } else {
            std::iota(rows.begin(), rows.end(), 0);
        }
        forest.trees.push_back(fit_classification_tree(data, rows, tree_cfg, derive_key(config.seed, {2, t})));
    }
    return forest;
}

Proba forest_proba(const ForestParams& forest, std::span<const double> x) {
    Proba votes{};
    for (const Tree& t : forest.trees) {
        const auto& v = t.evaluate(x);
        Proba p{};
        std::copy(v.begin(), v.end(), p.begin());
        votes[static_cast<std::size_t>(argmax(p))] += 1.0;
    }
    for (double& v : votes) v /= static_cast<double>(forest.trees.size());
    return votes;
}

BoostingParams fit_boosting(const Dataset& data, const BoostingConfig& config) {
    const std::size_t n = data.x.rows;
    const std::size_t d = data.x.cols;
    const auto k_count = static_cast<std::size_t>(kClassCount);
    if (n == 0) raise(ErrorKind::InvalidInput, "boosting needs training rows");
    if (!(config.subsample > 0.0 && config.subsample <= 1.0)) raise(ErrorKind::Config, "subsample must be in (0, 1]");
    if (!(config.colsample > 0.0 && config.colsample <= 1.0)) raise(ErrorKind::Config, "colsample must be in (0, 1]");

    BoostingParams model;
    model.learning_rate = config.learning_rate;
    model.base_score.assign(k_count, 0.0);
    std::vector<double> counts(k_count, 0.0);
    for (int y : data.y) counts[static_cast<std::size_t>(y)] += 1.0;
    for (std::size_t k = 0; k < k_count; ++k) {
        model.base_score[k] = std::log(std::max(counts[k] / static_cast<double>(n), 1e-12));
    }

    std::vector<Proba> scores(n);
    for (auto& s : scores) std::copy(model.base_score.begin(), model.base_score.end(), s.begin());
    std::vector<double> residual(n), hess(n), ones(n, 1.0), plain_den(n);
    const auto sample_n = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(config.subsample * static_cast<double>(n))));
    const auto col_n = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(config.colsample * static_cast<double>(d))));

    std::vector<std::size_t> all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), 0);
    for (std::size_t round = 0; round < config.rounds; ++round) {
        CounterRng row_rng(derive_key(config.seed, {1, round}));
        std::vector<std::size_t> rows = all_rows;
        if (sample_n < n) {
            for (std::size_t i = 0; i < sample_n; ++i) std::swap(rows[i], rows[i + row_rng.index(n - i)]);
            rows.resize(sample_n);
            std::sort(rows.begin(), rows.end());
        }
        std::vector<Proba> probs(n);
        for (std::size_t i = 0; i < n; ++i) probs[i] = softmax(scores[i]);

        std::vector<Tree> round_trees;
        for (std::size_t k = 0; k < k_count; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                const double p = probs[i][k];
                residual[i] = (static_cast<std::size_t>(data.y[i]) == k ? 1.0 : 0.0) - p;
                hess[i] = p * (1.0 - p);
                plain_den[i] = std::abs(residual[i]) * (1.0 - std::abs(residual[i]));
            }
            RegressionTask task;
            std::vector<std::size_t> features;
            if (config.regularized) {
                task = {residual, hess, config.lambda, residual, hess, config.lambda, 1.0};
                CounterRng col_rng(derive_key(config.seed, {2, round, k}));
                features = draw_features(d, col_n, col_rng);
            } else {
                const double scale = static_cast<double>(k_count - 1) / static_cast<double>(k_count);
                task = {residual, ones, 0.0, residual, plain_den, 0.0, scale};
                features.resize(d);
                std::iota(features.begin(), features.end(), 0);
            }
            round_trees.push_back(
                RegressionBuilder(data, task, config.max_depth, config.min_samples_split, std::move(features)).build(rows));
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < k_count; ++k) {
                scores[i][k] += config.learning_rate * round_trees[k].evaluate(data.x.row(i))[0];
            }
        }
        for (Tree& t : round_trees) model.trees.push_back(std::move(t));
    }
    return model;
}

Proba boosting_proba(const BoostingParams& model, std::span<const double> x) {
    Proba s{};
    const auto k_count = static_cast<std::size_t>(kClassCount);
    std::copy(model.base_score.begin(), model.base_score.end(), s.begin());
    for (std::size_t t = 0; t < model.trees.size(); ++t) {
        s[t % k_count] += model.learning_rate * model.trees[t].evaluate(x)[0];
    }
    return softmax(s);
}

}  // namespace dedmon::ml
