#include "dedmon/ml/grid_search.hpp"

#include <algorithm>
#include <cmath>

#include "dedmon/core/error.hpp"
#include "dedmon/core/parallel.hpp"
#include "dedmon/core/rng.hpp"
#include "dedmon/ml/split.hpp"

namespace dedmon::ml {

namespace {

struct Range {
    double lo;
    double hi;
};

/// Searchable ranges; names outside this table may take any trainable value.
std::map<std::string, Range> search_ranges(ModelKind kind, bool regularized) {
    switch (kind) {
        case ModelKind::LogisticRegression: return {{"c", {0.01, 1.0}}};
        case ModelKind::Mlp:
            return {{"hidden_layers", {2, 4}}, {"hidden_units", {16, 128}}, {"dropout", {0.15, 0.35}},
                    {"l2", {0.001, 0.01}},     {"learning_rate", {1e-4, 1e-3}}, {"patience", {10, 30}}};
        case ModelKind::RandomForest:
            return {{"n_estimators", {30, 200}}, {"max_depth", {3, 15}}, {"min_samples_split", {2, 10}}};
        case ModelKind::GradientBoosting:
            if (regularized) {
                return {{"n_estimators", {30, 150}}, {"learning_rate", {0.01, 0.1}}, {"max_depth", {2, 6}},
                        {"subsample", {0.5, 0.8}},   {"colsample", {0.5, 0.8}}};
            }
            return {{"n_estimators", {30, 200}}, {"learning_rate", {0.01, 0.2}}, {"max_depth", {3, 8}},
                    {"subsample", {0.6, 1.0}}};
    }
    return {};
}

bool hyper_less(const Hyperparameters& a, const Hyperparameters& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

std::vector<Hyperparameters> expand_grid(const Grid& grid) {
    std::vector<Hyperparameters> points{{}};
    for (const auto& [name, values] : grid) {
        std::vector<Hyperparameters> next;
        for (const auto& base : points) {
            for (double v : values) {
                Hyperparameters h = base;
                h[name] = v;
                next.push_back(std::move(h));
            }
        }
        points = std::move(next);
    }
    return points;
}

void validate_grid(ModelKind kind, const Grid& grid) {
    if (grid.empty()) raise(ErrorKind::Config, std::string("empty grid for ") + to_string(kind));
    for (const auto& [name, values] : grid) {
        if (values.empty()) raise(ErrorKind::Config, "grid entry " + name + " has no values");
    }
    for (const auto& hyper : expand_grid(grid)) {
        ModelSpec spec{kind, hyper, 0};
        validate(spec);
        const bool regularized = kind == ModelKind::GradientBoosting && spec.get_int("regularized") != 0;
        for (const auto& [name, range] : search_ranges(kind, regularized)) {
            const double v = spec.get(name);
            if (v < range.lo - 1e-12 || v > range.hi + 1e-12) {
                raise(ErrorKind::Config, std::string(to_string(kind)) + " grid value " + name + "=" +
                                             std::to_string(v) + " outside the searchable range");
            }
        }
    }
}

GridSearchResult grid_search(ModelKind kind, const Grid& grid, const Dataset& train, std::uint64_t seed,
                             std::size_t folds, std::size_t jobs) {
    validate_grid(kind, grid);
    const auto fold_tests = stratified_folds(train.y, folds, derive_key(seed, {0x6376}));
    std::vector<Dataset> fold_train, fold_test;
    for (const auto& test : fold_tests) {
        const auto rows = complement(train.y.size(), test);
        fold_train.push_back(subset(train, rows));
        fold_test.push_back(subset(train, test));
    }

    GridSearchResult result;
    const auto hypers = expand_grid(grid);
    result.points.resize(hypers.size());
    for (std::size_t i = 0; i < hypers.size(); ++i) {
        result.points[i].hyper = hypers[i];
        result.points[i].fold_accuracy.assign(folds, 0.0);
        result.points[i].size = parameter_count(ModelSpec{kind, hypers[i], seed}, train.x.cols);
    }
    std::vector<std::string> names(train.x.cols);
    for (std::size_t j = 0; j < names.size(); ++j) names[j] = "f" + std::to_string(j);

    parallel_for(hypers.size() * folds, jobs, [&](std::size_t task) {
        const std::size_t p = task / folds, f = task % folds;
        const ModelSpec spec{kind, hypers[p], seed};
        const TrainedModel model = ml::train(spec, fold_train[f], names);
        const auto proba = predict_proba(model, fold_test[f].x);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < proba.size(); ++i) correct += static_cast<std::size_t>(argmax(proba[i]) == fold_test[f].y[i]);
        result.points[p].fold_accuracy[f] = static_cast<double>(correct) / static_cast<double>(proba.size());
    });

    for (auto& pt : result.points) {
        double s = 0.0;
        for (double a : pt.fold_accuracy) s += a;
        pt.mean_accuracy = s / static_cast<double>(folds);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < result.points.size(); ++i) {
        const auto& a = result.points[i];
        const auto& b = result.points[best];
        if (a.mean_accuracy != b.mean_accuracy) {
            if (a.mean_accuracy > b.mean_accuracy) best = i;
        } else if (a.size != b.size) {
            if (a.size < b.size) best = i;
        } else if (hyper_less(a.hyper, b.hyper)) {
            best = i;
        }
    }
    result.best_index = best;
    result.best = ModelSpec{kind, result.points[best].hyper, seed};
    return result;
}

}  // namespace dedmon::ml
