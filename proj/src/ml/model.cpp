#include "dedmon/ml/model.hpp"

#include <cmath>
#include <sstream>

#include "dedmon/core/error.hpp"
#include "dedmon/ml/logistic.hpp"
#include "dedmon/ml/mlp.hpp"
#include "dedmon/ml/tree.hpp"

namespace dedmon::ml {

namespace {

struct Bound {
    double lo;
    double hi;
    bool integer;
};

const std::map<std::string, Bound>& trainable_bounds(ModelKind kind) {
    static const std::map<std::string, Bound> logistic = {{"c", {1e-12, 1e12, false}},
                                                          {"max_iterations", {1, 1e7, true}}};
    static const std::map<std::string, Bound> mlp = {
        {"hidden_layers", {1, 16, true}}, {"hidden_units", {1, 4096, true}}, {"l2", {0, 1e3, false}},
        {"dropout", {0, 0.95, false}},    {"learning_rate", {1e-12, 10, false}}, {"batch_size", {1, 1e6, true}},
        {"max_epochs", {1, 1e6, true}},   {"patience", {1, 1e6, true}}};
    static const std::map<std::string, Bound> forest = {
        {"n_estimators", {1, 1e5, true}},    {"max_depth", {1, 64, true}}, {"min_samples_split", {2, 1e6, true}},
        {"max_features", {0, 1e6, true}},    {"bootstrap", {0, 1, true}}};
    static const std::map<std::string, Bound> boosting = {
        {"n_estimators", {1, 1e5, true}},     {"learning_rate", {1e-12, 10, false}}, {"max_depth", {1, 64, true}},
        {"min_samples_split", {2, 1e6, true}}, {"subsample", {1e-6, 1, false}},      {"regularized", {0, 1, true}},
        {"lambda", {0, 1e6, false}},          {"colsample", {1e-6, 1, false}}};
    switch (kind) {
        case ModelKind::LogisticRegression: return logistic;
        case ModelKind::Mlp: return mlp;
        case ModelKind::RandomForest: return forest;
        case ModelKind::GradientBoosting: return boosting;
    }
    return logistic;
}

std::size_t full_tree_nodes(int depth) { return (std::size_t{1} << (depth + 1)) - 1; }

Proba proba_row(const TrainedModel& model, std::span<const double> x) {
    return std::visit(
        [&](const auto& p) -> Proba {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, LogisticParams>) return logistic_proba(p, x);
            if constexpr (std::is_same_v<T, MlpParams>) return mlp_proba(p, x);
            if constexpr (std::is_same_v<T, ForestParams>) return forest_proba(p, x);
            if constexpr (std::is_same_v<T, BoostingParams>) return boosting_proba(p, x);
        },
        model.params);
}

}  // namespace

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::LogisticRegression: return "logistic_regression";
        case ModelKind::Mlp: return "mlp";
        case ModelKind::RandomForest: return "random_forest";
        case ModelKind::GradientBoosting: return "gradient_boosting";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view text) {
    for (ModelKind k : kAllModelKinds) {
        if (text == to_string(k)) return k;
    }
    raise(ErrorKind::Config, "unknown classifier '" + std::string(text) + "'");
}

const Hyperparameters& default_hyperparameters(ModelKind kind) {
    static const Hyperparameters logistic = {{"c", 1.0}, {"max_iterations", 5000}};
    static const Hyperparameters mlp = {{"hidden_layers", 2}, {"hidden_units", 64},  {"l2", 0.001},
                                        {"dropout", 0.2},     {"learning_rate", 1e-3}, {"batch_size", 16},
                                        {"max_epochs", 500},  {"patience", 20}};
    static const Hyperparameters forest = {
        {"n_estimators", 100}, {"max_depth", 10}, {"min_samples_split", 2}, {"max_features", 0}, {"bootstrap", 1}};
    static const Hyperparameters boosting = {{"n_estimators", 100}, {"learning_rate", 0.1}, {"max_depth", 3},
                                             {"min_samples_split", 2}, {"subsample", 0.8},   {"regularized", 0},
                                             {"lambda", 1.0},         {"colsample", 0.8}};
    switch (kind) {
        case ModelKind::LogisticRegression: return logistic;
        case ModelKind::Mlp: return mlp;
        case ModelKind::RandomForest: return forest;
        case ModelKind::GradientBoosting: return boosting;
    }
    return logistic;
}

double ModelSpec::get(const std::string& name) const {
    if (auto it = hyper.find(name); it != hyper.end()) return it->second;
    const auto& defaults = default_hyperparameters(kind);
    if (auto it = defaults.find(name); it != defaults.end()) return it->second;
    raise(ErrorKind::Config, std::string(to_string(kind)) + " has no hyperparameter '" + name + "'");
}

int ModelSpec::get_int(const std::string& name) const { return static_cast<int>(std::llround(get(name))); }

std::string ModelSpec::describe() const {
    std::ostringstream out;
    out << to_string(kind) << " {";
    bool first = true;
    for (const auto& [k, v] : hyper) {
        out << (first ? "" : ", ") << k << "=" << v;
        first = false;
    }
    out << "} seed=" << rng_seed;
    return out.str();
}

void validate(const ModelSpec& spec) {
    const auto& bounds = trainable_bounds(spec.kind);
    for (const auto& [name, value] : spec.hyper) {
        auto it = bounds.find(name);
        if (it == bounds.end()) {
            raise(ErrorKind::Config, std::string(to_string(spec.kind)) + " has no hyperparameter '" + name + "'");
        }
        const Bound& b = it->second;
        if (!std::isfinite(value) || value < b.lo || value > b.hi || (b.integer && value != std::round(value))) {
            raise(ErrorKind::Config, "hyperparameter " + name + " out of range in " + spec.describe());
        }
    }
}

Dataset to_dataset(const fusion::FeatureTable& table) {
    Dataset d;
    d.x = Matrix(table.rows(), table.cols());
    for (std::size_t i = 0; i < table.rows(); ++i) {
        const auto r = table.row(i);
        std::copy(r.begin(), r.end(), d.x.data.begin() + static_cast<std::ptrdiff_t>(i * table.cols()));
    }
    d.y = table.labels();
    return d;
}

Dataset subset(const Dataset& data, std::span<const std::size_t> rows) {
    Dataset d;
    d.x = Matrix(rows.size(), data.x.cols);
    d.y.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto r = data.x.row(rows[i]);
        std::copy(r.begin(), r.end(), d.x.data.begin() + static_cast<std::ptrdiff_t>(i * data.x.cols));
        d.y.push_back(data.y[rows[i]]);
    }
    return d;
}

const std::vector<double>& Tree::evaluate(std::span<const double> x) const {
    std::size_t i = 0;
    while (nodes[i].feature >= 0) {
        const TreeNode& n = nodes[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return nodes[i].value;
}

int Tree::depth() const {
    std::vector<int> d(nodes.size(), 0);
    int best = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        best = std::max(best, d[i]);
        if (nodes[i].feature >= 0) {
            d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
            d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
        }
    }
    return best;
}

TrainedModel train(const ModelSpec& spec, const fusion::FeatureTable& table) {
    return train(spec, to_dataset(table), table.columns());
}

TrainedModel train(const ModelSpec& spec, const Dataset& data, std::vector<std::string> feature_names) {
    validate(spec);
    if (data.x.rows == 0 || data.x.cols == 0) raise(ErrorKind::InvalidInput, "training set is empty");
    if (feature_names.size() != data.x.cols) raise(ErrorKind::Schema, "feature names do not match training width");
    for (int label : data.y) {
        if (label < 0 || label >= kClassCount) raise(ErrorKind::InvalidInput, "label outside the three conditions");
    }

    TrainedModel model;
    model.spec = spec;
    model.feature_names = std::move(feature_names);
    model.metadata.train_rows = data.x.rows;
    switch (spec.kind) {
        case ModelKind::LogisticRegression: {
            LogisticConfig cfg;
            cfg.c = spec.get("c");
            cfg.max_iterations = static_cast<std::size_t>(spec.get_int("max_iterations"));
            auto fit = fit_logistic(data, cfg);
            model.metadata.iterations = fit.loss_history.size() - 1;
            model.metadata.final_loss = fit.loss_history.back();
            model.metadata.converged = fit.converged;
            model.params = std::move(fit.params);
            break;
        }
        case ModelKind::Mlp: {
            MlpConfig cfg;
            cfg.hidden.assign(static_cast<std::size_t>(spec.get_int("hidden_layers")),
                              static_cast<std::size_t>(spec.get_int("hidden_units")));
            cfg.l2 = spec.get("l2");
            cfg.dropout = spec.get("dropout");
            cfg.learning_rate = spec.get("learning_rate");
            cfg.batch_size = static_cast<std::size_t>(spec.get_int("batch_size"));
            cfg.max_epochs = static_cast<std::size_t>(spec.get_int("max_epochs"));
            cfg.patience = static_cast<std::size_t>(spec.get_int("patience"));
            cfg.seed = spec.rng_seed;
            MlpFit fit;
            try {
                fit = fit_mlp(data, cfg);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::TrainingDiverged) {
                    raise(ErrorKind::TrainingDiverged, std::string(e.what()) + " [" + spec.describe() + "]");
                }
                throw;
            }
            model.metadata.iterations = fit.epochs_run;
            model.metadata.best_epoch = fit.best_epoch;
            model.metadata.final_loss = fit.best_validation_loss;
            model.metadata.converged = fit.stopped_early;
            model.params = std::move(fit.params);
            break;
        }
        case ModelKind::RandomForest: {
            ForestConfig cfg;
            cfg.trees = static_cast<std::size_t>(spec.get_int("n_estimators"));
            cfg.tree.max_depth = spec.get_int("max_depth");
            cfg.tree.min_samples_split = static_cast<std::size_t>(spec.get_int("min_samples_split"));
            cfg.tree.max_features = static_cast<std::size_t>(spec.get_int("max_features"));
            cfg.bootstrap = spec.get_int("bootstrap") != 0;
            cfg.seed = spec.rng_seed;
            auto forest = fit_forest(data, cfg);
            model.metadata.iterations = forest.trees.size();
            model.params = std::move(forest);
            break;
        }
        case ModelKind::GradientBoosting: {
            BoostingConfig cfg;
            cfg.rounds = static_cast<std::size_t>(spec.get_int("n_estimators"));
            cfg.learning_rate = spec.get("learning_rate");
            cfg.max_depth = spec.get_int("max_depth");
            cfg.min_samples_split = static_cast<std::size_t>(spec.get_int("min_samples_split"));
            cfg.subsample = spec.get("subsample");
            cfg.regularized = spec.get_int("regularized") != 0;
            cfg.lambda = spec.get("lambda");
            cfg.colsample = spec.get("colsample");
            cfg.seed = spec.rng_seed;
            auto boost = fit_boosting(data, cfg);
            model.metadata.iterations = cfg.rounds;
            model.params = std::move(boost);
            break;
        }
    }
    return model;
}

std::vector<Proba> predict_proba(const TrainedModel& model, const fusion::FeatureTable& table) {
    if (table.columns() != model.feature_names) {
        raise(ErrorKind::Schema, "input columns do not match the model's " + std::to_string(model.feature_names.size()) +
                                     " training features");
    }
    if (model.scaler) {
        const auto scaled = fusion::zscore_apply(*model.scaler, table);
        return predict_proba(model, to_dataset(scaled).x);
    }
    return predict_proba(model, to_dataset(table).x);
}

std::vector<Proba> predict_proba(const TrainedModel& model, const Matrix& x) {
    if (x.cols != model.feature_names.size()) raise(ErrorKind::Schema, "input width does not match the model");
    std::vector<Proba> out(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) out[i] = proba_row(model, x.row(i));
    return out;
}

int argmax(const Proba& p) {
    int best = 0;
    for (int k = 1; k < kClassCount; ++k) {
        if (p[static_cast<std::size_t>(k)] > p[static_cast<std::size_t>(best)]) best = k;
    }
    return best;
}

std::vector<int> predict(const TrainedModel& model, const fusion::FeatureTable& table) {
    std::vector<int> out;
    for (const Proba& p : predict_proba(model, table)) out.push_back(argmax(p));
    return out;
}

std::size_t parameter_count(const ModelSpec& spec, std::size_t features) {
    const auto k = static_cast<std::size_t>(kClassCount);
    switch (spec.kind) {
        case ModelKind::LogisticRegression: return k * (features + 1);
        case ModelKind::Mlp: {
            const auto units = static_cast<std::size_t>(spec.get_int("hidden_units"));
            const auto layers = static_cast<std::size_t>(spec.get_int("hidden_layers"));
            std::size_t n = units * (features + 1);
            for (std::size_t l = 1; l < layers; ++l) n += units * (units + 1);
            return n + k * (units + 1);
        }
        // Trees: upper bound on the node count.
        case ModelKind::RandomForest:
            return static_cast<std::size_t>(spec.get_int("n_estimators")) * full_tree_nodes(spec.get_int("max_depth"));
        case ModelKind::GradientBoosting:
            return static_cast<std::size_t>(spec.get_int("n_estimators")) * k *
                   full_tree_nodes(spec.get_int("max_depth"));
    }
    return 0;
}

}  // namespace dedmon::ml
