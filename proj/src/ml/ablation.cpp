#include "dedmon/ml/ablation.hpp"

#include <algorithm>
#include <cmath>

#include "dedmon/core/error.hpp"
#include "dedmon/core/parallel.hpp"
#include "dedmon/core/rng.hpp"
#include "dedmon/core/stats.hpp"
#include "dedmon/fusion/augment.hpp"

namespace dedmon::ml {

namespace {

constexpr std::uint64_t kStreamSplit = 1;
constexpr std::uint64_t kStreamAugment = 2;
constexpr std::uint64_t kStreamGrid = 3;
constexpr std::uint64_t kStreamModel = 4;

fusion::FeatureTable real_only(const fusion::FeatureTable& table) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < table.rows(); ++i) {
        if (table.meta(i).provenance == fusion::Provenance::Real) rows.push_back(i);
    }
    return table.select_rows(rows);
}

fusion::FeatureTable augment(const fusion::FeatureTable& scaled, const PreprocessConfig& config, std::uint64_t seed) {
    if (!config.augment) return scaled;
    const auto counts = scaled.class_counts();
    const std::size_t max_count = *std::max_element(counts.begin(), counts.end());
    const auto target = static_cast<std::size_t>(std::llround(config.smote_target_multiplier * static_cast<double>(max_count)));
    auto out = fusion::smote_augment(scaled, config.smote_k, target, derive_key(seed, {1}));
    if (config.noise_copies > 0) {
        // Noise copies of the real rows only, appended after the SMOTE rows.
        const auto noisy = fusion::gaussian_perturb(scaled, config.noise_fraction, config.noise_copies, derive_key(seed, {2}));
        std::vector<std::size_t> synthetic;
        for (std::size_t i = 0; i < noisy.rows(); ++i) {
            if (noisy.meta(i).provenance != fusion::Provenance::Real) synthetic.push_back(i);
        }
        out.append(noisy.select_rows(synthetic));
    }
    return out;
}

}  // namespace

const char* to_string(FeatureSet set) {
    switch (set) {
        case FeatureSet::AeOnly: return "ae_only";
        case FeatureSet::CameraOnly: return "camera_only";
        case FeatureSet::Multimodal: return "multimodal";
    }
    return "?";
}

FeatureSet parse_feature_set(std::string_view text) {
    for (FeatureSet s : kAllFeatureSets) {
        if (text == to_string(s)) return s;
    }
    raise(ErrorKind::Config, "unknown feature set '" + std::string(text) + "'");
}

void PreprocessConfig::validate() const {
    if (top_k_ae + top_k_vision == 0) raise(ErrorKind::Config, "feature selection keeps no columns");
    if (smote_k == 0) raise(ErrorKind::Config, "SMOTE needs at least one neighbour");
    if (!(smote_target_multiplier >= 1.0)) raise(ErrorKind::Config, "SMOTE target multiplier must be at least 1");
    if (noise_copies > 0 && !(noise_fraction > 0.0)) raise(ErrorKind::Config, "noise_fraction must be positive");
}

PreparedData prepare_features(const fusion::FeatureTable& train, const fusion::FeatureTable& test, FeatureSet set,
                              const PreprocessConfig& config, std::uint64_t seed) {
    config.validate();
    PreparedData out;
    out.set = set;
    const std::size_t k_ae = set == FeatureSet::CameraOnly ? 0 : config.top_k_ae;
    const std::size_t k_vision = set == FeatureSet::AeOnly ? 0 : config.top_k_vision;
    out.anova = fusion::rank_features(train);
    std::vector<fusion::FeatureScore> candidates;
    for (const auto& s : out.anova) {
        if ((s.modality == fusion::Modality::Ae && k_ae > 0) || (s.modality == fusion::Modality::Vision && k_vision > 0)) {
            candidates.push_back(s);
        }
    }
    out.anova = candidates;
    out.selected = fusion::select_top_features(out.anova, k_ae, k_vision);
    if (out.selected.empty()) raise(ErrorKind::Schema, std::string("no columns available for ") + to_string(set));

    const auto train_sel = train.select_columns(out.selected);
    out.scaler = fusion::zscore_fit(train_sel);
    if (out.scaler.empty()) raise(ErrorKind::Schema, std::string("every selected column is constant for ") + to_string(set));
    out.train = augment(fusion::zscore_apply(out.scaler, train_sel), config, seed);
    out.test = fusion::zscore_apply(out.scaler, test.select_columns(out.selected));
    return out;
}

std::map<ModelKind, Grid> default_grids() {
    return {
        {ModelKind::LogisticRegression, {{"c", {0.1, 1.0}}}},
        {ModelKind::Mlp,
         {{"hidden_layers", {2}}, {"hidden_units", {64}}, {"dropout", {0.15, 0.25}}, {"l2", {0.001}},
          {"learning_rate", {1e-3}}, {"patience", {20}}}},
        {ModelKind::RandomForest, {{"n_estimators", {100}}, {"max_depth", {8, 15}}, {"min_samples_split", {2}}}},
        {ModelKind::GradientBoosting,
         {{"n_estimators", {100}}, {"learning_rate", {0.1}}, {"max_depth", {3}}, {"subsample", {0.8}}}},
    };
}

std::map<ModelKind, Grid> effective_grids(const AblationConfig& config) {
    auto grids = config.grids.empty() ? default_grids() : config.grids;
    for (const auto& [kind, grid] : grids) validate_grid(kind, grid);
    return grids;
}

PreparedSplit prepare_ablation(const fusion::FeatureTable& dataset, const AblationConfig& config, std::uint64_t seed) {
    PreparedSplit result;
    const fusion::FeatureTable real = real_only(dataset);
    const std::uint64_t split_seed = derive_key(seed, {kStreamSplit});

    for (FeatureSet set : kAllFeatureSets) {
        const std::uint64_t aug_seed = derive_key(seed, {kStreamAugment, static_cast<std::uint64_t>(set)});
        PreparedData prepared;
        if (!config.paper_order) {
            result.split = stratified_split(real, config.train_fraction, split_seed);
            prepared = prepare_features(real.select_rows(result.split.train), real.select_rows(result.split.test), set,
                                        config.preprocess, aug_seed);
            for (std::size_t i = 0; i < prepared.test.rows(); ++i) {
                if (prepared.test.meta(i).provenance != fusion::Provenance::Real) {
                    raise(ErrorKind::Split, "synthetic row reached a test split");
                }
            }
        } else {
            // Select, scale and augment on everything, then split the pool.
            auto pooled = prepare_features(real, real.select_rows(std::vector<std::size_t>{}), set, config.preprocess,
                                           aug_seed);
            const auto labels = pooled.train.labels();
            result.split = stratified_split(labels, config.train_fraction, split_seed);
            prepared = pooled;
            prepared.train = pooled.train.select_rows(result.split.train);
            prepared.test = pooled.train.select_rows(result.split.test);
        }
        result.prepared[set] = std::move(prepared);
    }
    return result;
}

TrainedCell train_cell(ModelKind kind, const PreparedData& data, const Grid& grid, const AblationConfig& config,
                       std::uint64_t seed) {
    if (config.mlp_seeds == 0) raise(ErrorKind::Config, "mlp_seeds must be positive");
    TrainedCell cell;
    // Hyperparameters are judged on real training rows so synthetic
    // neighbours never straddle a fold boundary.
    const Dataset real_train = to_dataset(real_only(data.train));
    cell.search = grid_search(kind, grid, real_train, derive_key(seed, {kStreamGrid, static_cast<std::uint64_t>(kind)}),
                              config.cv_folds, 1);

    const Dataset train_set = to_dataset(data.train);
    const std::size_t runs = kind == ModelKind::Mlp ? config.mlp_seeds : 1;
    for (std::size_t run = 0; run < runs; ++run) {
        ModelSpec spec = cell.search.best;
        spec.rng_seed = derive_key(seed, {kStreamModel, static_cast<std::uint64_t>(kind), run});
        TrainedModel model = train(spec, train_set, data.train.columns());
        model.scaler = data.scaler;
        cell.models.push_back(std::move(model));
    }
    return cell;
}

MetricsReport evaluate_cell(ModelKind kind, FeatureSet set, const std::vector<TrainedModel>& models,
                            const fusion::FeatureTable& test, const AblationConfig& config) {
    if (models.empty()) raise(ErrorKind::InvalidInput, "no models to evaluate");
    if (test.columns() != models.front().feature_names) {
        raise(ErrorKind::Schema, "test columns do not match the model's training features");
    }
    const Dataset data = to_dataset(test);
    std::vector<int> layers(test.rows());
    for (std::size_t i = 0; i < layers.size(); ++i) layers[i] = test.meta(i).layer_index;

    MetricsReport out;
    std::vector<double> acc, f1, auc;
    for (std::size_t run = 0; run < models.size(); ++run) {
        // The table is already standardized, so predict on the raw matrix.
        const auto proba = predict_proba(models[run], data.x);
        std::vector<int> pred(proba.size());
        for (std::size_t i = 0; i < proba.size(); ++i) pred[i] = argmax(proba[i]);
        MetricsReport report = classification_metrics(data.y, pred, proba);
        acc.push_back(report.accuracy);
        f1.push_back(report.f1);
        auc.push_back(report.auc_roc);
        if (run == 0) {
            report.per_layer_accuracy = layerwise_accuracy(data.y, pred, layers, config.expected_layers);
            out = std::move(report);
        }
    }
    out.classifier = to_string(kind);
    out.modality = to_string(set);
    if (models.size() > 1) {
        RunStats s;
        s.runs = models.size();
        s.accuracy_mean = stats::mean(acc);
        s.accuracy_std = stats::sample_std(acc);
        s.f1_mean = stats::mean(f1);
        s.f1_std = stats::sample_std(f1);
        s.auc_mean = stats::mean(auc);
        s.auc_std = stats::sample_std(auc);
        out.run_stats = s;
    }
    return out;
}

AblationResult evaluate_ablation(const fusion::FeatureTable& dataset, const AblationConfig& config, std::uint64_t seed) {
    if (config.mlp_seeds == 0) raise(ErrorKind::Config, "mlp_seeds must be positive");
    const auto grids = effective_grids(config);
    PreparedSplit prepared = prepare_ablation(dataset, config, seed);

    AblationResult result;
    result.split = std::move(prepared.split);
    result.prepared = std::move(prepared.prepared);

    for (ModelKind kind : kAllModelKinds) {
        if (!grids.count(kind)) continue;
        for (FeatureSet set : kAllFeatureSets) {
            AblationCell cell;
            cell.kind = kind;
            cell.set = set;
            result.cells.push_back(std::move(cell));
        }
    }
    parallel_for(result.cells.size(), config.jobs, [&](std::size_t j) {
        AblationCell& cell = result.cells[j];
        const PreparedData& data = result.prepared.at(cell.set);
        TrainedCell trained = train_cell(cell.kind, data, grids.at(cell.kind), config, seed);
        cell.search = std::move(trained.search);
        cell.models = std::move(trained.models);
        cell.report = evaluate_cell(cell.kind, cell.set, cell.models, data.test, config);
    });
    return result;
}

}  // namespace dedmon::ml
