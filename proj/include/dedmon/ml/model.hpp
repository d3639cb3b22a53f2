#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dedmon/fusion/scaler.hpp"
#include "dedmon/fusion/table.hpp"

namespace dedmon::ml {

inline constexpr int kClassCount = fusion::kConditionCount;
using Proba = std::array<double, kClassCount>;

enum class ModelKind { LogisticRegression, Mlp, RandomForest, GradientBoosting };
inline constexpr ModelKind kAllModelKinds[] = {ModelKind::LogisticRegression, ModelKind::Mlp,
                                               ModelKind::RandomForest, ModelKind::GradientBoosting};
const char* to_string(ModelKind kind);
/// Accepts logistic_regression, mlp, random_forest, gradient_boosting.
ModelKind parse_model_kind(std::string_view text);

/// Named numeric hyperparameters; integers are stored as whole doubles.
using Hyperparameters = std::map<std::string, double>;

struct ModelSpec {
    ModelKind kind = ModelKind::LogisticRegression;
    Hyperparameters hyper;
    std::uint64_t rng_seed = 0;

    /// Value of `name`, falling back to the kind's default.
    double get(const std::string& name) const;
    int get_int(const std::string& name) const;
    std::string describe() const;
};

/// Every hyperparameter a kind reads, at its default value.
const Hyperparameters& default_hyperparameters(ModelKind kind);

/// Throws Config for unknown names or values that cannot train.
void validate(const ModelSpec& spec);

/// Dense row-major matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
    bool operator==(const Matrix&) const = default;
};

struct Dataset {
    Matrix x;
    std::vector<int> y;
};

Dataset to_dataset(const fusion::FeatureTable& table);
Dataset subset(const Dataset& data, std::span<const std::size_t> rows);

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;  // go left when x[feature] <= threshold
    int left = -1;
    int right = -1;
    std::vector<double> value;  // class fractions or a single regression output
    bool operator==(const TreeNode&) const = default;
};

struct Tree {
    std::vector<TreeNode> nodes;  // root first
    const std::vector<double>& evaluate(std::span<const double> x) const;
    int depth() const;
    bool operator==(const Tree&) const = default;
};

struct LogisticParams {
    Matrix weights;  // classes x features
    std::vector<double> bias;
    bool operator==(const LogisticParams&) const = default;
};

struct DenseLayer {
    Matrix weights;  // outputs x inputs
    std::vector<double> bias;
    bool operator==(const DenseLayer&) const = default;
};

struct MlpParams {
    std::vector<DenseLayer> layers;  // hidden layers (ReLU) then the softmax layer
    bool operator==(const MlpParams&) const = default;
};

struct ForestParams {
    std::vector<Tree> trees;
    bool operator==(const ForestParams&) const = default;
};

struct BoostingParams {
    std::vector<double> base_score;  // per class
    double learning_rate = 0.1;
    std::vector<Tree> trees;  // round-major, one tree per class per round
    bool operator==(const BoostingParams&) const = default;
};

using ModelParams = std::variant<LogisticParams, MlpParams, ForestParams, BoostingParams>;

struct TrainingMetadata {
    std::size_t train_rows = 0;
    std::size_t iterations = 0;  // epochs, solver iterations or boosting rounds
    std::size_t best_epoch = 0;  // early-stopping restore point (MLP)
    double final_loss = 0.0;
    bool converged = false;
    bool operator==(const TrainingMetadata&) const = default;
};

struct TrainedModel {
    ModelSpec spec;
    std::vector<std::string> feature_names;
    /// When present, predict_proba standardizes its input with these params.
    std::optional<fusion::ScalerParams> scaler;
    ModelParams params;
    TrainingMetadata metadata;
};

/// Fits the model on every row of `table` (labels from the row metadata).
/// Throws TrainingDiverged when the loss leaves the finite range.
TrainedModel train(const ModelSpec& spec, const fusion::FeatureTable& table);
TrainedModel train(const ModelSpec& spec, const Dataset& data, std::vector<std::string> feature_names);

/// Rejects tables whose columns differ from the model's feature list.
std::vector<Proba> predict_proba(const TrainedModel& model, const fusion::FeatureTable& table);
std::vector<Proba> predict_proba(const TrainedModel& model, const Matrix& x);

/// Argmax of predict_proba, ties to the lower class code.
std::vector<int> predict(const TrainedModel& model, const fusion::FeatureTable& table);
int argmax(const Proba& p);

/// Learned scalar count (weights and biases, or tree nodes) used to break
/// grid-search ties in favour of smaller models.
std::size_t parameter_count(const ModelSpec& spec, std::size_t features);

}  // namespace dedmon::ml
