#include "dedmon/io/model_io.hpp"

#include <cmath>

#include "dedmon/core/error.hpp"
#include "dedmon/io/files.hpp"

namespace dedmon::io {

namespace {

using nlohmann::json;

void require_finite(const std::vector<double>& values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) raise(ErrorKind::Format, std::string("cannot serialize non-finite ") + what);
    }
}

json matrix_json(const ml::Matrix& m) {
    require_finite(m.data, "matrix entry");
    return {{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

ml::Matrix matrix_from(const json& j) {
    ml::Matrix m;
    m.rows = j.at("rows").get<std::size_t>();
    m.cols = j.at("cols").get<std::size_t>();
    m.data = j.at("data").get<std::vector<double>>();
    if (m.data.size() != m.rows * m.cols) raise(ErrorKind::Format, "matrix data does not match its shape");
    return m;
}

json tree_json(const ml::Tree& tree) {
    // Column-oriented to keep files compact.
    json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
         value = json::array();
    for (const auto& n : tree.nodes) {
        require_finite(n.value, "tree value");
        if (!std::isfinite(n.threshold)) raise(ErrorKind::Format, "cannot serialize non-finite threshold");
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        value.push_back(n.value);
    }
    return {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"value", value}};
}

ml::Tree tree_from(const json& j) {
    const auto feature = j.at("feature").get<std::vector<int>>();
    const auto threshold = j.at("threshold").get<std::vector<double>>();
    const auto left = j.at("left").get<std::vector<int>>();
    const auto right = j.at("right").get<std::vector<int>>();
    const auto value = j.at("value").get<std::vector<std::vector<double>>>();
    const std::size_t n = feature.size();
    if (threshold.size() != n || left.size() != n || right.size() != n || value.size() != n || n == 0) {
        raise(ErrorKind::Format, "tree columns differ in length");
    }
    ml::Tree tree;
    tree.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& node = tree.nodes[i];
        node = {feature[i], threshold[i], left[i], right[i], value[i]};
        if (node.feature >= 0) {
            const auto in_range = [&](int c) { return c > static_cast<int>(i) && c < static_cast<int>(n); };
            if (!in_range(node.left) || !in_range(node.right)) raise(ErrorKind::Format, "tree child index out of range");
        } else if (node.value.empty()) {
            raise(ErrorKind::Format, "tree leaf without a value");
        }
    }
    return tree;
}

json trees_json(const std::vector<ml::Tree>& trees) {
    json out = json::array();
    for (const auto& t : trees) out.push_back(tree_json(t));
    return out;
}

std::vector<ml::Tree> trees_from(const json& j) {
    std::vector<ml::Tree> out;
    for (const auto& t : j) out.push_back(tree_from(t));
    return out;
}

json params_json(const ml::ModelParams& params) {
    return std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ml::LogisticParams>) {
                require_finite(p.bias, "bias");
                return {{"weights", matrix_json(p.weights)}, {"bias", p.bias}};
            } else if constexpr (std::is_same_v<T, ml::MlpParams>) {
                json layers = json::array();
                for (const auto& l : p.layers) {
                    require_finite(l.bias, "bias");
                    layers.push_back({{"weights", matrix_json(l.weights)}, {"bias", l.bias}});
                }
                return {{"layers", layers}};
            } else if constexpr (std::is_same_v<T, ml::ForestParams>) {
                return {{"trees", trees_json(p.trees)}};
            } else {
                require_finite(p.base_score, "base score");
                return {{"base_score", p.base_score}, {"learning_rate", p.learning_rate}, {"trees", trees_json(p.trees)}};
            }
        },
        params);
}

ml::ModelParams params_from(ml::ModelKind kind, const json& j) {
    switch (kind) {
        case ml::ModelKind::LogisticRegression: {
            ml::LogisticParams p;
            p.weights = matrix_from(j.at("weights"));
            p.bias = j.at("bias").get<std::vector<double>>();
            if (p.weights.rows != static_cast<std::size_t>(ml::kClassCount) || p.bias.size() != p.weights.rows) {
                raise(ErrorKind::Format, "logistic parameters have the wrong shape");
            }
            return p;
        }
        case ml::ModelKind::Mlp: {
            ml::MlpParams p;
            for (const auto& l : j.at("layers")) {
                ml::DenseLayer layer{matrix_from(l.at("weights")), l.at("bias").get<std::vector<double>>()};
                if (layer.bias.size() != layer.weights.rows) raise(ErrorKind::Format, "MLP bias has the wrong length");
                if (!p.layers.empty() && p.layers.back().weights.rows != layer.weights.cols) {
                    raise(ErrorKind::Format, "MLP layer widths do not chain");
                }
                p.layers.push_back(std::move(layer));
            }
            if (p.layers.empty() || p.layers.back().weights.rows != static_cast<std::size_t>(ml::kClassCount)) {
                raise(ErrorKind::Format, "MLP output layer has the wrong width");
            }
            return p;
        }
        case ml::ModelKind::RandomForest: return ml::ForestParams{trees_from(j.at("trees"))};
        case ml::ModelKind::GradientBoosting: {
            ml::BoostingParams p;
            p.base_score = j.at("base_score").get<std::vector<double>>();
            p.learning_rate = j.at("learning_rate").get<double>();
            p.trees = trees_from(j.at("trees"));
            if (p.base_score.size() != static_cast<std::size_t>(ml::kClassCount) ||
                p.trees.size() % static_cast<std::size_t>(ml::kClassCount) != 0) {
                raise(ErrorKind::Format, "boosting parameters have the wrong shape");
            }
            return p;
        }
    }
    raise(ErrorKind::Format, "unknown model kind");
}

}  // namespace

nlohmann::json to_json(const fusion::ScalerParams& s) {
    require_finite(s.means, "scaler mean");
    require_finite(s.stds, "scaler std");
    return {{"names", s.names}, {"means", s.means}, {"stds", s.stds}, {"dropped", s.dropped}, {"fitted_on", s.fitted_on}};
}

fusion::ScalerParams scaler_from_json(const nlohmann::json& j) {
    try {
        fusion::ScalerParams s;
        s.names = j.at("names").get<std::vector<std::string>>();
        s.means = j.at("means").get<std::vector<double>>();
        s.stds = j.at("stds").get<std::vector<double>>();
        s.dropped = j.at("dropped").get<std::vector<std::string>>();
        s.fitted_on = j.at("fitted_on").get<std::size_t>();
        if (s.means.size() != s.names.size() || s.stds.size() != s.names.size()) {
            raise(ErrorKind::Format, "scaler arrays differ in length");
        }
        for (double sd : s.stds) {
            if (!(sd > 0.0)) raise(ErrorKind::Format, "scaler std must be positive");
        }
        return s;
    } catch (const json::exception& e) {
        raise(ErrorKind::Format, std::string("malformed scaler: ") + e.what());
    }
}

nlohmann::json to_json(const ml::TrainedModel& model, const std::optional<ArtifactStamp>& stamp) {
    json j = {{"schema_version", kModelSchemaVersion},
              {"kind", ml::to_string(model.spec.kind)},
              {"hyperparameters", model.spec.hyper},
              {"rng_seed", model.spec.rng_seed},
              {"feature_names", model.feature_names},
              {"scaler", model.scaler ? to_json(*model.scaler) : json(nullptr)},
              {"params", params_json(model.params)},
              {"metadata",
               {{"train_rows", model.metadata.train_rows},
                {"iterations", model.metadata.iterations},
                {"best_epoch", model.metadata.best_epoch},
                {"final_loss", std::isfinite(model.metadata.final_loss) ? json(model.metadata.final_loss) : json(nullptr)},
                {"converged", model.metadata.converged}}}};
    if (stamp) j["stamp"] = to_json(*stamp);
    return j;
}

ml::TrainedModel model_from_json(const nlohmann::json& j) {
    try {
        if (j.at("schema_version").get<int>() != kModelSchemaVersion) {
            raise(ErrorKind::Format, "unsupported model schema version");
        }
        ml::TrainedModel m;
        try {
            m.spec.kind = ml::parse_model_kind(j.at("kind").get<std::string>());
        } catch (const Error& e) {
            raise(ErrorKind::Format, e.what());
        }
        m.spec.hyper = j.at("hyperparameters").get<ml::Hyperparameters>();
        m.spec.rng_seed = j.at("rng_seed").get<std::uint64_t>();
        m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        if (!j.at("scaler").is_null()) {
            m.scaler = scaler_from_json(j.at("scaler"));
            if (m.scaler->names != m.feature_names) raise(ErrorKind::Format, "scaler columns differ from the features");
        }
        m.params = params_from(m.spec.kind, j.at("params"));
        const auto& md = j.at("metadata");
        m.metadata.train_rows = md.at("train_rows").get<std::size_t>();
        m.metadata.iterations = md.at("iterations").get<std::size_t>();
        m.metadata.best_epoch = md.at("best_epoch").get<std::size_t>();
        m.metadata.final_loss = md.at("final_loss").is_null() ? std::nan("") : md.at("final_loss").get<double>();
        m.metadata.converged = md.at("converged").get<bool>();

        const std::size_t width = m.feature_names.size();
        if (const auto* p = std::get_if<ml::LogisticParams>(&m.params); p && p->weights.cols != width) {
            raise(ErrorKind::Format, "logistic weights do not match the feature count");
        }
        if (const auto* p = std::get_if<ml::MlpParams>(&m.params); p && p->layers.front().weights.cols != width) {
            raise(ErrorKind::Format, "MLP input width does not match the feature count");
        }
        const auto check_trees = [&](const std::vector<ml::Tree>& trees) {
            for (const auto& t : trees) {
                for (const auto& n : t.nodes) {
                    if (n.feature >= static_cast<int>(width)) raise(ErrorKind::Format, "tree splits on a missing feature");
                }
            }
        };
        if (const auto* p = std::get_if<ml::ForestParams>(&m.params)) check_trees(p->trees);
        if (const auto* p = std::get_if<ml::BoostingParams>(&m.params)) check_trees(p->trees);
        return m;
    } catch (const json::exception& e) {
        raise(ErrorKind::Format, std::string("malformed model: ") + e.what());
    }
}

void write_model(const std::filesystem::path& path, const ml::TrainedModel& model,
                 const std::optional<ArtifactStamp>& stamp) {
    atomic_write(path, dump(to_json(model, stamp)));
}

ml::TrainedModel read_model(const std::filesystem::path& path) {
    return model_from_json(parse_json(read_file(path), path.string()));
}

}  // namespace dedmon::io
