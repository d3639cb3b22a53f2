#include "dedmon/fusion/align.hpp"

#include <map>

#include "dedmon/core/error.hpp"

namespace dedmon::fusion {

FeatureTable ae_table(const std::vector<SpecimenFeatures>& specimens) {
    FeatureTable table(ae::layer_feature_names());
    for (const auto& s : specimens) {
        for (const auto& layer : s.ae) {
            table.add_row(layer.values, {s.specimen_id, layer.layer_index, s.condition, Provenance::Real});
        }
    }
    return table;
}

FeatureTable vision_table(const std::vector<SpecimenFeatures>& specimens) {
    FeatureTable table(vision::vision_feature_names());
    for (const auto& s : specimens) {
        for (const auto& layer : s.vision) {
            table.add_row(layer.values, {s.specimen_id, layer.layer_index, s.condition, Provenance::Real});
        }
    }
    return table;
}

std::vector<LayerSample> align_modalities(const std::vector<SpecimenFeatures>& specimens,
                                          const AlignmentConfig& config) {
    std::vector<LayerSample> out;
    for (const auto& s : specimens) {
        const auto n_ae = static_cast<int>(s.ae.size());
        const auto n_vision = static_cast<int>(s.vision.size());
        if (n_ae != config.expected_layers || n_vision != config.expected_layers) {
            raise(ErrorKind::Alignment, "specimen " + s.specimen_id + ": " + std::to_string(n_ae) + " AE layers, " +
                                            std::to_string(n_vision) + " vision layers, expected " +
                                            std::to_string(config.expected_layers));
        }
        for (int k = config.first_kept_layer; k <= config.expected_layers; ++k) {
            const auto i = static_cast<std::size_t>(k - 1);
            LayerSample sample{s.specimen_id, k, s.condition, s.ae[i], s.vision[i]};
            sample.ae.layer_index = k;
            sample.vision.layer_index = k;
            out.push_back(std::move(sample));
        }
    }
    return out;
}

FeatureTable build_feature_table(const std::vector<LayerSample>& samples) {
    std::vector<std::string> columns = ae::layer_feature_names();
    columns.insert(columns.end(), vision::vision_feature_names().begin(), vision::vision_feature_names().end());
    FeatureTable table(columns);
    std::vector<double> row;
    for (const auto& s : samples) {
        row.assign(s.ae.values.begin(), s.ae.values.end());
        row.insert(row.end(), s.vision.values.begin(), s.vision.values.end());
        table.add_row(row, {s.specimen_id, s.layer_index, s.condition, Provenance::Real});
    }
    return table;
}

FeatureTable align_tables(const FeatureTable& ae, const FeatureTable& vision, const AlignmentConfig& config) {
    struct Rows {
        Condition condition = Condition::NoHole;
        std::map<int, std::size_t> ae, vision;
    };
    std::vector<std::string> order;
    std::map<std::string, Rows> by_specimen;
    auto collect = [&](const FeatureTable& t, bool is_ae) {
        for (std::size_t i = 0; i < t.rows(); ++i) {
            const RowMeta& m = t.meta(i);
            auto [it, inserted] = by_specimen.try_emplace(m.specimen_id);
            if (inserted) {
                if (!is_ae) raise(ErrorKind::Alignment, "specimen " + m.specimen_id + " has no AE layers");
                order.push_back(m.specimen_id);
                it->second.condition = m.label;
            } else if (it->second.condition != m.label) {
                raise(ErrorKind::Alignment, "specimen " + m.specimen_id + " carries conflicting condition labels");
            }
            auto& slot = is_ae ? it->second.ae : it->second.vision;
            if (!slot.emplace(m.layer_index, i).second) {
                raise(ErrorKind::Alignment, "specimen " + m.specimen_id + " repeats layer " + std::to_string(m.layer_index));
            }
        }
    };
    collect(ae, true);
    collect(vision, false);

    std::vector<std::string> columns = ae.columns();
    columns.insert(columns.end(), vision.columns().begin(), vision.columns().end());
    FeatureTable out(columns);
    std::vector<double> row;
    for (const auto& id : order) {
        const Rows& r = by_specimen[id];
        const auto n_ae = static_cast<int>(r.ae.size());
        const auto n_vision = static_cast<int>(r.vision.size());
        if (n_ae != config.expected_layers || n_vision != config.expected_layers) {
            raise(ErrorKind::Alignment, "specimen " + id + ": " + std::to_string(n_ae) + " AE layers, " +
                                            std::to_string(n_vision) + " vision layers, expected " +
                                            std::to_string(config.expected_layers));
        }
        for (int k = config.first_kept_layer; k <= config.expected_layers; ++k) {
            auto a = r.ae.find(k);
            auto v = r.vision.find(k);
            if (a == r.ae.end() || v == r.vision.end()) {
                raise(ErrorKind::Alignment, "specimen " + id + " lacks layer " + std::to_string(k));
            }
            row.assign(ae.row(a->second).begin(), ae.row(a->second).end());
            row.insert(row.end(), vision.row(v->second).begin(), vision.row(v->second).end());
            out.add_row(row, {id, k, r.condition, Provenance::Real});
        }
    }
    return out;
}

}  // namespace dedmon::fusion
