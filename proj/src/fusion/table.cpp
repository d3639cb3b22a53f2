#include "dedmon/fusion/table.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "dedmon/ae/layer_features.hpp"
#include "dedmon/core/error.hpp"
#include "dedmon/vision/melt_pool.hpp"

namespace dedmon::fusion {

const char* to_string(Condition c) {
    switch (c) {
    case Condition::NoHole: return "NoHole";
    case Condition::Hole3mm: return "Hole3mm";
    case Condition::Hole5mm: return "Hole5mm";
    }
    return "?";
}

Condition parse_condition(std::string_view text) {
    for (Condition c : kAllConditions) {
        if (text == to_string(c)) return c;
    }
    raise(ErrorKind::Format, "unknown condition '" + std::string(text) + "'");
}

const char* to_string(Provenance p) {
    switch (p) {
    case Provenance::Real: return "real";
    case Provenance::SyntheticSmote: return "synthetic-smote";
    case Provenance::SyntheticNoise: return "synthetic-noise";
    }
    return "?";
}

Provenance parse_provenance(std::string_view text) {
    for (Provenance p : {Provenance::Real, Provenance::SyntheticSmote, Provenance::SyntheticNoise}) {
        if (text == to_string(p)) return p;
    }
    raise(ErrorKind::Format, "unknown provenance '" + std::string(text) + "'");
}

const char* to_string(Modality m) {
    switch (m) {
    case Modality::Ae: return "ae";
    case Modality::Vision: return "vision";
    case Modality::Other: return "other";
    }
    return "?";
}

Modality modality_of(std::string_view column) {
    static const std::unordered_set<std::string> ae_names(ae::layer_feature_names().begin(),
                                                          ae::layer_feature_names().end());
    static const std::unordered_set<std::string> vision_names(vision::vision_feature_names().begin(),
                                                              vision::vision_feature_names().end());
    const std::string key(column);
    if (ae_names.count(key)) return Modality::Ae;
    if (vision_names.count(key)) return Modality::Vision;
    return Modality::Other;
}

FeatureTable::FeatureTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
    std::unordered_set<std::string> seen;
    for (const auto& c : columns_) {
        if (c.empty()) raise(ErrorKind::Format, "empty column name");
        if (!seen.insert(c).second) raise(ErrorKind::Format, "duplicate column '" + c + "'");
    }
}

void FeatureTable::add_row(std::span<const double> values, RowMeta meta) {
    if (values.size() != cols()) {
        raise(ErrorKind::Schema, "row has " + std::to_string(values.size()) + " values, table has " +
                                     std::to_string(cols()) + " columns");
    }
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (!std::isfinite(values[j])) {
            raise(ErrorKind::Format, "non-finite value in column '" + columns_[j] + "' (" + meta.specimen_id + ")");
        }
    }
    values_.insert(values_.end(), values.begin(), values.end());
    meta_.push_back(std::move(meta));
}

std::optional<std::size_t> FeatureTable::column_index(std::string_view name) const {
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        if (columns_[j] == name) return j;
    }
    return std::nullopt;
}

std::vector<double> FeatureTable::column(std::size_t j) const {
    std::vector<double> out(rows());
    for (std::size_t i = 0; i < rows(); ++i) out[i] = at(i, j);
    return out;
}

FeatureTable FeatureTable::select_columns(const std::vector<std::string>& names) const {
    std::vector<std::size_t> idx;
    idx.reserve(names.size());
    for (const auto& n : names) {
        auto j = column_index(n);
        if (!j) raise(ErrorKind::Schema, "table has no column '" + n + "'");
        idx.push_back(*j);
    }
    FeatureTable out(names);
    out.values_.reserve(rows() * names.size());
    for (std::size_t i = 0; i < rows(); ++i) {
        for (std::size_t j : idx) out.values_.push_back(at(i, j));
    }
    out.meta_ = meta_;
    return out;
}

FeatureTable FeatureTable::select_rows(std::span<const std::size_t> indices) const {
    FeatureTable out(columns_);
    out.values_.reserve(indices.size() * cols());
    for (std::size_t i : indices) {
        if (i >= rows()) raise(ErrorKind::InvalidInput, "row index out of range");
        const auto r = row(i);
        out.values_.insert(out.values_.end(), r.begin(), r.end());
        out.meta_.push_back(meta_[i]);
    }
    return out;
}

void FeatureTable::append(const FeatureTable& other) {
    if (other.columns_ != columns_) raise(ErrorKind::Schema, "cannot append tables with different columns");
    values_.insert(values_.end(), other.values_.begin(), other.values_.end());
    meta_.insert(meta_.end(), other.meta_.begin(), other.meta_.end());
}

std::vector<std::string> FeatureTable::columns_of(Modality m) const {
    std::vector<std::string> out;
    for (const auto& c : columns_) {
        if (modality_of(c) == m) out.push_back(c);
    }
    return out;
}

std::vector<int> FeatureTable::labels() const {
    std::vector<int> out(rows());
    for (std::size_t i = 0; i < rows(); ++i) out[i] = code(meta_[i].label);
    return out;
}

std::vector<std::size_t> FeatureTable::class_counts() const {
    std::vector<std::size_t> counts(kConditionCount, 0);
    for (const auto& m : meta_) ++counts[static_cast<std::size_t>(code(m.label))];
    return counts;
}

std::size_t FeatureTable::real_rows() const {
    return static_cast<std::size_t>(
        std::count_if(meta_.begin(), meta_.end(), [](const RowMeta& m) { return m.provenance == Provenance::Real; }));
}

bool FeatureTable::operator==(const FeatureTable& other) const {
    if (columns_ != other.columns_ || values_ != other.values_ || meta_.size() != other.meta_.size()) return false;
    for (std::size_t i = 0; i < meta_.size(); ++i) {
        const RowMeta &a = meta_[i], &b = other.meta_[i];
        if (a.specimen_id != b.specimen_id || a.layer_index != b.layer_index || a.label != b.label ||
            a.provenance != b.provenance) {
            return false;
        }
    }
    return true;
}

}  // namespace dedmon::fusion
