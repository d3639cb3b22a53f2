#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dedmon::fusion {

enum class Condition : int { NoHole = 0, Hole3mm = 1, Hole5mm = 2 };
inline constexpr int kConditionCount = 3;
inline constexpr Condition kAllConditions[] = {Condition::NoHole, Condition::Hole3mm, Condition::Hole5mm};

const char* to_string(Condition c);
/// Throws Format for anything but NoHole, Hole3mm, Hole5mm.
Condition parse_condition(std::string_view text);
inline int code(Condition c) { return static_cast<int>(c); }

enum class Provenance { Real, SyntheticSmote, SyntheticNoise };
const char* to_string(Provenance p);
Provenance parse_provenance(std::string_view text);

enum class Modality { Ae, Vision, Other };
const char* to_string(Modality m);

/// AE columns are the names produced by the AE layer aggregation, vision
/// columns the melt-pool layer names; everything else is Other.
Modality modality_of(std::string_view column);

struct RowMeta {
    std::string specimen_id;
    int layer_index = 0;
    Condition label = Condition::NoHole;
    Provenance provenance = Provenance::Real;
};

/// Named numeric columns plus per-row label metadata. Storage is row-major.
class FeatureTable {
public:
    FeatureTable() = default;
    /// Throws Format on duplicate or empty column names.
    explicit FeatureTable(std::vector<std::string> columns);

    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t rows() const { return meta_.size(); }
    std::size_t cols() const { return columns_.size(); }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols(), cols()}; }
    std::span<double> row(std::size_t i) { return {values_.data() + i * cols(), cols()}; }
    double at(std::size_t i, std::size_t j) const { return values_[i * cols() + j]; }
    const RowMeta& meta(std::size_t i) const { return meta_[i]; }
    RowMeta& meta(std::size_t i) { return meta_[i]; }

    /// Throws Schema on width mismatch and Format on non-finite values.
    void add_row(std::span<const double> values, RowMeta meta);

    std::optional<std::size_t> column_index(std::string_view name) const;
    std::vector<double> column(std::size_t j) const;

    /// Columns in the given order. Throws Schema for unknown names.
    FeatureTable select_columns(const std::vector<std::string>& names) const;
    FeatureTable select_rows(std::span<const std::size_t> indices) const;
    /// Appends rows of a table with identical columns.
    void append(const FeatureTable& other);

    std::vector<std::string> columns_of(Modality m) const;
    std::vector<int> labels() const;
    std::vector<std::size_t> class_counts() const;  // indexed by condition code
    std::size_t real_rows() const;

    bool operator==(const FeatureTable& other) const;

private:
    std::vector<std::string> columns_;
    std::vector<double> values_;
    std::vector<RowMeta> meta_;
};

}  // namespace dedmon::fusion
