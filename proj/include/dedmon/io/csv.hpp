#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "dedmon/fusion/table.hpp"
#include "dedmon/io/stamp.hpp"

namespace dedmon::io {

/// Reserved leading columns of every feature CSV.
inline constexpr const char* kReservedColumns[] = {"specimen_id", "layer_index", "condition", "provenance"};

/// Header row, then one line per row; numbers use the shortest text that
/// parses back to the same double. An optional stamp goes into a leading
/// `# ` comment line.
std::string to_csv(const fusion::FeatureTable& table, const std::optional<ArtifactStamp>& stamp = std::nullopt);

/// Skips `#` comment lines. Throws Format on duplicate or missing header
/// names, unknown conditions, non-finite or unparsable cells.
fusion::FeatureTable from_csv(const std::string& text);

void write_feature_table(const std::filesystem::path& path, const fusion::FeatureTable& table,
                         const std::optional<ArtifactStamp>& stamp = std::nullopt);
fusion::FeatureTable read_feature_table(const std::filesystem::path& path);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace dedmon::io
