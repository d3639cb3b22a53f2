#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace dedmon::io {

const char* tool_version();

/// Identifies what produced an artifact.
struct ArtifactStamp {
    std::string tool_version;
    std::string config_hash;
    std::uint64_t seed = 0;
    bool operator==(const ArtifactStamp&) const = default;
};

ArtifactStamp make_stamp(const std::string& config_hash, std::uint64_t seed);
nlohmann::json to_json(const ArtifactStamp& stamp);
ArtifactStamp stamp_from_json(const nlohmann::json& j);
/// One-line form used in CSV comment headers.
std::string to_comment(const ArtifactStamp& stamp);

/// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string hash_json(const nlohmann::json& j);

/// Two-space indented dump with a trailing newline.
std::string dump(const nlohmann::json& j);

/// Parses JSON text, raising `kind` with the path in the message on failure.
nlohmann::json parse_json(const std::string& text, const std::string& origin);

}  // namespace dedmon::io
