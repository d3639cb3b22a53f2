#include "dedmon/io/stamp.hpp"

#include <cstdio>

#include "dedmon/core/error.hpp"

#ifndef DEDMON_VERSION
#define DEDMON_VERSION "0.0.0"
#endif

namespace dedmon::io {

const char* tool_version() { return "dedmon " DEDMON_VERSION; }

ArtifactStamp make_stamp(const std::string& config_hash, std::uint64_t seed) {
    return ArtifactStamp{tool_version(), config_hash, seed};
}

nlohmann::json to_json(const ArtifactStamp& stamp) {
    return {{"tool_version", stamp.tool_version}, {"config_hash", stamp.config_hash}, {"seed", stamp.seed}};
}

ArtifactStamp stamp_from_json(const nlohmann::json& j) {
    try {
        return ArtifactStamp{j.at("tool_version").get<std::string>(), j.at("config_hash").get<std::string>(),
                             j.at("seed").get<std::uint64_t>()};
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorKind::Format, std::string("bad artifact stamp: ") + e.what());
    }
}

std::string to_comment(const ArtifactStamp& stamp) {
    return "tool_version=" + stamp.tool_version + " config_hash=" + stamp.config_hash +
           " seed=" + std::to_string(stamp.seed);
}

std::string hash_json(const nlohmann::json& j) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : j.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json parse_json(const std::string& text, const std::string& origin) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        raise(ErrorKind::Format, origin + " is not valid JSON: " + e.what());
    }
}

}  // namespace dedmon::io
