#include "dedmon/io/manifest.hpp"

#include "dedmon/core/error.hpp"
#include "dedmon/io/files.hpp"
#include "dedmon/io/frames.hpp"

namespace dedmon::io {

namespace fs = std::filesystem;

nlohmann::json to_json(const synth::GroundTruth& truth) {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& l : truth.layers) {
        layers.push_back({{"layer_index", l.layer_index},   {"start_s", l.start_s},
                          {"end_s", l.end_s},               {"start_sample", l.start_sample},
                          {"end_sample", l.end_sample},     {"first_frame", l.first_frame},
                          {"end_frame", l.end_frame},       {"expected_windows", l.expected_windows}});
    }
    return {{"specimen_id", truth.specimen_id},
            {"condition", fusion::to_string(truth.condition)},
            {"specimen_seed", truth.specimen_seed},
            {"layers", layers}};
}

synth::GroundTruth ground_truth_from_json(const nlohmann::json& j) {
    synth::GroundTruth t;
    t.specimen_id = j.at("specimen_id").get<std::string>();
    t.condition = fusion::parse_condition(j.at("condition").get<std::string>());
    t.specimen_seed = j.at("specimen_seed").get<std::uint64_t>();
    for (const auto& l : j.at("layers")) {
        synth::LayerTruth lt;
        lt.layer_index = l.at("layer_index").get<int>();
        lt.start_s = l.at("start_s").get<double>();
        lt.end_s = l.at("end_s").get<double>();
        lt.start_sample = l.at("start_sample").get<std::size_t>();
        lt.end_sample = l.at("end_sample").get<std::size_t>();
        lt.first_frame = l.at("first_frame").get<std::size_t>();
        lt.end_frame = l.at("end_frame").get<std::size_t>();
        lt.expected_windows = l.at("expected_windows").get<std::size_t>();
        t.layers.push_back(lt);
    }
    return t;
}

nlohmann::json to_json(const synth::SynthProfile& p) {
    return {{"name", synth::to_string(p.name)},
            {"sample_rate_hz", p.sample_rate_hz},
            {"fps", p.fps},
            {"layers", p.layers},
            {"layer_active_s", p.layer_active_s},
            {"dwell_s", p.dwell_s},
            {"trim_head_s", p.trim_head_s},
            {"trim_tail_s", p.trim_tail_s},
            {"min_quiet_duration_s", p.min_quiet_duration_s},
            {"frame_width", p.frame_width},
            {"frame_height", p.frame_height},
            {"pixel_size_um", p.pixel_size_um},
            {"specimens_per_condition", p.specimens_per_condition},
            {"seed", p.seed}};
}

void write_manifest(const fs::path& path, const DatasetManifest& m) {
    nlohmann::json specimens = nlohmann::json::array();
    for (const auto& e : m.specimens) {
        nlohmann::json j = {{"id", e.id},
                            {"condition", fusion::to_string(e.condition)},
                            {"ae_file", e.ae_file},
                            {"frames_dir", e.frames_dir},
                            {"checksums", {{"ae_crc32", e.ae_crc32}, {"frames_crc32", e.frames_crc32}}}};
        if (e.ground_truth) j["ground_truth"] = to_json(*e.ground_truth);
        specimens.push_back(std::move(j));
    }
    const nlohmann::json j = {{"schema_version", m.schema_version},
                              {"profile", m.profile},
                              {"seed", m.seed},
                              {"provenance", to_json(m.stamp)},
                              {"specimens", specimens}};
    atomic_write(path, dump(j));
}

DatasetManifest read_manifest(const fs::path& path, bool verify_checksums) {
    const auto j = parse_json(read_file(path), path.string());
    DatasetManifest m;
    try {
        m.schema_version = j.at("schema_version").get<int>();
        if (m.schema_version != kManifestSchemaVersion) {
            raise(ErrorKind::CorruptFile, path.string() + ": unsupported schema_version " + std::to_string(m.schema_version));
        }
        m.profile = j.at("profile");
        m.seed = j.at("seed").get<std::uint64_t>();
        m.stamp = stamp_from_json(j.at("provenance"));
        for (const auto& s : j.at("specimens")) {
            ManifestEntry e;
            e.id = s.at("id").get<std::string>();
            e.condition = fusion::parse_condition(s.at("condition").get<std::string>());
            e.ae_file = s.at("ae_file").get<std::string>();
            e.frames_dir = s.at("frames_dir").get<std::string>();
            e.ae_crc32 = s.at("checksums").at("ae_crc32").get<std::string>();
            e.frames_crc32 = s.at("checksums").at("frames_crc32").get<std::string>();
            if (s.contains("ground_truth")) e.ground_truth = ground_truth_from_json(s.at("ground_truth"));
            m.specimens.push_back(std::move(e));
        }
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorKind::CorruptFile, path.string() + ": " + e.what());
    }
    const fs::path base = path.parent_path();
    for (const auto& e : m.specimens) {
        const fs::path ae = base / e.ae_file;
        const fs::path frames = base / e.frames_dir;
        if (!fs::exists(ae)) raise(ErrorKind::CorruptFile, "manifest references missing " + ae.string());
        if (!fs::is_directory(frames)) raise(ErrorKind::CorruptFile, "manifest references missing " + frames.string());
        if (verify_checksums) {
            if (crc32_hex(crc32_file(ae)) != e.ae_crc32) raise(ErrorKind::CorruptFile, ae.string() + " fails its checksum");
            if (crc32_hex(frame_stream_crc(frames)) != e.frames_crc32) {
                raise(ErrorKind::CorruptFile, frames.string() + " fails its checksum");
            }
        }
    }
    return m;
}

}  // namespace dedmon::io
