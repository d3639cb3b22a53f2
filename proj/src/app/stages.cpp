#include "dedmon/app/stages.hpp"

#include <cstdio>

#include "dedmon/app/extract.hpp"
#include "dedmon/core/error.hpp"
#include "dedmon/core/log.hpp"
#include "dedmon/core/parallel.hpp"
#include "dedmon/fusion/anova.hpp"
#include "dedmon/io/csv.hpp"
#include "dedmon/io/files.hpp"
#include "dedmon/io/frames.hpp"
#include "dedmon/io/manifest.hpp"
#include "dedmon/io/model_io.hpp"
#include "dedmon/io/report.hpp"
#include "dedmon/io/waveform.hpp"
#include "dedmon/ml/ablation.hpp"

namespace dedmon::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cell_name(ml::ModelKind kind, ml::FeatureSet set) {
    return std::string(ml::to_string(kind)) + "_" + ml::to_string(set);
}

/// Paths inside a run directory.
struct Layout {
    fs::path root;
    fs::path manifest() const { return root / "manifest.json"; }
    fs::path features(const std::string& name) const { return root / "features" / name; }
    fs::path fusion_dir(ml::FeatureSet set) const { return root / "fusion" / ml::to_string(set); }
    fs::path models() const { return root / "models"; }
    fs::path eval() const { return root / "eval"; }
    fs::path report() const { return root / "report"; }
};

void write_json(const fs::path& path, const json& j) { io::atomic_write(path, io::dump(j)); }

json read_json(const fs::path& path) { return io::parse_json(io::read_file(path), path.string()); }

template <class F>
auto with_data_context(const std::string& what, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        raise(ErrorKind::Format, what + ": " + e.what());
    }
}

json grid_search_json(const ml::GridSearchResult& r) {
    json points = json::array();
    for (const auto& p : r.points) {
        points.push_back(
            {{"hyperparameters", p.hyper}, {"fold_accuracy", p.fold_accuracy}, {"mean_accuracy", p.mean_accuracy},
             {"parameter_count", p.size}});
    }
    return {{"kind", ml::to_string(r.best.kind)},
            {"best_index", r.best_index},
            {"best_hyperparameters", r.best.hyper},
            {"points", points}};
}

json rows_json(const fusion::FeatureTable& t) {
    json rows = json::array();
    for (std::size_t i = 0; i < t.rows(); ++i) {
        const auto& m = t.meta(i);
        rows.push_back({{"specimen_id", m.specimen_id},
                        {"layer_index", m.layer_index},
                        {"condition", fusion::to_string(m.label)},
                        {"provenance", fusion::to_string(m.provenance)}});
    }
    return rows;
}

io::DatasetManifest load_manifest(const StageContext& ctx) { return io::read_manifest(Layout{ctx.in}.manifest()); }

std::string segments_csv(const std::vector<std::string>& ids, const std::vector<std::vector<std::array<double, 2>>>& spans,
                         const char* unit, const io::ArtifactStamp& stamp) {
    std::string out = "# " + io::to_comment(stamp) + "\nspecimen_id,layer_index," + unit + "_begin," + unit + "_end\n";
    for (std::size_t s = 0; s < ids.size(); ++s) {
        for (std::size_t l = 0; l < spans[s].size(); ++l) {
            out += ids[s] + "," + std::to_string(l + 1) + "," + io::format_double(spans[s][l][0]) + "," +
                   io::format_double(spans[s][l][1]) + "\n";
        }
    }
    return out;
}

}  // namespace

io::ArtifactStamp StageContext::stamp() const { return io::make_stamp(config_hash(config), config.seed); }

void run_synth(const StageContext& ctx) {
    const Layout out{ctx.out};
    const auto& profile = ctx.config.profile;
    const auto keys = synth::dataset_keys(profile);
    const auto stamp = ctx.stamp();
    io::DatasetManifest manifest;
    manifest.profile = io::to_json(profile);
    manifest.seed = profile.seed;
    manifest.stamp = stamp;
    manifest.specimens.resize(keys.size());

    parallel_for(keys.size(), ctx.jobs, [&](std::size_t i) {
        const auto specimen = synth::generate_specimen(profile, keys[i], ctx.config.generator);
        const std::string id = synth::specimen_id(keys[i]);
        const fs::path rel = fs::path("specimens") / id;
        const fs::path dir = ctx.out / rel;
        // Stale frames from an earlier, longer run would break contiguity.
        std::error_code ec;
        fs::remove_all(dir / "frames", ec);
        io::write_waveform(dir / "ae.f32", specimen.ae, stamp);
        io::write_frame_stream(dir / "frames", specimen.frames, stamp);

        io::ManifestEntry& e = manifest.specimens[i];
        e.id = id;
        e.condition = keys[i].condition;
        e.ae_file = (rel / "ae.f32").generic_string();
        e.frames_dir = (rel / "frames").generic_string();
        e.ground_truth = specimen.truth;
        e.ae_crc32 = io::crc32_hex(io::crc32_file(dir / "ae.f32"));
        e.frames_crc32 = io::crc32_hex(io::frame_stream_crc(dir / "frames"));
    });
    io::write_manifest(out.manifest(), manifest);
}

void run_ae(const StageContext& ctx) {
    const auto manifest = load_manifest(ctx);
    const auto& entries = manifest.specimens;
    std::vector<fusion::SpecimenFeatures> specimens(entries.size());
    std::vector<std::vector<std::array<double, 2>>> spans(entries.size());
    std::vector<std::string> ids(entries.size());
    parallel_for(entries.size(), ctx.jobs, [&](std::size_t i) {
        const auto& e = entries[i];
        const auto recording = io::read_waveform(ctx.in / e.ae_file, e.ae_crc32);
        AeExtraction ae;
        try {
            ae = extract_ae(recording, ctx.config.extraction);
        } catch (const Error& err) {
            raise(err.kind(), "specimen " + e.id + ": " + err.what());
        }
        specimens[i] = {e.id, e.condition, ae.layers, {}};
        ids[i] = e.id;
        for (const auto& iv : ae.detection.intervals) {
            spans[i].push_back({recording.start_time_s + static_cast<double>(iv.begin) / recording.sample_rate_hz,
                                recording.start_time_s + static_cast<double>(iv.end) / recording.sample_rate_hz});
        }
    });
    const Layout out{ctx.out};
    const auto stamp = ctx.stamp();
    io::write_feature_table(out.features("ae.csv"), fusion::ae_table(specimens), stamp);
    io::atomic_write(out.features("ae_segments.csv"), segments_csv(ids, spans, "time_s", stamp));
}

void run_vision(const StageContext& ctx) {
    const auto manifest = load_manifest(ctx);
    const auto& entries = manifest.specimens;
    std::vector<fusion::SpecimenFeatures> specimens(entries.size());
    std::vector<std::vector<std::array<double, 2>>> spans(entries.size());
    std::vector<std::string> ids(entries.size());
    parallel_for(entries.size(), ctx.jobs, [&](std::size_t i) {
        const auto& e = entries[i];
        const auto stream = io::read_frame_stream(ctx.in / e.frames_dir, e.frames_crc32);
        VisionExtraction v;
        try {
            v = extract_vision(stream, ctx.config.extraction);
        } catch (const Error& err) {
            raise(err.kind(), "specimen " + e.id + ": " + err.what());
        }
        specimens[i] = {e.id, e.condition, {}, v.layers};
        ids[i] = e.id;
        for (const auto& r : v.detection.ranges) {
            spans[i].push_back({static_cast<double>(r.begin), static_cast<double>(r.end)});
        }
    });
    const Layout out{ctx.out};
    const auto stamp = ctx.stamp();
    io::write_feature_table(out.features("vision.csv"), fusion::vision_table(specimens), stamp);
    io::atomic_write(out.features("vision_segments.csv"), segments_csv(ids, spans, "frame", stamp));
}

void run_fuse(const StageContext& ctx) {
    const Layout in{ctx.in};
    const Layout out{ctx.out};
    const auto stamp = ctx.stamp();
    const auto ae = io::read_feature_table(in.features("ae.csv"));
    const auto vision = io::read_feature_table(in.features("vision.csv"));
    const auto fused = fusion::align_tables(ae, vision, ctx.config.alignment);
    io::write_feature_table(out.features("fused.csv"), fused, stamp);

    const auto prepared = ml::prepare_ablation(fused, ctx.config.ablation, ctx.config.seed);
    const auto& reference = prepared.prepared.at(ml::FeatureSet::Multimodal);
    write_json(ctx.out / "fusion" / "split.json",
               {{"paper_order", ctx.config.ablation.paper_order},
                {"train_fraction", ctx.config.ablation.train_fraction},
                {"train_indices", prepared.split.train},
                {"test_indices", prepared.split.test},
                {"test_rows", rows_json(reference.test)},
                {"stamp", io::to_json(stamp)}});
    for (const auto& [set, data] : prepared.prepared) {
        const fs::path dir = out.fusion_dir(set);
        io::atomic_write(dir / "anova.csv", io::anova_csv(data.anova, stamp));
        write_json(dir / "scaler.json", {{"scaler", io::to_json(data.scaler)},
                                         {"selected", data.selected},
                                         {"stamp", io::to_json(stamp)}});
        io::write_feature_table(dir / "train.csv", data.train, stamp);
        io::write_feature_table(dir / "test.csv", data.test, stamp);
    }
}

namespace {

ml::PreparedData load_prepared(const Layout& in, ml::FeatureSet set) {
    ml::PreparedData data;
    data.set = set;
    const fs::path dir = in.fusion_dir(set);
    const json scaler = read_json(dir / "scaler.json");
    with_data_context((dir / "scaler.json").string(), [&] {
        data.scaler = io::scaler_from_json(scaler.at("scaler"));
        data.selected = scaler.at("selected").get<std::vector<std::string>>();
        return 0;
    });
    data.train = io::read_feature_table(dir / "train.csv");
    data.test = io::read_feature_table(dir / "test.csv");
    if (data.train.columns() != data.scaler.names || data.test.columns() != data.scaler.names) {
        raise(ErrorKind::Schema, "fusion tables under " + dir.string() + " disagree with their scaler");
    }
    return data;
}

struct CellPlan {
    ml::ModelKind kind;
    ml::FeatureSet set;
};

std::vector<CellPlan> plan_cells(const std::map<ml::ModelKind, ml::Grid>& grids) {
    std::vector<CellPlan> cells;
    for (ml::ModelKind kind : ml::kAllModelKinds) {
        if (!grids.count(kind)) continue;
        for (ml::FeatureSet set : ml::kAllFeatureSets) cells.push_back({kind, set});
    }
    return cells;
}

}  // namespace

void run_train(const StageContext& ctx) {
    const Layout in{ctx.in};
    const Layout out{ctx.out};
    const auto stamp = ctx.stamp();
    const auto grids = ml::effective_grids(ctx.config.ablation);
    std::map<ml::FeatureSet, ml::PreparedData> prepared;
    for (ml::FeatureSet set : ml::kAllFeatureSets) prepared[set] = load_prepared(in, set);

    const auto cells = plan_cells(grids);
    std::vector<json> index(cells.size());
    parallel_for(cells.size(), ctx.jobs, [&](std::size_t c) {
        const auto [kind, set] = cells[c];
        const auto trained = ml::train_cell(kind, prepared.at(set), grids.at(kind), ctx.config.ablation, ctx.config.seed);
        const std::string name = cell_name(kind, set);
        json files = json::array();
        for (std::size_t r = 0; r < trained.models.size(); ++r) {
            const std::string file = name + "_run" + std::to_string(r) + ".json";
            io::write_model(out.models() / file, trained.models[r], stamp);
            files.push_back(file);
        }
        json search = grid_search_json(trained.search);
        search["stamp"] = io::to_json(stamp);
        write_json(out.models() / (name + "_search.json"), search);
        index[c] = {{"classifier", ml::to_string(kind)},
                    {"modality", ml::to_string(set)},
                    {"models", files},
                    {"search", name + "_search.json"}};
    });
    write_json(out.models() / "index.json", {{"cells", index}, {"stamp", io::to_json(stamp)}});
}

void run_eval(const StageContext& ctx) {
    const Layout in{ctx.in};
    const Layout out{ctx.out};
    const auto stamp = ctx.stamp();
    const json index = read_json(in.models() / "index.json");
    struct Cell {
        ml::ModelKind kind;
        ml::FeatureSet set;
        std::vector<std::string> files;
    };
    const auto cells = with_data_context("models/index.json", [&] {
        std::vector<Cell> v;
        for (const auto& c : index.at("cells")) {
            try {
                v.push_back({ml::parse_model_kind(c.at("classifier").get<std::string>()),
                             ml::parse_feature_set(c.at("modality").get<std::string>()),
                             c.at("models").get<std::vector<std::string>>()});
            } catch (const Error& e) {
                raise(ErrorKind::Format, std::string("models/index.json: ") + e.what());
            }
        }
        return v;
    });

    std::map<ml::FeatureSet, fusion::FeatureTable> tests;
    for (const auto& c : cells) {
        if (!tests.count(c.set)) tests[c.set] = io::read_feature_table(in.fusion_dir(c.set) / "test.csv");
    }
    std::vector<ml::MetricsReport> reports(cells.size());
    parallel_for(cells.size(), ctx.jobs, [&](std::size_t i) {
        std::vector<ml::TrainedModel> models;
        for (const auto& f : cells[i].files) models.push_back(io::read_model(in.models() / f));
        reports[i] = ml::evaluate_cell(cells[i].kind, cells[i].set, models, tests.at(cells[i].set), ctx.config.ablation);
    });

    std::string confusion;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        write_json(out.eval() / (cell_name(cells[i].kind, cells[i].set) + ".json"), io::to_json(reports[i], stamp));
        confusion += io::render_confusion(reports[i]) + "\n";
    }
    io::atomic_write(out.eval() / "summary.txt", io::render_metrics_table(reports, stamp) + "\n" + confusion);
}

void run_report(const StageContext& ctx) {
    const Layout in{ctx.in};
    const Layout out{ctx.out};
    const auto stamp = ctx.stamp();
    std::vector<ml::MetricsReport> reports;
    for (ml::ModelKind kind : ml::kAllModelKinds) {
        for (ml::FeatureSet set : ml::kAllFeatureSets) {
            const fs::path p = in.eval() / (cell_name(kind, set) + ".json");
            if (fs::exists(p)) reports.push_back(io::metrics_from_json(read_json(p)));
        }
    }
    if (reports.empty()) raise(ErrorKind::CorruptFile, "no metrics reports under " + in.eval().string());
    io::atomic_write(out.report() / "comparison.csv", io::comparison_csv(reports, stamp));

    fusion::FeatureTable fused = io::read_feature_table(in.features("fused.csv"));
    std::vector<std::size_t> real;
    for (std::size_t i = 0; i < fused.rows(); ++i) {
        if (fused.meta(i).provenance == fusion::Provenance::Real) real.push_back(i);
    }
    fused = fused.select_rows(real);
    io::atomic_write(out.report() / "anova.csv", io::anova_csv(fusion::rank_features(fused), stamp));
    std::vector<std::string> features;
    for (const auto& c : fused.columns()) {
        if (fusion::modality_of(c) != fusion::Modality::Other) features.push_back(c);
    }
    io::atomic_write(out.report() / "condition_summary.csv", io::condition_summary_csv(fused, features, stamp));
    io::atomic_write(out.report() / "layer_evolution.csv", io::layer_evolution_csv(fused, features, stamp));
}

void run_pipeline(StageContext ctx) {
    ctx.in = ctx.out;
    run_synth(ctx);
    run_ae(ctx);
    run_vision(ctx);
    run_fuse(ctx);
    run_train(ctx);
    run_eval(ctx);
    run_report(ctx);
}

}  // namespace dedmon::app
