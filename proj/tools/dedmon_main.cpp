#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dedmon/app/config.hpp"
#include "dedmon/app/stages.hpp"
#include "dedmon/core/error.hpp"
#include "dedmon/io/files.hpp"
#include "dedmon/io/stamp.hpp"

namespace {

using namespace dedmon;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config: return kExitConfig;
        case ErrorKind::TrainingDiverged:
        case ErrorKind::Io: return kExitRuntime;
        default: return kExitData;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Multimodal defect monitoring: synthetic data, feature extraction, fusion and classification"};
    cli.set_version_flag("--version", std::string(io::tool_version()));
    cli.require_subcommand(1);

    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> profile_name;
    std::string out_dir = "run";
    std::optional<std::string> in_dir;
    std::size_t jobs = 1;
    bool paper_order = false;

    cli.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    cli.add_option("--seed", seed, "Master seed (overrides the config)");
    cli.add_option("--profile", profile_name, "Generator profile")->check(CLI::IsMember({"desk", "paper_scale"}));
    cli.add_option("--out", out_dir, "Output directory")->capture_default_str();
    cli.add_option("--in", in_dir, "Input run directory (defaults to --out)");
    cli.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    cli.add_flag("--paper-order", paper_order, "Augment before splitting (leaks synthetic neighbours into test)");

    using Stage = std::function<void(const app::StageContext&)>;
    const std::vector<std::tuple<std::string, std::string, Stage>> stages{
        {"synth", "Generate the synthetic dataset", app::run_synth},
        {"ae", "Recordings to AE feature CSV", app::run_ae},
        {"vision", "Frame streams to vision feature CSV", app::run_vision},
        {"fuse", "Align, split, select, scale and augment", app::run_fuse},
        {"train", "Grid search and fit every classifier", app::run_train},
        {"eval", "Metrics JSON and text tables", app::run_eval},
        {"report", "Comparison, ANOVA and per-condition summaries as CSV", app::run_report},
        {"pipeline", "Every stage end to end", [](const app::StageContext& c) { app::run_pipeline(c); }},
    };
    std::map<const CLI::App*, Stage> handlers;
    for (const auto& [name, help, fn] : stages) {
        CLI::App* sub = cli.add_subcommand(name, help);
        sub->fallthrough();
        handlers[sub] = fn;
    }

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return cli.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << cli.help();
        return kExitConfig;
    }

    try {
        app::StageContext ctx;
        std::optional<synth::ProfileName> profile;
        if (profile_name) profile = synth::parse_profile(*profile_name);
        std::optional<std::filesystem::path> path;
        if (config_path) path = *config_path;
        ctx.config = app::load_config(path, profile, seed);
        if (paper_order) ctx.config.ablation.paper_order = true;
        ctx.config.ablation.jobs = jobs;
        ctx.out = out_dir;
        ctx.in = in_dir ? std::filesystem::path(*in_dir) : ctx.out;
        ctx.jobs = jobs;

        nlohmann::json resolved = app::to_json(ctx.config);
        resolved["stamp"] = io::to_json(ctx.stamp());
        io::atomic_write(ctx.out / "config.json", io::dump(resolved));

        for (const auto& [sub, fn] : handlers) {
            if (sub->parsed()) fn(ctx);
        }
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
