#include <gtest/gtest.h>

#include "dedmon/app/config.hpp"
#include "dedmon/core/error.hpp"
#include "dedmon/io/files.hpp"
#include "dedmon/io/stamp.hpp"
#include "test_support.hpp"

using namespace dedmon;
using namespace dedmon::app;
using nlohmann::json;
using synth::ProfileName;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::InvalidInput;
}

}  // namespace

TEST(Config, DefaultsFollowProfile) {
    const auto desk = default_config(ProfileName::Desk);
    EXPECT_EQ(desk.seed, 42u);
    EXPECT_DOUBLE_EQ(desk.extraction.ae_segmentation.min_quiet_duration_s, 1.2);
    EXPECT_DOUBLE_EQ(desk.extraction.ae_segmentation.trim_head_s, 1.0);
    EXPECT_DOUBLE_EQ(desk.extraction.vision_segmentation.trim_tail_s, 0.5);
    const auto large = default_config(ProfileName::PaperScale);
    EXPECT_DOUBLE_EQ(large.extraction.ae_segmentation.min_quiet_duration_s, 4.5);
    EXPECT_DOUBLE_EQ(large.profile.layer_active_s, 40.0);
    EXPECT_EQ(desk.ablation.preprocess.top_k_ae, 20u);
    EXPECT_EQ(desk.ablation.grids.size(), 4u);
    EXPECT_NO_THROW(desk.validate());
    EXPECT_NO_THROW(large.validate());
}

TEST(Config, JsonRoundTripPreservesEverything) {
    auto c = default_config(ProfileName::Desk);
    c.seed = 7;
    c.profile.seed = 7;
    c.profile.specimens_per_condition = 3;
    c.ablation.mlp_seeds = 2;
    c.ablation.grids[ml::ModelKind::LogisticRegression] = {{"c", {0.5}}};
    const auto j = to_json(c);
    const auto back = config_from_json(j, ProfileName::PaperScale);
    EXPECT_EQ(io::dump(to_json(back)), io::dump(j));
    EXPECT_EQ(config_hash(back), config_hash(c));
    EXPECT_NE(config_hash(back), config_hash(default_config(ProfileName::Desk)));
    auto jobs = c;
    jobs.ablation.jobs = 8;
    EXPECT_EQ(config_hash(jobs), config_hash(c));
}

TEST(Config, UnknownAndIllTypedKeysAreConfigErrors) {
    EXPECT_EQ(kind_of([] { config_from_json(json{{"sed", 1}}, ProfileName::Desk); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { config_from_json(json{{"synth", {{"layerz", 5}}}}, ProfileName::Desk); }),
              ErrorKind::Config);
    EXPECT_EQ(kind_of([] { config_from_json(json{{"seed", "x"}}, ProfileName::Desk); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([] { config_from_json(json{{"ml", {{"grids", {{"svm", json::object()}}}}}}, ProfileName::Desk); }),
              ErrorKind::Config);
    EXPECT_EQ(kind_of([] {
                  auto c = config_from_json(json{{"ml", {{"grids", {{"mlp", {{"hidden_layers", {1}}}}}}}}},
                                            ProfileName::Desk);
                  c.validate();
              }),
              ErrorKind::Config);
    EXPECT_EQ(kind_of([] {
                  auto c = config_from_json(json{{"synth", {{"dwell_s", 1.0}}}}, ProfileName::Desk);
                  c.validate();
              }),
              ErrorKind::Config);
}

TEST(Config, CommandLineOverridesWinOverFile) {
    dedmon::testing::TempDir dir("config");
    const auto path = dir.path() / "c.json";
    io::atomic_write(path, std::string_view(R"({"seed": 9, "synth": {"profile": "paper_scale", "specimens_per_condition": 2}})"));
    const auto file_only = load_config(path, std::nullopt, std::nullopt);
    EXPECT_EQ(file_only.seed, 9u);
    EXPECT_EQ(file_only.profile.seed, 9u);
    EXPECT_EQ(file_only.profile.name, ProfileName::PaperScale);
    EXPECT_EQ(file_only.profile.specimens_per_condition, 2);

    const auto over = load_config(path, ProfileName::Desk, 11);
    EXPECT_EQ(over.seed, 11u);
    EXPECT_EQ(over.profile.seed, 11u);
    EXPECT_EQ(over.profile.name, ProfileName::Desk);
    EXPECT_DOUBLE_EQ(over.profile.layer_active_s, 6.0);
    EXPECT_EQ(over.profile.specimens_per_condition, 2);

    io::atomic_write(path, std::string_view("{not json"));
    EXPECT_EQ(kind_of([&] { load_config(path, std::nullopt, std::nullopt); }), ErrorKind::Config);
    EXPECT_EQ(kind_of([&] { load_config(dir.path() / "absent.json", std::nullopt, std::nullopt); }), ErrorKind::Config);
}

TEST(Config, EditedProfileRetunesSegmentation) {
    const auto c = config_from_json(json{{"synth", {{"trim_head_s", 0.5}, {"layer_active_s", 3.0}}}}, ProfileName::Desk);
    EXPECT_DOUBLE_EQ(c.extraction.ae_segmentation.trim_head_s, 0.5);
    EXPECT_DOUBLE_EQ(c.extraction.vision_segmentation.trim_head_s, 0.5);
    const auto explicit_seg =
        config_from_json(json{{"synth", {{"trim_head_s", 0.5}}}, {"ae", {{"segmentation", {{"trim_head_s", 0.8}}}}}},
                         ProfileName::Desk);
    EXPECT_DOUBLE_EQ(explicit_seg.extraction.ae_segmentation.trim_head_s, 0.8);
}
