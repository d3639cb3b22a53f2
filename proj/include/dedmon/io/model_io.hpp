#pragma once

#include <filesystem>
#include <optional>

#include "dedmon/io/stamp.hpp"
#include "dedmon/ml/model.hpp"
#include "json.hpp"

namespace dedmon::io {

inline constexpr int kModelSchemaVersion = 1;

/// Doubles are written in shortest round-trip form, so reading the result
/// back yields bit-identical parameters.
nlohmann::json to_json(const ml::TrainedModel& model, const std::optional<ArtifactStamp>& stamp = std::nullopt);
/// Throws Format on a wrong schema version, kind or shape.
ml::TrainedModel model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const fusion::ScalerParams& scaler);
fusion::ScalerParams scaler_from_json(const nlohmann::json& j);

void write_model(const std::filesystem::path& path, const ml::TrainedModel& model,
                 const std::optional<ArtifactStamp>& stamp = std::nullopt);
ml::TrainedModel read_model(const std::filesystem::path& path);

}  // namespace dedmon::io
