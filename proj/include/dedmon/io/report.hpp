#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dedmon/fusion/anova.hpp"
#include "dedmon/fusion/table.hpp"
#include "dedmon/io/stamp.hpp"
#include "dedmon/ml/metrics.hpp"
#include "json.hpp"

namespace dedmon::io {

nlohmann::json to_json(const ml::MetricsReport& report, const std::optional<ArtifactStamp>& stamp = std::nullopt);
/// Throws Format on missing or ill-typed fields.
ml::MetricsReport metrics_from_json(const nlohmann::json& j);

/// Aligned plain-text comparison: one line per report with accuracy,
/// binarized precision/recall/F1 and AUC, plus seed statistics when present.
std::string render_metrics_table(const std::vector<ml::MetricsReport>& reports,
                                 const std::optional<ArtifactStamp>& stamp = std::nullopt);

/// Confusion matrix with condition names on both axes.
std::string render_confusion(const ml::MetricsReport& report);

/// feature,modality,f,p in the given order.
std::string anova_csv(const std::vector<fusion::FeatureScore>& scores,
                      const std::optional<ArtifactStamp>& stamp = std::nullopt);

/// classifier,modality,test_rows,accuracy,precision,recall,f1,auc_roc and the
/// macro and seed-averaged columns.
std::string comparison_csv(const std::vector<ml::MetricsReport>& reports,
                           const std::optional<ArtifactStamp>& stamp = std::nullopt);

/// Per feature and condition: count, mean, std, quartiles. Real rows only.
std::string condition_summary_csv(const fusion::FeatureTable& table, const std::vector<std::string>& features,
                                  const std::optional<ArtifactStamp>& stamp = std::nullopt);

/// Per feature, condition and layer: count, mean, std. Real rows only.
std::string layer_evolution_csv(const fusion::FeatureTable& table, const std::vector<std::string>& features,
                                const std::optional<ArtifactStamp>& stamp = std::nullopt);

}  // namespace dedmon::io
