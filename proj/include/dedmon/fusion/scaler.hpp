#pragma once

#include <string>
#include <vector>

#include "dedmon/fusion/table.hpp"

namespace dedmon::fusion {

struct ScalerParams {
    std::vector<std::string> names;  // kept columns, in output order
    std::vector<double> means;
    std::vector<double> stds;        // n-1, all positive
    std::vector<std::string> dropped;  // zero training variance
    std::size_t fitted_on = 0;

    bool empty() const { return names.empty(); }
};

/// Fits on every row of `table`; pass training rows only.
ScalerParams zscore_fit(const FeatureTable& table);

/// Output has exactly params.names as columns. Throws Schema when a column
/// is missing from the input.
FeatureTable zscore_apply(const ScalerParams& params, const FeatureTable& table);

}  // namespace dedmon::fusion
