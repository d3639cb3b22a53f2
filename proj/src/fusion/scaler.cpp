#include "dedmon/fusion/scaler.hpp"

#include <cmath>

#include "dedmon/core/error.hpp"
#include "dedmon/core/log.hpp"
#include "dedmon/core/stats.hpp"

namespace dedmon::fusion {

ScalerParams zscore_fit(const FeatureTable& table) {
    if (table.rows() < 2) raise(ErrorKind::InvalidInput, "z-score fit needs at least two rows");
    ScalerParams params;
    params.fitted_on = table.rows();
    for (std::size_t j = 0; j < table.cols(); ++j) {
        const auto col = table.column(j);
        const double mean = stats::mean(col);
        const double sd = stats::sample_std(col);
        if (!(sd > 1e-12 * std::max(std::abs(mean), 1e-300))) {
            params.dropped.push_back(table.columns()[j]);
            warn("dropping zero-variance feature '" + table.columns()[j] + "'");
            continue;
        }
        params.names.push_back(table.columns()[j]);
        params.means.push_back(mean);
        params.stds.push_back(sd);
    }
    return params;
}

FeatureTable zscore_apply(const ScalerParams& params, const FeatureTable& table) {
    FeatureTable selected = table.select_columns(params.names);
    FeatureTable out(params.names);
    std::vector<double> buf(params.names.size());
    for (std::size_t i = 0; i < selected.rows(); ++i) {
        const auto r = selected.row(i);
        for (std::size_t j = 0; j < buf.size(); ++j) buf[j] = (r[j] - params.means[j]) / params.stds[j];
        out.add_row(buf, selected.meta(i));
    }
    return out;
}

}  // namespace dedmon::fusion
