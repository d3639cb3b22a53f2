#pragma once

#include <vector>

#include "dedmon/ml/model.hpp"

namespace dedmon::ml {

struct LogisticConfig {
    double c = 1.0;  // inverse L2 strength
    double tolerance = 1e-6;  // gradient norm
    std::size_t max_iterations = 5000;
};

struct LogisticFit {
    LogisticParams params;
    std::vector<double> loss_history;  // one entry per accepted iterate, starting at the initial point
    bool converged = false;
};

/// Multinomial logistic regression minimising mean cross-entropy plus
/// ||W||^2 / (2 C n) with full-batch gradient descent. Each step backtracks
/// until the Armijo condition holds, so the loss never increases.
LogisticFit fit_logistic(const Dataset& data, const LogisticConfig& config);

/// Objective and gradient (weights then bias, row-major) at `params`.
double logistic_loss(const LogisticParams& params, const Dataset& data, double c, std::vector<double>* gradient);

Proba logistic_proba(const LogisticParams& params, std::span<const double> x);

/// Numerically stable softmax.
Proba softmax(const Proba& logits);

}  // namespace dedmon::ml
