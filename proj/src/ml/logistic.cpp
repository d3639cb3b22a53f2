#include "dedmon/ml/logistic.hpp"

#include <algorithm>
#include <cmath>

#include "dedmon/core/error.hpp"

namespace dedmon::ml {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-20;
constexpr double kMaxStep = 1e4;

std::vector<double> pack(const LogisticParams& p) {
    std::vector<double> v(p.weights.data);
    v.insert(v.end(), p.bias.begin(), p.bias.end());
    return v;
}

void unpack(std::span<const double> v, LogisticParams& p) {
    std::copy(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(p.weights.data.size()), p.weights.data.begin());
    std::copy(v.begin() + static_cast<std::ptrdiff_t>(p.weights.data.size()), v.end(), p.bias.begin());
}

double squared_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

}  // namespace

Proba softmax(const Proba& logits) {
    const double m = *std::max_element(logits.begin(), logits.end());
    Proba p{};
    double sum = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        p[k] = std::exp(logits[k] - m);
        sum += p[k];
    }
    for (double& v : p) v /= sum;
    return p;
}

Proba logistic_proba(const LogisticParams& params, std::span<const double> x) {
    Proba z{};
    for (std::size_t k = 0; k < z.size(); ++k) {
        double s = params.bias[k];
        const double* w = params.weights.data.data() + k * params.weights.cols;
        for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * x[j];
        z[k] = s;
    }
    return softmax(z);
}

double logistic_loss(const LogisticParams& params, const Dataset& data, double c, std::vector<double>* gradient) {
    const std::size_t n = data.x.rows;
    const std::size_t d = data.x.cols;
    const auto k_count = static_cast<std::size_t>(kClassCount);
    const double nd = static_cast<double>(n);
    if (gradient) gradient->assign(k_count * d + k_count, 0.0);

    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = data.x.row(i);
        const Proba p = logistic_proba(params, x);
        const auto y = static_cast<std::size_t>(data.y[i]);
        loss -= std::log(std::max(p[y], 1e-300));
        if (gradient) {
            for (std::size_t k = 0; k < k_count; ++k) {
                const double r = (p[k] - (k == y ? 1.0 : 0.0)) / nd;
                double* g = gradient->data() + k * d;
                for (std::size_t j = 0; j < d; ++j) g[j] += r * x[j];
                (*gradient)[k_count * d + k] += r;
            }
        }
    }
    const double lambda = 1.0 / (c * nd);
    double wsq = 0.0;
    for (double w : params.weights.data) wsq += w * w;
    if (gradient) {
        for (std::size_t i = 0; i < k_count * d; ++i) (*gradient)[i] += lambda * params.weights.data[i];
    }
    return loss / nd + 0.5 * lambda * wsq;
}

LogisticFit fit_logistic(const Dataset& data, const LogisticConfig& config) {
    if (!(config.c > 0.0)) raise(ErrorKind::Config, "logistic regression needs C > 0");
    const auto k_count = static_cast<std::size_t>(kClassCount);
    LogisticFit fit;
    fit.params.weights = Matrix(k_count, data.x.cols);
    fit.params.bias.assign(k_count, 0.0);

    std::vector<double> grad;
    double loss = logistic_loss(fit.params, data, config.c, &grad);
    if (!std::isfinite(loss)) raise(ErrorKind::TrainingDiverged, "logistic loss is not finite");
    fit.loss_history.push_back(loss);

    std::vector<double> theta = pack(fit.params);
    LogisticParams trial = fit.params;
    std::vector<double> trial_theta(theta.size());
    double step = 1.0;
    for (std::size_t it = 0; it < config.max_iterations; ++it) {
        const double gsq = squared_norm(grad);
        if (std::sqrt(gsq) < config.tolerance) {
            fit.converged = true;
            break;
        }
        step = std::min(step * 2.0, kMaxStep);
        double trial_loss = 0.0;
        while (true) {
            for (std::size_t i = 0; i < theta.size(); ++i) trial_theta[i] = theta[i] - step * grad[i];
            unpack(trial_theta, trial);
            trial_loss = logistic_loss(trial, data, config.c, nullptr);
            if (std::isfinite(trial_loss) && trial_loss <= loss - kArmijo * step * gsq) break;
            step *= 0.5;
            if (step < kMinStep) break;
        }
        if (step < kMinStep) {
            // No representable decrease left: the iterate is optimal to
            // floating-point precision.
            fit.converged = true;
            break;
        }
        theta.swap(trial_theta);
        fit.params = trial;
        loss = logistic_loss(fit.params, data, config.c, &grad);
        fit.loss_history.push_back(loss);
    }
    return fit;
}

}  // namespace dedmon::ml
