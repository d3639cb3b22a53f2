#include "dedmon/ml/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dedmon/core/error.hpp"
#include "dedmon/core/rng.hpp"
#include "dedmon/ml/logistic.hpp"

namespace dedmon::ml {

namespace {

constexpr std::uint64_t kStreamInit = 1;
constexpr std::uint64_t kStreamShuffle = 2;
constexpr std::uint64_t kStreamDropout = 3;
constexpr std::uint64_t kStreamValidation = 4;

/// Per-sample activations kept for backpropagation.
struct Trace {
    std::vector<std::vector<double>> z;  // pre-activations per layer
    std::vector<std::vector<double>> a;  // a[0] = input, a[l + 1] = output of layer l
    std::vector<std::vector<double>> mask;  // dropout scale per hidden unit (empty when disabled)
};

void forward(const MlpParams& params, std::span<const double> x, Trace& t, CounterRng* dropout_rng, double dropout) {
    const std::size_t layers = params.layers.size();
    t.z.resize(layers);
    t.a.resize(layers + 1);
    t.mask.resize(layers);
    t.a[0].assign(x.begin(), x.end());
    for (std::size_t l = 0; l < layers; ++l) {
        const DenseLayer& layer = params.layers[l];
        const std::size_t out = layer.weights.rows;
        const std::size_t in = layer.weights.cols;
        auto& z = t.z[l];
        z.resize(out);
        const auto& prev = t.a[l];
        for (std::size_t o = 0; o < out; ++o) {
            const double* w = layer.weights.data.data() + o * in;
            double s = layer.bias[o];
            for (std::size_t i = 0; i < in; ++i) s += w[i] * prev[i];
            z[o] = s;
        }
        auto& a = t.a[l + 1];
        a.resize(out);
        if (l + 1 == layers) {
            const double m = *std::max_element(z.begin(), z.end());
            double sum = 0.0;
            for (std::size_t o = 0; o < out; ++o) sum += (a[o] = std::exp(z[o] - m));
            for (double& v : a) v /= sum;
        } else {
            auto& mask = t.mask[l];
            mask.clear();
            if (dropout_rng && dropout > 0.0) {
                mask.resize(out);
                const double keep = 1.0 - dropout;
                for (double& m : mask) m = dropout_rng->uniform() < keep ? 1.0 / keep : 0.0;
            }
            for (std::size_t o = 0; o < out; ++o) {
                a[o] = z[o] > 0.0 ? z[o] : 0.0;
                if (!mask.empty()) a[o] *= mask[o];
            }
        }
    }
}

/// Adds scale * d(CE)/d(params) for one sample to `grad` (flattened order).
void backward(const MlpParams& params, const Trace& t, int label, double scale, std::vector<double>& grad) {
    const std::size_t layers = params.layers.size();
    std::vector<std::size_t> offsets(layers);
    std::size_t off = 0;
    for (std::size_t l = 0; l < layers; ++l) {
        offsets[l] = off;
        off += params.layers[l].weights.data.size() + params.layers[l].bias.size();
    }
    std::vector<double> delta(t.a[layers]);
    delta[static_cast<std::size_t>(label)] -= 1.0;
    for (double& d : delta) d *= scale;
    for (std::size_t l = layers; l-- > 0;) {
        const DenseLayer& layer = params.layers[l];
        const std::size_t out = layer.weights.rows;
        const std::size_t in = layer.weights.cols;
        const auto& prev = t.a[l];
        double* gw = grad.data() + offsets[l];
        double* gb = gw + out * in;
        for (std::size_t o = 0; o < out; ++o) {
            const double d = delta[o];
            if (d == 0.0) continue;
            double* row = gw + o * in;
            for (std::size_t i = 0; i < in; ++i) row[i] += d * prev[i];
            gb[o] += d;
        }
        if (l == 0) break;
        std::vector<double> next(in, 0.0);
        for (std::size_t o = 0; o < out; ++o) {
            const double d = delta[o];
            if (d == 0.0) continue;
            const double* w = layer.weights.data.data() + o * in;
            for (std::size_t i = 0; i < in; ++i) next[i] += w[i] * d;
        }
        const auto& z = t.z[l - 1];
        const auto& mask = t.mask[l - 1];
        for (std::size_t i = 0; i < in; ++i) {
            if (!(z[i] > 0.0)) next[i] = 0.0;
            else if (!mask.empty()) next[i] *= mask[i];
        }
        delta.swap(next);
    }
}

void add_l2_gradient(const MlpParams& params, double l2, std::vector<double>& grad) {
    std::size_t off = 0;
    for (const DenseLayer& layer : params.layers) {
        for (std::size_t i = 0; i < layer.weights.data.size(); ++i) grad[off + i] += 2.0 * l2 * layer.weights.data[i];
        off += layer.weights.data.size() + layer.bias.size();
    }
}

double weight_penalty(const MlpParams& params, double l2) {
    double s = 0.0;
    for (const DenseLayer& layer : params.layers) {
        for (double w : layer.weights.data) s += w * w;
    }
    return l2 * s;
}

double cross_entropy(const MlpParams& params, const Dataset& data, std::span<const std::size_t> rows) {
    Trace t;
    double loss = 0.0;
    for (std::size_t r : rows) {
        forward(params, data.x.row(r), t, nullptr, 0.0);
        loss -= std::log(std::max(t.a.back()[static_cast<std::size_t>(data.y[r])], 1e-300));
    }
    return loss / static_cast<double>(rows.size());
}

void shuffle(std::vector<std::size_t>& v, CounterRng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.index(i)]);
}

}  // namespace

MlpParams init_mlp(std::size_t inputs, const std::vector<std::size_t>& hidden, std::uint64_t seed) {
    MlpParams p;
    std::size_t in = inputs;
    std::vector<std::size_t> widths = hidden;
    widths.push_back(static_cast<std::size_t>(kClassCount));
    for (std::size_t l = 0; l < widths.size(); ++l) {
        CounterRng rng(derive_key(seed, {kStreamInit, l}));
        DenseLayer layer;
        layer.weights = Matrix(widths[l], in);
        layer.bias.assign(widths[l], 0.0);
        const double sd = std::sqrt(2.0 / static_cast<double>(in));
        for (double& w : layer.weights.data) w = sd * rng.normal();
        p.layers.push_back(std::move(layer));
        in = widths[l];
    }
    return p;
}

std::vector<double> flatten(const MlpParams& params) {
    std::vector<double> v;
    for (const DenseLayer& layer : params.layers) {
        v.insert(v.end(), layer.weights.data.begin(), layer.weights.data.end());
        v.insert(v.end(), layer.bias.begin(), layer.bias.end());
    }
    return v;
}

void unflatten(std::span<const double> values, MlpParams& params) {
    std::size_t off = 0;
    for (DenseLayer& layer : params.layers) {
        for (double& w : layer.weights.data) w = values[off++];
        for (double& b : layer.bias) b = values[off++];
    }
    if (off != values.size()) raise(ErrorKind::InvalidInput, "parameter vector does not match the network");
}

double mlp_loss(const MlpParams& params, const Dataset& data, double l2, std::vector<double>* gradient) {
    const std::size_t n = data.x.rows;
    if (gradient) gradient->assign(flatten(params).size(), 0.0);
    Trace t;
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        forward(params, data.x.row(i), t, nullptr, 0.0);
        loss -= std::log(std::max(t.a.back()[static_cast<std::size_t>(data.y[i])], 1e-300));
        if (gradient) backward(params, t, data.y[i], 1.0 / static_cast<double>(n), *gradient);
    }
    if (gradient) add_l2_gradient(params, l2, *gradient);
    return loss / static_cast<double>(n) + weight_penalty(params, l2);
}

Proba mlp_proba(const MlpParams& params, std::span<const double> x) {
    Trace t;
    forward(params, x, t, nullptr, 0.0);
    Proba p{};
    std::copy(t.a.back().begin(), t.a.back().end(), p.begin());
    return p;
}

MlpFit fit_mlp(const Dataset& data, const MlpConfig& config) {
    if (config.hidden.empty()) raise(ErrorKind::Config, "MLP needs at least one hidden layer");
    if (!(config.dropout >= 0.0 && config.dropout < 1.0)) raise(ErrorKind::Config, "dropout must be in [0, 1)");
    if (config.batch_size == 0) raise(ErrorKind::Config, "batch size must be positive");

    // Stratified validation carve-out.
    std::vector<std::size_t> train_rows, val_rows;
    for (int c = 0; c < kClassCount; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < data.y.size(); ++i) {
            if (data.y[i] == c) members.push_back(i);
        }
        CounterRng rng(derive_key(config.seed, {kStreamValidation, static_cast<std::uint64_t>(c)}));
        shuffle(members, rng);
        std::size_t n_val = 0;
        if (members.size() >= 2) {
            n_val = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(
                                                 config.validation_fraction * static_cast<double>(members.size()))));
        }
        val_rows.insert(val_rows.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_val));
        train_rows.insert(train_rows.end(), members.begin() + static_cast<std::ptrdiff_t>(n_val), members.end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(val_rows.begin(), val_rows.end());
    const bool early_stopping = config.validation_fraction > 0.0 && !val_rows.empty();
    if (!early_stopping) {
        train_rows.resize(data.y.size());
        std::iota(train_rows.begin(), train_rows.end(), 0);
    }

    MlpFit fit;
    fit.params = init_mlp(data.x.cols, config.hidden, config.seed);
    MlpParams best = fit.params;
    double best_loss = HUGE_VAL;
    std::size_t wait = 0;

    std::vector<double> theta = flatten(fit.params);
    std::vector<double> grad(theta.size());
    Trace t;
    for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
        CounterRng order_rng(derive_key(config.seed, {kStreamShuffle, epoch}));
        std::vector<std::size_t> order = train_rows;
        shuffle(order, order_rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0, batch = 0; start < order.size(); start += config.batch_size, ++batch) {
            const std::size_t stop = std::min(order.size(), start + config.batch_size);
            const double scale = 1.0 / static_cast<double>(stop - start);
            CounterRng drop_rng(derive_key(config.seed, {kStreamDropout, epoch, batch}));
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t b = start; b < stop; ++b) {
                const std::size_t r = order[b];
                forward(fit.params, data.x.row(r), t, &drop_rng, config.dropout);
                const double p = t.a.back()[static_cast<std::size_t>(data.y[r])];
                epoch_loss -= std::log(std::max(p, 1e-300));
                backward(fit.params, t, data.y[r], scale, grad);
            }
            add_l2_gradient(fit.params, config.l2, grad);
            for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= config.learning_rate * grad[i];
            unflatten(theta, fit.params);
        }
        fit.epochs_run = epoch + 1;
        if (!std::isfinite(epoch_loss) || !std::all_of(theta.begin(), theta.end(), [](double v) { return std::isfinite(v); })) {
            raise(ErrorKind::TrainingDiverged, "MLP loss became non-finite at epoch " + std::to_string(epoch + 1));
        }
        if (!early_stopping) continue;
        const double val_loss = cross_entropy(fit.params, data, val_rows);
        if (val_loss < best_loss) {
            best_loss = val_loss;
            best = fit.params;
            fit.best_epoch = epoch + 1;
            wait = 0;
        } else if (++wait >= config.patience) {
            fit.stopped_early = true;
            break;
        }
    }
    if (early_stopping) {
        fit.params = std::move(best);
        fit.best_validation_loss = best_loss;
    } else {
        fit.best_epoch = fit.epochs_run;
        fit.best_validation_loss = cross_entropy(fit.params, data, train_rows);
    }
    return fit;
}

}  // namespace dedmon::ml
