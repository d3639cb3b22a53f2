#include "dedmon/ml/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "dedmon/core/error.hpp"
#include "dedmon/core/log.hpp"

namespace dedmon::ml {

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

double f1_of(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

bool is_defect(int label) {
    return label == fusion::code(fusion::Condition::Hole3mm) || label == fusion::code(fusion::Condition::Hole5mm);
}

BinaryScores binary_scores(const BinaryCounts& c) {
    BinaryScores s;
    s.accuracy = ratio(static_cast<double>(c.tp + c.tn), static_cast<double>(c.total()));
    s.precision = ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
    s.recall = ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
    s.f1 = f1_of(s.precision, s.recall);
    return s;
}

double roc_auc(std::span<const double> scores, std::span<const int> positive) {
    if (scores.size() != positive.size()) raise(ErrorKind::Schema, "score and target lengths differ");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    double pos = 0.0, neg = 0.0;
    for (int p : positive) (p ? pos : neg) += 1.0;
    if (pos == 0.0 || neg == 0.0) return 0.5;

    // Walk thresholds from high to low; each tie group adds one trapezoid.
    double tp = 0.0, fp = 0.0, area = 0.0;
    for (std::size_t i = 0; i < n;) {
        double dtp = 0.0, dfp = 0.0;
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) {
            (positive[order[j]] ? dtp : dfp) += 1.0;
            ++j;
        }
        area += (dfp / neg) * (tp + 0.5 * dtp) / pos;
        tp += dtp;
        fp += dfp;
        i = j;
    }
    return area;
}

double macro_auc(std::span<const int> truth, std::span<const Proba> proba) {
    if (truth.size() != proba.size()) raise(ErrorKind::Schema, "label and probability lengths differ");
    double sum = 0.0;
    int used = 0;
    for (int c = 0; c < kClassCount; ++c) {
        std::vector<double> scores(truth.size());
        std::vector<int> pos(truth.size());
        std::size_t npos = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            scores[i] = proba[i][static_cast<std::size_t>(c)];
            pos[i] = truth[i] == c;
            npos += static_cast<std::size_t>(pos[i]);
        }
        if (npos == 0 || npos == truth.size()) continue;
        sum += roc_auc(scores, pos);
        ++used;
    }
    return used > 0 ? sum / used : 0.5;
}

MetricsReport classification_metrics(std::span<const int> truth, std::span<const int> predicted,
                                     std::span<const Proba> proba) {
    if (truth.size() != predicted.size() || (!proba.empty() && proba.size() != truth.size())) {
        raise(ErrorKind::Schema, "metric inputs differ in length");
    }
    MetricsReport r;
    r.test_rows = truth.size();
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const int t = truth[i], p = predicted[i];
        if (t < 0 || t >= kClassCount || p < 0 || p >= kClassCount) {
            raise(ErrorKind::InvalidInput, "label outside the three conditions");
        }
        ++r.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
        const bool td = is_defect(t), pd = is_defect(p);
        if (td && pd) ++r.binarized.tp;
        else if (!td && pd) ++r.binarized.fp;
        else if (td && !pd) ++r.binarized.fn;
        else ++r.binarized.tn;
    }
    std::size_t trace = 0;
    for (int k = 0; k < kClassCount; ++k) trace += r.confusion[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
    r.accuracy = ratio(static_cast<double>(trace), static_cast<double>(truth.size()));

    const BinaryScores b = binary_scores(r.binarized);
    r.precision = b.precision;
    r.recall = b.recall;
    r.f1 = b.f1;

    for (std::size_t k = 0; k < static_cast<std::size_t>(kClassCount); ++k) {
        std::size_t col = 0, row = 0;
        for (std::size_t j = 0; j < static_cast<std::size_t>(kClassCount); ++j) {
            col += r.confusion[j][k];
            row += r.confusion[k][j];
        }
        const double p = ratio(static_cast<double>(r.confusion[k][k]), static_cast<double>(col));
        const double q = ratio(static_cast<double>(r.confusion[k][k]), static_cast<double>(row));
        r.macro_precision += p / kClassCount;
        r.macro_recall += q / kClassCount;
        r.macro_f1 += f1_of(p, q) / kClassCount;
    }
    if (!proba.empty()) r.auc_roc = macro_auc(truth, proba);
    return r;
}

std::map<int, double> layerwise_accuracy(std::span<const int> truth, std::span<const int> predicted,
                                         std::span<const int> layers, std::span<const int> expected) {
    if (truth.size() != predicted.size() || truth.size() != layers.size()) {
        raise(ErrorKind::Schema, "layerwise inputs differ in length");
    }
    std::map<int, std::pair<std::size_t, std::size_t>> tally;  // correct, total
    for (std::size_t i = 0; i < truth.size(); ++i) {
        auto& t = tally[layers[i]];
        t.first += static_cast<std::size_t>(truth[i] == predicted[i]);
        ++t.second;
    }
    for (int layer : expected) {
        if (!tally.count(layer)) warn("layer " + std::to_string(layer) + " has no test rows; omitted from layer accuracy");
    }
    std::map<int, double> out;
    for (const auto& [layer, t] : tally) out[layer] = static_cast<double>(t.first) / static_cast<double>(t.second);
    return out;
}

}  // namespace dedmon::ml
