#include "dedmon/io/report.hpp"

#include <cmath>
#include <cstdio>
#include <algorithm>
#include <map>

#include "dedmon/core/error.hpp"
#include "dedmon/core/stats.hpp"
#include "dedmon/io/csv.hpp"

namespace dedmon::io {

namespace {

using nlohmann::json;

std::string header(const std::optional<ArtifactStamp>& stamp) {
    return stamp ? "# " + to_comment(*stamp) + "\n" : std::string();
}

/// F can be +inf for perfectly separated columns; CSV keeps the word.
std::string csv_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return format_double(v);
}

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string lpad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

std::vector<double> real_column(const fusion::FeatureTable& table, std::size_t col, fusion::Condition c,
                                std::optional<int> layer) {
    std::vector<double> out;
    for (std::size_t i = 0; i < table.rows(); ++i) {
        const auto& m = table.meta(i);
        if (m.provenance != fusion::Provenance::Real || m.label != c) continue;
        if (layer && m.layer_index != *layer) continue;
        out.push_back(table.at(i, col));
    }
    return out;
}

std::size_t require_column(const fusion::FeatureTable& table, const std::string& name) {
    const auto j = table.column_index(name);
    if (!j) raise(ErrorKind::Schema, "feature '" + name + "' is not in the table");
    return *j;
}

}  // namespace

nlohmann::json to_json(const ml::MetricsReport& r, const std::optional<ArtifactStamp>& stamp) {
    json confusion = json::array();
    for (const auto& row : r.confusion) confusion.push_back(row);
    json layers = json::object();
    for (const auto& [layer, acc] : r.per_layer_accuracy) layers[std::to_string(layer)] = number_or_null(acc);
    json j = {{"classifier", r.classifier},
              {"modality", r.modality},
              {"test_rows", r.test_rows},
              {"accuracy", r.accuracy},
              {"precision", r.precision},
              {"recall", r.recall},
              {"f1", r.f1},
              {"macro_precision", r.macro_precision},
              {"macro_recall", r.macro_recall},
              {"macro_f1", r.macro_f1},
              {"auc_roc", r.auc_roc},
              {"confusion", confusion},
              {"class_order", {"NoHole", "Hole3mm", "Hole5mm"}},
              {"binarized", {{"tp", r.binarized.tp}, {"fp", r.binarized.fp}, {"fn", r.binarized.fn}, {"tn", r.binarized.tn}}},
              {"per_layer_accuracy", layers},
              {"conventions",
               {{"precision_recall_f1", "binarized, defect (Hole3mm or Hole5mm) positive"},
                {"auc_roc", "macro one-vs-rest, trapezoidal"}}}};
    if (r.run_stats) {
        const auto& s = *r.run_stats;
        j["run_stats"] = {{"runs", s.runs},           {"accuracy_mean", s.accuracy_mean}, {"accuracy_std", s.accuracy_std},
                          {"f1_mean", s.f1_mean},     {"f1_std", s.f1_std},               {"auc_mean", s.auc_mean},
                          {"auc_std", s.auc_std}};
    } else {
        j["run_stats"] = nullptr;
    }
    if (stamp) j["stamp"] = to_json(*stamp);
    return j;
}

ml::MetricsReport metrics_from_json(const nlohmann::json& j) {
    try {
        ml::MetricsReport r;
        r.classifier = j.at("classifier").get<std::string>();
        r.modality = j.at("modality").get<std::string>();
        r.test_rows = j.at("test_rows").get<std::size_t>();
        r.accuracy = j.at("accuracy").get<double>();
        r.precision = j.at("precision").get<double>();
        r.recall = j.at("recall").get<double>();
        r.f1 = j.at("f1").get<double>();
        r.macro_precision = j.at("macro_precision").get<double>();
        r.macro_recall = j.at("macro_recall").get<double>();
        r.macro_f1 = j.at("macro_f1").get<double>();
        r.auc_roc = j.at("auc_roc").get<double>();
        const auto& c = j.at("confusion");
        if (c.size() != static_cast<std::size_t>(ml::kClassCount)) raise(ErrorKind::Format, "confusion matrix must be 3x3");
        for (std::size_t t = 0; t < c.size(); ++t) {
            if (c[t].size() != static_cast<std::size_t>(ml::kClassCount)) {
                raise(ErrorKind::Format, "confusion matrix must be 3x3");
            }
            for (std::size_t p = 0; p < c[t].size(); ++p) r.confusion[t][p] = c[t][p].get<std::size_t>();
        }
        const auto& b = j.at("binarized");
        r.binarized = {b.at("tp").get<std::size_t>(), b.at("fp").get<std::size_t>(), b.at("fn").get<std::size_t>(),
                       b.at("tn").get<std::size_t>()};
        for (const auto& [layer, acc] : j.at("per_layer_accuracy").items()) {
            r.per_layer_accuracy[std::stoi(layer)] = number_from(acc);
        }
        if (const auto& s = j.at("run_stats"); !s.is_null()) {
            r.run_stats = ml::RunStats{s.at("runs").get<std::size_t>(),      s.at("accuracy_mean").get<double>(),
                                       s.at("accuracy_std").get<double>(), s.at("f1_mean").get<double>(),
                                       s.at("f1_std").get<double>(),       s.at("auc_mean").get<double>(),
                                       s.at("auc_std").get<double>()};
        }
        return r;
    } catch (const json::exception& e) {
        raise(ErrorKind::Format, std::string("malformed metrics report: ") + e.what());
    } catch (const std::logic_error& e) {
        raise(ErrorKind::Format, std::string("malformed metrics report: ") + e.what());
    }
}

std::string render_metrics_table(const std::vector<ml::MetricsReport>& reports, const std::optional<ArtifactStamp>& stamp) {
    const std::vector<std::string> head{"classifier", "modality", "accuracy", "precision", "recall", "f1", "auc_roc",
                                        "acc_mean+-std"};
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : reports) {
        std::string runs = "-";
        if (r.run_stats) runs = fixed3(r.run_stats->accuracy_mean) + "+-" + fixed3(r.run_stats->accuracy_std);
        rows.push_back({r.classifier, r.modality, fixed3(r.accuracy), fixed3(r.precision), fixed3(r.recall), fixed3(r.f1),
                        fixed3(r.auc_roc), runs});
    }
    std::vector<std::size_t> width(head.size());
    for (std::size_t c = 0; c < head.size(); ++c) {
        width[c] = head[c].size();
        for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
    }
    std::string out = header(stamp);
    const auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            out += c < 2 ? pad(cells[c], width[c]) : lpad(cells[c], width[c]);
            out += c + 1 < cells.size() ? "  " : "\n";
        }
    };
    line(head);
    std::size_t total = 0;
    for (std::size_t w : width) total += w;
    out += std::string(total + 2 * (width.size() - 1), '-') + "\n";
    for (const auto& row : rows) line(row);
    return out;
}

std::string render_confusion(const ml::MetricsReport& r) {
    std::string out = r.classifier + " / " + r.modality + " (rows: truth, columns: predicted)\n";
    out += pad("", 9);
    for (fusion::Condition c : fusion::kAllConditions) out += lpad(fusion::to_string(c), 9);
    out += "\n";
    for (fusion::Condition t : fusion::kAllConditions) {
        out += pad(fusion::to_string(t), 9);
        for (fusion::Condition p : fusion::kAllConditions) {
            out += lpad(std::to_string(r.confusion[static_cast<std::size_t>(fusion::code(t))]
                                                  [static_cast<std::size_t>(fusion::code(p))]),
                        9);
        }
        out += "\n";
    }
    return out;
}

std::string anova_csv(const std::vector<fusion::FeatureScore>& scores, const std::optional<ArtifactStamp>& stamp) {
    std::string out = header(stamp) + "feature,modality,f,p\n";
    for (const auto& s : scores) {
        out += s.feature + "," + fusion::to_string(s.modality) + "," + csv_number(s.f) + "," + csv_number(s.p) + "\n";
    }
    return out;
}

std::string comparison_csv(const std::vector<ml::MetricsReport>& reports, const std::optional<ArtifactStamp>& stamp) {
    std::string out = header(stamp) +
                      "classifier,modality,test_rows,accuracy,precision,recall,f1,auc_roc,macro_precision,macro_recall,"
                      "macro_f1,runs,accuracy_mean,accuracy_std,f1_mean,f1_std,auc_mean,auc_std\n";
    for (const auto& r : reports) {
        out += r.classifier + "," + r.modality + "," + std::to_string(r.test_rows);
        for (double v : {r.accuracy, r.precision, r.recall, r.f1, r.auc_roc, r.macro_precision, r.macro_recall, r.macro_f1}) {
            out += "," + csv_number(v);
        }
        const ml::RunStats s = r.run_stats.value_or(
            ml::RunStats{1, r.accuracy, 0.0, r.f1, 0.0, r.auc_roc, 0.0});
        out += "," + std::to_string(s.runs);
        for (double v : {s.accuracy_mean, s.accuracy_std, s.f1_mean, s.f1_std, s.auc_mean, s.auc_std}) {
            out += "," + csv_number(v);
        }
        out += "\n";
    }
    return out;
}

std::string condition_summary_csv(const fusion::FeatureTable& table, const std::vector<std::string>& features,
                                  const std::optional<ArtifactStamp>& stamp) {
    std::string out = header(stamp) + "feature,condition,count,mean,std,q25,median,q75\n";
    for (const auto& name : features) {
        const std::size_t col = require_column(table, name);
        for (fusion::Condition c : fusion::kAllConditions) {
            const auto v = real_column(table, col, c, std::nullopt);
            out += name + "," + fusion::to_string(c) + "," + std::to_string(v.size());
            if (v.empty()) {
                out += ",nan,nan,nan,nan,nan\n";
                continue;
            }
            for (double x : {stats::mean(v), stats::sample_std(v), stats::quantile(v, 0.25), stats::median(v),
                             stats::quantile(v, 0.75)}) {
                out += "," + csv_number(x);
            }
            out += "\n";
        }
    }
    return out;
}

std::string layer_evolution_csv(const fusion::FeatureTable& table, const std::vector<std::string>& features,
                                const std::optional<ArtifactStamp>& stamp) {
    std::string out = header(stamp) + "feature,condition,layer_index,count,mean,std\n";
    std::vector<int> layers;
    for (std::size_t i = 0; i < table.rows(); ++i) {
        const int l = table.meta(i).layer_index;
        if (std::find(layers.begin(), layers.end(), l) == layers.end()) layers.push_back(l);
    }
    std::sort(layers.begin(), layers.end());
    for (const auto& name : features) {
        const std::size_t col = require_column(table, name);
        for (fusion::Condition c : fusion::kAllConditions) {
            for (int layer : layers) {
                const auto v = real_column(table, col, c, layer);
                if (v.empty()) continue;
                out += name + "," + fusion::to_string(c) + "," + std::to_string(layer) + "," + std::to_string(v.size()) +
                       "," + csv_number(stats::mean(v)) + "," + csv_number(stats::sample_std(v)) + "\n";
            }
        }
    }
    return out;
}

}  // namespace dedmon::io
