#include "csgm/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace csgm {

ConfusionMatrix confusion_matrix(const std::vector<int>& predicted,
                                 const std::vector<int>& actual) {
    if (predicted.size() != actual.size())
        throw std::runtime_error("predicted/actual length mismatch");
    if (predicted.empty()) throw std::runtime_error("empty prediction vector");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (actual[i] == 0)
            predicted[i] == 0 ? ++cm.tn : ++cm.fp;
        else
            predicted[i] == 0 ? ++cm.fn : ++cm.tp;
    }
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw std::runtime_error("empty confusion matrix");
    return static_cast<double>(cm.tn + cm.tp) / static_cast<double>(cm.total());
}

std::optional<double> precision(const ConfusionMatrix& cm) {
    if (cm.tp + cm.fp == 0) return std::nullopt;
    return static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
}

std::optional<double> recall(const ConfusionMatrix& cm) {
    if (cm.tp + cm.fn == 0) return std::nullopt;
    return static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
}

std::optional<double> f1(const ConfusionMatrix& cm) {
    const auto p = precision(cm);
    const auto r = recall(cm);
    if (!p || !r || *p + *r == 0.0) return std::nullopt;
    return 2.0 * (*p) * (*r) / (*p + *r);
}

RocCurve roc_curve(const std::vector<double>& scores, const std::vector<int>& actual) {
    if (scores.size() != actual.size())
        throw std::runtime_error("scores/actual length mismatch");
    std::int64_t pos = 0, neg = 0;
    for (int y : actual) y == 1 ? ++pos : ++neg;
    if (pos == 0 || neg == 0) throw std::runtime_error("roc_curve needs both classes");

    // samples by score descending; sweep thresholds at each distinct score
    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    const double max_score = scores[order.front()];
    curve.points.push_back({max_score + 1.0, 0.0, 0.0});  // sentinel above max

    std::int64_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            actual[order[i]] == 1 ? ++tp : ++fp;
            ++i;
        }
        // threshold just below s: prediction = 1 iff score > threshold,
        // so everything with score >= s is now predicted positive
        curve.points.push_back({s, static_cast<double>(fp) / static_cast<double>(neg),
                                static_cast<double>(tp) / static_cast<double>(pos)});
    }
    if (curve.points.back().fpr != 1.0 || curve.points.back().tpr != 1.0)
        curve.points.push_back({scores[order.back()] - 1.0, 1.0, 1.0});

    double auc = 0.0;
    for (std::size_t p = 1; p < curve.points.size(); ++p)
        auc += (curve.points[p].fpr - curve.points[p - 1].fpr) *
               (curve.points[p].tpr + curve.points[p - 1].tpr) / 2.0;
    curve.auc = auc;
    return curve;
}

std::vector<ClusterAccuracyRow> per_cluster_accuracy(const CsgmModel& model,
                                                     const EncodedDataset& data) {
    const int nc = model.gmm.n_components();
    std::vector<std::int64_t> n(static_cast<std::size_t>(nc), 0);
    std::vector<std::int64_t> hits(static_cast<std::size_t>(nc), 0);

    const auto resp = e_step(data.features, model.gmm).responsibilities;
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        const int k = assign_cluster(resp.row(i).transpose());
        ++n[static_cast<std::size_t>(k)];
        if (data.labels[i] == model.cluster_labels[static_cast<std::size_t>(k)])
            ++hits[static_cast<std::size_t>(k)];
    }

    std::vector<ClusterAccuracyRow> table;
    for (int k = 0; k < nc; ++k) {
        ClusterAccuracyRow row;
        row.cluster = k;
        row.n = n[static_cast<std::size_t>(k)];
        if (row.n > 0)
            row.accuracy = static_cast<double>(hits[static_cast<std::size_t>(k)]) /
                           static_cast<double>(row.n);
        table.push_back(row);
    }
    return table;
}

MetricsReport evaluate_model(const CsgmModel& model, const EncodedDataset& data) {
    MetricsReport report;
    const auto predictions = predict_all(data.features, model);
    std::vector<int> actual(static_cast<std::size_t>(data.n()));
    for (Eigen::Index i = 0; i < data.n(); ++i)
        actual[static_cast<std::size_t>(i)] = data.labels[i];

    report.confusion = confusion_matrix(predictions, actual);
    report.accuracy = accuracy(report.confusion);
    report.precision = precision(report.confusion);
    report.recall = recall(report.confusion);
    report.f1 = f1(report.confusion);

    bool both_classes = false;
    {
        bool has0 = false, has1 = false;
        for (int y : actual) (y == 1 ? has1 : has0) = true;
        both_classes = has0 && has1;
    }
    if (both_classes) {
        const auto scores = posterior_good_all(data.features, model);
        report.auc = roc_curve(scores, actual).auc;
    } else {
        report.auc = std::numeric_limits<double>::quiet_NaN();
    }
    report.per_cluster = per_cluster_accuracy(model, data);
    return report;
}

std::string to_json_string(const MetricsReport& report) {
    nlohmann::json j;
    j["confusion_matrix"] = {{"tn", report.confusion.tn},
                             {"fp", report.confusion.fp},
                             {"fn", report.confusion.fn},
                             {"tp", report.confusion.tp}};
    j["accuracy"] = report.accuracy;
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::json(*v) : nlohmann::json("undefined");
    };
    j["precision"] = opt(report.precision);
    j["recall"] = opt(report.recall);
    j["f1"] = opt(report.f1);
    j["auc"] = report.auc;
    nlohmann::json clusters = nlohmann::json::array();
    for (const auto& row : report.per_cluster) {
        nlohmann::json r;
        r["cluster"] = row.cluster;
        r["n"] = row.n;
        r["accuracy"] = row.accuracy ? nlohmann::json(*row.accuracy) : nlohmann::json(nullptr);
        clusters.push_back(r);
    }
    j["per_cluster"] = clusters;
    return j.dump(2);
}

void write_roc_csv(const RocCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "threshold,fpr,tpr\n";
    out.precision(17);
    for (const auto& p : curve.points)
        out << p.threshold << ',' << p.fpr << ',' << p.tpr << '\n';
}

}  // namespace csgm
