#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csgm/dataset.hpp"
#include "csgm/model.hpp"

namespace csgm {

struct ConfusionMatrix {
    std::int64_t tn = 0, fp = 0, fn = 0, tp = 0;
    std::int64_t total() const { return tn + fp + fn + tp; }
};

ConfusionMatrix confusion_matrix(const std::vector<int>& predicted,
                                 const std::vector<int>& actual);

double accuracy(const ConfusionMatrix& cm);

// Zero denominators yield nullopt ("undefined"), never a silent 0.
std::optional<double> precision(const ConfusionMatrix& cm);
std::optional<double> recall(const ConfusionMatrix& cm);
std::optional<double> f1(const ConfusionMatrix& cm);

struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  // threshold descending, (0,0) to (1,1)
    double auc = 0.0;
};

// Prediction at threshold t is 1 iff score > t, matching predict's strict rule.
RocCurve roc_curve(const std::vector<double>& scores, const std::vector<int>& actual);

struct ClusterAccuracyRow {
    int cluster = 0;
    std::int64_t n = 0;
    std::optional<double> accuracy;  // nullopt when the cluster is empty
};

std::vector<ClusterAccuracyRow> per_cluster_accuracy(const CsgmModel& model,
                                                     const EncodedDataset& data);

struct MetricsReport {
    ConfusionMatrix confusion;
    double accuracy = 0.0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    double auc = 0.0;
    std::vector<ClusterAccuracyRow> per_cluster;
};

MetricsReport evaluate_model(const CsgmModel& model, const EncodedDataset& data);

std::string to_json_string(const MetricsReport& report);
void write_roc_csv(const RocCurve& curve, const std::string& path);

}  // namespace csgm
