#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csgm/dataset.hpp"
#include "csgm/gmm.hpp"
#include "csgm/smote.hpp"

namespace csgm {

// A fitted mixture turned into a binary classifier: per-cluster good-credit
// ratios r*(1|z_k), hard cluster labels l_{z_k}, and a decision boundary D
// on the posterior p(y=1|x).
struct CsgmModel {
    GmmParams gmm;
    Eigen::VectorXd ratio_good;               // r*(1|z_k) in [0,1]
    std::vector<int> cluster_labels;          // 1 iff ratio_good > 0.5
    double decision_boundary = 0.5;
    std::vector<std::array<std::int64_t, 2>> cluster_counts;  // (#0s, #1s) on train
    std::vector<bool> empty_clusters;         // clusters with no train members
    std::optional<Standardization> standardization;
    std::uint64_t seed = 0;
};

Eigen::VectorXd dependency_probabilities(const Eigen::VectorXd& x, const GmmParams& gmm);

// Argmax with lowest-index tie break.
int assign_cluster(const Eigen::VectorXd& probs);

struct ClusterLabeling {
    Eigen::VectorXd ratio_good;
    std::vector<int> labels;
    std::vector<std::array<std::int64_t, 2>> counts;
    std::vector<bool> empty;
};

// Empty clusters fall back to the global positive rate and are flagged.
ClusterLabeling label_clusters(const std::vector<int>& assignments,
                               const Eigen::VectorXi& labels, int n_components);

double posterior_good(const Eigen::VectorXd& x, const CsgmModel& model);

// 1 iff posterior_good(x) > decision boundary, strictly.
int predict(const Eigen::VectorXd& x, const CsgmModel& model);

std::vector<int> predict_all(const Eigen::MatrixXd& features, const CsgmModel& model);
std::vector<double> posterior_good_all(const Eigen::MatrixXd& features,
                                       const CsgmModel& model);

struct SelectionSpec {
    int min_components = 1;
    int max_components = 12;
    Criterion criterion = Criterion::Bic;
};

struct CsgmFit {
    CsgmModel model;
    FitReport report;
    std::vector<SelectionRow> selection;
    double train_accuracy = 0.0;  // soft labeling at the stored boundary
};

CsgmFit fit_csgm(const EncodedDataset& train, const EmConfig& em_cfg,
                 const SelectionSpec& selection, const std::optional<SmoteConfig>& smote,
                 double decision_boundary);

std::string to_json_string(const CsgmModel& model);
CsgmModel model_from_json_string(const std::string& text);
CsgmModel load_model(const std::string& path);
void save_model(const CsgmModel& model, const std::string& path);

}  // namespace csgm
