#include "csgm/model.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace csgm {

Eigen::VectorXd dependency_probabilities(const Eigen::VectorXd& x, const GmmParams& gmm) {
    if (x.size() != gmm.dim())
        throw std::runtime_error("dimension mismatch in dependency_probabilities");
    Eigen::MatrixXd row(1, x.size());
    row.row(0) = x.transpose();
    return e_step(row, gmm).responsibilities.row(0).transpose();
}

int assign_cluster(const Eigen::VectorXd& probs) {
    if (probs.size() == 0) throw std::runtime_error("empty probability vector");
    int best = 0;
    for (int k = 1; k < probs.size(); ++k)
        if (probs[k] > probs[best]) best = k;
    return best;
}

ClusterLabeling label_clusters(const std::vector<int>& assignments,
                               const Eigen::VectorXi& labels, int n_components) {
    if (n_components <= 0) throw std::runtime_error("n_components must be positive");
    if (assignments.size() != static_cast<std::size_t>(labels.size()))
        throw std::runtime_error("assignments/labels length mismatch");

    ClusterLabeling out;
    out.counts.assign(static_cast<std::size_t>(n_components), {0, 0});
    std::int64_t total_good = 0;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        const int k = assignments[i];
        if (k < 0 || k >= n_components) throw std::runtime_error("assignment out of range");
        const int y = labels[static_cast<Eigen::Index>(i)];
        ++out.counts[static_cast<std::size_t>(k)][static_cast<std::size_t>(y)];
        total_good += y;
    }
    const double global_rate =
        labels.size() > 0 ? static_cast<double>(total_good) / static_cast<double>(labels.size())
                          : 0.0;

    out.ratio_good.resize(n_components);
    out.labels.resize(static_cast<std::size_t>(n_components));
    out.empty.assign(static_cast<std::size_t>(n_components), false);
    for (int k = 0; k < n_components; ++k) {
        const auto& c = out.counts[static_cast<std::size_t>(k)];
        const std::int64_t nk = c[0] + c[1];
        if (nk == 0) {
            out.ratio_good[k] = global_rate;
            out.empty[static_cast<std::size_t>(k)] = true;
        } else {
            out.ratio_good[k] = static_cast<double>(c[1]) / static_cast<double>(nk);
        }
        out.labels[static_cast<std::size_t>(k)] = out.ratio_good[k] > 0.5 ? 1 : 0;
    }
    return out;
}

double posterior_good(const Eigen::VectorXd& x, const CsgmModel& model) {
    const Eigen::VectorXd probs = dependency_probabilities(x, model.gmm);
    return model.ratio_good.dot(probs);
}

int predict(const Eigen::VectorXd& x, const CsgmModel& model) {
    return posterior_good(x, model) > model.decision_boundary ? 1 : 0;
}

std::vector<double> posterior_good_all(const Eigen::MatrixXd& features,
                                       const CsgmModel& model) {
    const auto resp = e_step(features, model.gmm).responsibilities;
    std::vector<double> out(static_cast<std::size_t>(features.rows()));
    for (Eigen::Index i = 0; i < features.rows(); ++i)
        out[static_cast<std::size_t>(i)] = model.ratio_good.dot(resp.row(i).transpose());
    return out;
}

std::vector<int> predict_all(const Eigen::MatrixXd& features, const CsgmModel& model) {
    auto posteriors = posterior_good_all(features, model);
    std::vector<int> out(posteriors.size());
    for (std::size_t i = 0; i < posteriors.size(); ++i)
        out[i] = posteriors[i] > model.decision_boundary ? 1 : 0;
    return out;
}

CsgmFit fit_csgm(const EncodedDataset& train, const EmConfig& em_cfg,
                 const SelectionSpec& selection, const std::optional<SmoteConfig>& smote,
                 double decision_boundary) {
    if (decision_boundary < 0.0 || decision_boundary > 1.0)
        throw std::runtime_error("decision boundary must be in [0,1]");

    EncodedDataset balanced = train;
    if (smote) {
        try {
            balanced = smote_balance(train, *smote);
        } catch (const std::runtime_error& e) {
            throw std::runtime_error(std::string("smote stage: ") + e.what());
        }
    }

    SelectionResult sel;
    try {
        sel = select_components(balanced.features, selection.min_components,
                                selection.max_components, em_cfg, selection.criterion);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string("selection stage: ") + e.what());
    }

    EmConfig final_cfg = em_cfg;
    final_cfg.n_components = sel.chosen;
    GmmParams gmm;
    FitReport report;
    try {
        std::tie(gmm, report) = fit_em(balanced.features, final_cfg);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string("em stage: ") + e.what());
    }

    const auto resp = e_step(balanced.features, gmm).responsibilities;
    std::vector<int> assignments(static_cast<std::size_t>(balanced.n()));
    for (Eigen::Index i = 0; i < balanced.n(); ++i)
        assignments[static_cast<std::size_t>(i)] = assign_cluster(resp.row(i).transpose());

    auto labeling = label_clusters(assignments, balanced.labels, sel.chosen);

    CsgmFit fit;
    fit.model.gmm = std::move(gmm);
    fit.model.ratio_good = std::move(labeling.ratio_good);
    fit.model.cluster_labels = std::move(labeling.labels);
    fit.model.cluster_counts = std::move(labeling.counts);
    fit.model.empty_clusters = std::move(labeling.empty);
    fit.model.decision_boundary = decision_boundary;
    fit.model.standardization = train.standardization;
    fit.model.seed = em_cfg.seed;
    fit.report = std::move(report);
    fit.selection = std::move(sel.table);

    const auto predictions = predict_all(balanced.features, fit.model);
    std::int64_t correct = 0;
    for (Eigen::Index i = 0; i < balanced.n(); ++i)
        if (predictions[static_cast<std::size_t>(i)] == balanced.labels[i]) ++correct;
    fit.train_accuracy = static_cast<double>(correct) / static_cast<double>(balanced.n());
    return fit;
}

std::string to_json_string(const CsgmModel& model) {
    nlohmann::json j;
    j["gmm"] = nlohmann::json::parse(to_json_string(model.gmm));
    j["ratio_good"] = std::vector<double>(
        model.ratio_good.data(), model.ratio_good.data() + model.ratio_good.size());
    j["cluster_labels"] = model.cluster_labels;
    j["decision_boundary"] = model.decision_boundary;
    std::vector<std::vector<std::int64_t>> counts;
    for (const auto& c : model.cluster_counts) counts.push_back({c[0], c[1]});
    j["cluster_counts"] = counts;
    j["empty_clusters"] = model.empty_clusters;
    j["seed"] = model.seed;
    if (model.standardization) {
        nlohmann::json s;
        s["mean"] = std::vector<double>(
            model.standardization->mean.data(),
            model.standardization->mean.data() + model.standardization->mean.size());
        s["stddev"] = std::vector<double>(
            model.standardization->stddev.data(),
            model.standardization->stddev.data() + model.standardization->stddev.size());
        s["constant"] = model.standardization->constant;
        j["standardization"] = s;
    }
    return j.dump(2);
}

CsgmModel model_from_json_string(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    CsgmModel model;
    model.gmm = gmm_from_json_string(j.at("gmm").dump());
    const auto ratios = j.at("ratio_good").get<std::vector<double>>();
    model.ratio_good = Eigen::Map<const Eigen::VectorXd>(
        ratios.data(), static_cast<Eigen::Index>(ratios.size()));
    model.cluster_labels = j.at("cluster_labels").get<std::vector<int>>();
    model.decision_boundary = j.at("decision_boundary").get<double>();
    for (const auto& c : j.at("cluster_counts"))
        model.cluster_counts.push_back({c.at(0).get<std::int64_t>(), c.at(1).get<std::int64_t>()});
    model.empty_clusters = j.at("empty_clusters").get<std::vector<bool>>();
    model.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("standardization")) {
        const auto& s = j.at("standardization");
        Standardization std_params;
        const auto mean = s.at("mean").get<std::vector<double>>();
        const auto stddev = s.at("stddev").get<std::vector<double>>();
        std_params.mean = Eigen::Map<const Eigen::VectorXd>(
            mean.data(), static_cast<Eigen::Index>(mean.size()));
        std_params.stddev = Eigen::Map<const Eigen::VectorXd>(
            stddev.data(), static_cast<Eigen::Index>(stddev.size()));
        std_params.constant = s.at("constant").get<std::vector<bool>>();
        model.standardization = std_params;
    }
    return model;
}

CsgmModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json_string(text);
}

void save_model(const CsgmModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model '" + path + "'");
    out << to_json_string(model) << '\n';
}

}  // namespace csgm
