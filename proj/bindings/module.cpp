#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "csgm/dataset.hpp"
#include "csgm/gmm.hpp"
#include "csgm/logistic.hpp"
#include "csgm/metrics.hpp"
#include "csgm/model.hpp"
#include "csgm/smote.hpp"

namespace py = pybind11;
using namespace csgm;

namespace {

EncodedDataset make_dataset(const Eigen::MatrixXd& features, const Eigen::VectorXi& labels) {
    if (features.rows() != labels.size())
        throw std::invalid_argument("features and labels must have the same length");
    EncodedDataset ds;
    ds.features = features;
    ds.labels = labels;
    ds.feature_names.resize(static_cast<std::size_t>(features.cols()));
    for (Eigen::Index j = 0; j < features.cols(); ++j)
        ds.feature_names[static_cast<std::size_t>(j)] = "f" + std::to_string(j);
    return ds;
}

EmConfig make_em_config(int n_components, int max_iter, double rel_tol, double reg_eps,
                        int n_restarts, std::uint64_t seed) {
    EmConfig cfg;
    cfg.n_components = n_components;
    cfg.max_iter = max_iter;
    cfg.rel_tol = rel_tol;
    cfg.reg_eps = reg_eps;
    cfg.n_restarts = n_restarts;
    cfg.seed = seed;
    return cfg;
}

Criterion parse_criterion(const std::string& s) {
    if (s == "aic") return Criterion::Aic;
    if (s == "bic") return Criterion::Bic;
    throw std::invalid_argument("criterion must be 'aic' or 'bic'");
}

py::dict report_dict(const FitReport& report) {
    py::dict d;
    d["log_likelihood_trace"] = report.log_likelihood_trace;
    d["converged"] = report.converged;
    d["iterations"] = report.iterations;
    d["best_restart"] = report.best_restart;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Credit scoring with Gaussian mixtures: EM fitting, AIC/BIC model "
              "selection, cluster labeling, SMOTE and evaluation metrics";

    py::class_<GmmParams>(m, "GmmParams")
        .def_readonly("weights", &GmmParams::weights)
        .def_readonly("means", &GmmParams::means)
        .def_readonly("covariances", &GmmParams::covariances)
        .def_property_readonly("n_components", &GmmParams::n_components)
        .def("to_json", [](const GmmParams& p) { return to_json_string(p); })
        .def_static("from_json", &gmm_from_json_string);

    py::class_<CsgmModel>(m, "CsgmModel")
        .def_readonly("gmm", &CsgmModel::gmm)
        .def_readonly("ratio_good", &CsgmModel::ratio_good)
        .def_readonly("cluster_labels", &CsgmModel::cluster_labels)
        .def_readwrite("decision_boundary", &CsgmModel::decision_boundary)
        .def_readonly("cluster_counts", &CsgmModel::cluster_counts)
        .def("posterior_good",
             [](const CsgmModel& model, const Eigen::MatrixXd& features) {
                 return posterior_good_all(features, model);
             },
             py::arg("features"))
        .def("predict",
             [](const CsgmModel& model, const Eigen::MatrixXd& features) {
                 return predict_all(features, model);
             },
             py::arg("features"))
        .def("to_json", [](const CsgmModel& model) { return to_json_string(model); })
        .def_static("from_json", &model_from_json_string);

    py::class_<LogisticModel>(m, "LogisticModel")
        .def_readonly("weights", &LogisticModel::weights)
        .def_readonly("bias", &LogisticModel::bias)
        .def_readonly("loss_trace", &LogisticModel::loss_trace)
        .def("predict_prob",
             [](const LogisticModel& model, const Eigen::VectorXd& x) {
                 return predict_logistic_prob(model, x);
             })
        .def("predict", [](const LogisticModel& model, const Eigen::VectorXd& x) {
            return predict_logistic(model, x);
        });

    m.def("log_gaussian_pdf", &log_gaussian_pdf, py::arg("x"), py::arg("mean"),
          py::arg("cov"));

    m.def(
        "fit_em",
        [](const Eigen::MatrixXd& data, int n_components, int max_iter, double rel_tol,
           double reg_eps, int n_restarts, std::uint64_t seed) {
            auto [params, report] = fit_em(
                data, make_em_config(n_components, max_iter, rel_tol, reg_eps, n_restarts, seed));
            return py::make_tuple(params, report_dict(report));
        },
        py::arg("data"), py::arg("n_components"), py::arg("max_iter") = 500,
        py::arg("rel_tol") = 1e-6, py::arg("reg_eps") = 1e-6, py::arg("n_restarts") = 5,
        py::arg("seed") = 0);

    m.def(
        "select_components",
        [](const Eigen::MatrixXd& data, int min_components, int max_components,
           const std::string& criterion, int max_iter, double rel_tol, double reg_eps,
           int n_restarts, std::uint64_t seed) {
            const auto sel = select_components(
                data, min_components, max_components,
                make_em_config(1, max_iter, rel_tol, reg_eps, n_restarts, seed),
                parse_criterion(criterion));
            py::list table;
            for (const auto& row : sel.table) {
                py::dict d;
                d["n_components"] = row.n_components;
                d["log_likelihood"] = row.log_likelihood;
                d["aic"] = row.aic;
                d["bic"] = row.bic;
                table.append(d);
            }
            return py::make_tuple(sel.chosen, table);
        },
        py::arg("data"), py::arg("min_components"), py::arg("max_components"),
        py::arg("criterion") = "bic", py::arg("max_iter") = 500, py::arg("rel_tol") = 1e-6,
        py::arg("reg_eps") = 1e-6, py::arg("n_restarts") = 5, py::arg("seed") = 0);

    m.def(
        "smote_balance",
        [](const Eigen::MatrixXd& features, const Eigen::VectorXi& labels,
           std::uint64_t seed) {
            const auto out = smote_balance(make_dataset(features, labels), {seed});
            return py::make_tuple(out.features, out.labels);
        },
        py::arg("features"), py::arg("labels"), py::arg("seed") = 0);

    m.def(
        "fit_csgm",
        [](const Eigen::MatrixXd& features, const Eigen::VectorXi& labels,
           int min_components, int max_components, const std::string& criterion, bool smote,
           double boundary, int max_iter, double rel_tol, double reg_eps, int n_restarts,
           std::uint64_t seed) {
            std::optional<SmoteConfig> smote_cfg;
            if (smote) smote_cfg = SmoteConfig{seed};
            auto fit = fit_csgm(
                make_dataset(features, labels),
                make_em_config(1, max_iter, rel_tol, reg_eps, n_restarts, seed),
                {min_components, max_components, parse_criterion(criterion)}, smote_cfg,
                boundary);
            py::dict info = report_dict(fit.report);
            info["train_accuracy"] = fit.train_accuracy;
            return py::make_tuple(fit.model, info);
        },
        py::arg("features"), py::arg("labels"), py::arg("min_components") = 1,
        py::arg("max_components") = 12, py::arg("criterion") = "bic",
        py::arg("smote") = false, py::arg("boundary") = 0.5, py::arg("max_iter") = 500,
        py::arg("rel_tol") = 1e-6, py::arg("reg_eps") = 1e-6, py::arg("n_restarts") = 5,
        py::arg("seed") = 0);

    m.def(
        "confusion_matrix",
        [](const std::vector<int>& predicted, const std::vector<int>& actual) {
            const auto cm = confusion_matrix(predicted, actual);
            py::dict d;
            d["tn"] = cm.tn;
            d["fp"] = cm.fp;
            d["fn"] = cm.fn;
            d["tp"] = cm.tp;
            d["accuracy"] = accuracy(cm);
            auto opt = [](const std::optional<double>& v) {
                return v ? py::object(py::float_(*v)) : py::object(py::none());
            };
            d["precision"] = opt(precision(cm));
            d["recall"] = opt(recall(cm));
            d["f1"] = opt(f1(cm));
            return d;
        },
        py::arg("predicted"), py::arg("actual"));

    m.def(
        "roc_auc",
        [](const std::vector<double>& scores, const std::vector<int>& actual) {
            return roc_curve(scores, actual).auc;
        },
        py::arg("scores"), py::arg("actual"));

    m.def(
        "fit_logistic",
        [](const Eigen::MatrixXd& features, const Eigen::VectorXi& labels, int epochs,
           double learning_rate, double l2, std::uint64_t seed) {
            return fit_logistic(make_dataset(features, labels), epochs, learning_rate, l2,
                                seed);
        },
        py::arg("features"), py::arg("labels"), py::arg("epochs") = 2000,
        py::arg("learning_rate") = 0.1, py::arg("l2") = 1e-4, py::arg("seed") = 0);
}
