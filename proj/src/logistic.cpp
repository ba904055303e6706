#include "csgm/logistic.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace csgm {

namespace {

double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

// log(1 + exp(t)) without overflow
double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

}  // namespace

double logistic_loss(const Eigen::MatrixXd& features, const Eigen::VectorXi& labels,
                     const Eigen::VectorXd& weights, double bias, double l2) {
    const auto n = features.rows();
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = features.row(i).dot(weights) + bias;
        // -y*log(s) - (1-y)*log(1-s) = softplus(t) - y*t
        loss += softplus(t) - static_cast<double>(labels[i]) * t;
    }
    loss /= static_cast<double>(n);
    loss += 0.5 * l2 * weights.squaredNorm();
    return loss;
}

Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& features,
                                  const Eigen::VectorXi& labels,
                                  const Eigen::VectorXd& weights, double bias, double l2) {
    const auto n = features.rows();
    const auto d = features.cols();
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(d + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = sigmoid(features.row(i).dot(weights) + bias) -
                         static_cast<double>(labels[i]);
        grad.head(d) += r * features.row(i).transpose();
        grad[d] += r;
    }
    grad /= static_cast<double>(n);
    grad.head(d) += l2 * weights;
    return grad;
}

LogisticModel fit_logistic(const EncodedDataset& train, int epochs, double learning_rate,
                           double l2, std::uint64_t seed) {
    if (epochs < 1 || learning_rate <= 0.0 || l2 < 0.0)
        throw std::runtime_error("invalid logistic hyperparameters");

    const auto d = train.dim();
    LogisticModel model;
    model.weights = Eigen::VectorXd::Zero(d);
    model.bias = 0.0;
    if (seed != 0) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-0.01, 0.01);
        for (Eigen::Index j = 0; j < d; ++j) model.weights[j] = u(rng);
    }

    for (int epoch = 0; epoch < epochs; ++epoch) {
        const Eigen::VectorXd grad =
            logistic_gradient(train.features, train.labels, model.weights, model.bias, l2);
        model.weights -= learning_rate * grad.head(d);
        model.bias -= learning_rate * grad[d];
        const double loss =
            logistic_loss(train.features, train.labels, model.weights, model.bias, l2);
        if (!std::isfinite(loss))
            throw std::runtime_error("logistic loss diverged at epoch " +
                                     std::to_string(epoch));
        model.loss_trace.push_back(loss);
    }
    return model;
}

double predict_logistic_prob(const LogisticModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.weights.size())
        throw std::runtime_error("dimension mismatch in predict_logistic");
    return sigmoid(model.weights.dot(x) + model.bias);
}

int predict_logistic(const LogisticModel& model, const Eigen::VectorXd& x) {
    return predict_logistic_prob(model, x) > 0.5 ? 1 : 0;
}

std::string to_json_string(const LogisticModel& model) {
    nlohmann::json j;
    j["weights"] = std::vector<double>(model.weights.data(),
                                       model.weights.data() + model.weights.size());
    j["bias"] = model.bias;
    j["loss_trace"] = model.loss_trace;
    return j.dump(2);
}

}  // namespace csgm
