#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csgm/dataset.hpp"

namespace csgm {

struct LogisticModel {
    Eigen::VectorXd weights;
    double bias = 0.0;
    std::vector<double> loss_trace;  // per-epoch regularized NLL
};

// Full-batch gradient descent on the L2-regularized negative log-likelihood.
// Deterministic; the seed only perturbs the (default zero) initialization.
LogisticModel fit_logistic(const EncodedDataset& train, int epochs, double learning_rate,
                           double l2, std::uint64_t seed = 0);

double predict_logistic_prob(const LogisticModel& model, const Eigen::VectorXd& x);

// 1 iff probability > 0.5, strictly.
int predict_logistic(const LogisticModel& model, const Eigen::VectorXd& x);

// Gradient of the regularized NLL at (weights, bias); exposed for testing
// against finite differences. Returns d+1 values, bias derivative last.
Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& features,
                                  const Eigen::VectorXi& labels,
                                  const Eigen::VectorXd& weights, double bias, double l2);
double logistic_loss(const Eigen::MatrixXd& features, const Eigen::VectorXi& labels,
                     const Eigen::VectorXd& weights, double bias, double l2);

std::string to_json_string(const LogisticModel& model);

}  // namespace csgm
