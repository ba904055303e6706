#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace csgm {

// Full-covariance mixture parameters: the triplet (weights, means, covariances).
struct GmmParams {
    Eigen::VectorXd weights;                 // N_c, non-negative, sums to 1
    Eigen::MatrixXd means;                   // N_c x d
    std::vector<Eigen::MatrixXd> covariances;  // N_c symmetric d x d matrices

    int n_components() const { return static_cast<int>(weights.size()); }
    int dim() const { return static_cast<int>(means.cols()); }
};

struct EmConfig {
    int n_components = 1;
    int max_iter = 500;
    double rel_tol = 1e-6;
    // Relative covariance ridge: the absolute ridge added to each covariance
    // is reg_eps times the mean diagonal of the global data covariance.
    double reg_eps = 1e-6;
    int n_restarts = 5;
    std::uint64_t seed = 0;
};

struct FitReport {
    std::vector<double> log_likelihood_trace;
    bool converged = false;
    int iterations = 0;
    int best_restart = 0;
};

double log_gaussian_pdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                        const Eigen::MatrixXd& cov);

struct EStepResult {
    Eigen::MatrixXd responsibilities;  // N x N_c, rows sum to 1
    double log_likelihood = 0.0;
};

EStepResult e_step(const Eigen::MatrixXd& data, const GmmParams& params);

// ridge is the absolute value added to every covariance diagonal.
GmmParams m_step(const Eigen::MatrixXd& data, const Eigen::MatrixXd& responsibilities,
                 double ridge);

std::pair<GmmParams, FitReport> fit_em(const Eigen::MatrixXd& data, const EmConfig& cfg);

// Free parameters of a full-covariance mixture: (N_c - 1) weights,
// N_c * d means, N_c * d(d+1)/2 covariance entries.
long param_count(int n_components, int d);

double aic(double log_lik, long k);
double bic(double log_lik, long k, long n);

enum class Criterion { Aic, Bic };

struct SelectionRow {
    int n_components = 0;
    double log_likelihood = 0.0;
    double aic = 0.0;
    double bic = 0.0;
};

struct SelectionResult {
    int chosen = 0;
    std::vector<SelectionRow> table;
};

SelectionResult select_components(const Eigen::MatrixXd& data, int min_components,
                                  int max_components, const EmConfig& cfg,
                                  Criterion criterion);

std::string to_json_string(const GmmParams& params);
GmmParams gmm_from_json_string(const std::string& text);

void write_selection_csv(const std::vector<SelectionRow>& table, const std::string& path);

}  // namespace csgm
