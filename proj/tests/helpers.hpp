#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "csgm/dataset.hpp"

namespace testutil {

// 1-D two-component mixture draw: n0 samples from N(mu0,1), n1 from N(mu1,1).
inline Eigen::MatrixXd mixture_1d(int n0, int n1, double mu0, double mu1,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g0(mu0, 1.0), g1(mu1, 1.0);
    Eigen::MatrixXd data(n0 + n1, 1);
    for (int i = 0; i < n0; ++i) data(i, 0) = g0(rng);
    for (int i = 0; i < n1; ++i) data(n0 + i, 0) = g1(rng);
    return data;
}

// Well-separated d-dimensional blobs around the given centers.
inline Eigen::MatrixXd blobs(const Eigen::MatrixXd& centers, int per_center, double sigma,
                             std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, sigma);
    Eigen::MatrixXd data(centers.rows() * per_center, centers.cols());
    for (Eigen::Index c = 0; c < centers.rows(); ++c)
        for (int i = 0; i < per_center; ++i) {
            const Eigen::Index row = c * per_center + i;
            for (Eigen::Index j = 0; j < centers.cols(); ++j)
                data(row, j) = centers(c, j) + g(rng);
        }
    return data;
}

inline Eigen::MatrixXd random_spd(int d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd a(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) a(r, c) = u(rng);
    return a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(d, d);
}

// Reference density evaluated the naive way, with explicit inverse and determinant.
inline double log_mvn_bruteforce(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                                 const Eigen::MatrixXd& cov) {
    const auto d = static_cast<double>(x.size());
    const Eigen::VectorXd diff = x - mean;
    const double quad = diff.dot(cov.inverse() * diff);
    return -0.5 * (d * std::log(2.0 * M_PI) + std::log(cov.determinant()) + quad);
}

// Mann-Whitney pair concordance with ties counted one half.
inline double auc_bruteforce(const std::vector<double>& scores,
                             const std::vector<int>& actual) {
    double concordant = 0.0;
    long pairs = 0;
    for (std::size_t p = 0; p < scores.size(); ++p) {
        if (actual[p] != 1) continue;
        for (std::size_t q = 0; q < scores.size(); ++q) {
            if (actual[q] != 0) continue;
            ++pairs;
            if (scores[p] > scores[q])
                concordant += 1.0;
            else if (scores[p] == scores[q])
                concordant += 0.5;
        }
    }
    return concordant / static_cast<double>(pairs);
}

inline std::filesystem::path source_dir() { return std::filesystem::path(CSGM_SOURCE_DIR); }

inline std::filesystem::path data_dir() {
    if (const char* env = std::getenv("CSGM_DATA_DIR")) return std::filesystem::path(env);
    return source_dir() / "data";
}

// Dataset config with the data path resolved against data_dir();
// nullopt when the UCI file has not been supplied.
inline std::optional<csgm::DatasetConfig> real_dataset_config(const std::string& name) {
    const auto cfg_path = source_dir() / "configs" / (name + ".json");
    auto cfg = csgm::load_dataset_config(cfg_path.string());
    const auto file = data_dir() / std::filesystem::path(cfg.path).filename();
    if (!std::filesystem::exists(file)) return std::nullopt;
    cfg.path = file.string();
    return cfg;
}

inline std::filesystem::path write_temp_file(const std::string& name,
                                             const std::string& contents) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << contents;
    return path;
}

}  // namespace testutil
