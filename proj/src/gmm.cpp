#include "csgm/gmm.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace csgm {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;
constexpr double kMaxRidge = 1e-2;

// Cholesky with ridge escalation: starts at base_ridge, multiplies by 10
// until the factorization succeeds or the ridge exceeds kMaxRidge.
Eigen::LLT<Eigen::MatrixXd> cholesky_regularized(const Eigen::MatrixXd& cov,
                                                 double base_ridge) {
    Eigen::MatrixXd c = cov;
    double ridge = 0.0;
    for (;;) {
        Eigen::LLT<Eigen::MatrixXd> llt(c);
        if (llt.info() == Eigen::Success && llt.matrixL().toDenseMatrix().diagonal().minCoeff() > 0.0)
            return llt;
        ridge = ridge == 0.0 ? base_ridge : ridge * 10.0;
        if (ridge > kMaxRidge)
            throw std::runtime_error("covariance not positive definite after regularization");
        c = cov + ridge * Eigen::MatrixXd::Identity(cov.rows(), cov.cols());
    }
}

double log_pdf_from_llt(const Eigen::VectorXd& diff,
                        const Eigen::LLT<Eigen::MatrixXd>& llt) {
    const Eigen::VectorXd z = llt.matrixL().solve(diff);
    const double log_det =
        2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return -0.5 * (static_cast<double>(diff.size()) * kLog2Pi + log_det + z.squaredNorm());
}

// Per-row log of the weighted component densities, N x N_c.
Eigen::MatrixXd weighted_log_densities(const Eigen::MatrixXd& data,
                                       const GmmParams& params) {
    const auto n = data.rows();
    const int nc = params.n_components();
    Eigen::MatrixXd out(n, nc);
    for (int k = 0; k < nc; ++k) {
        const auto llt = cholesky_regularized(params.covariances[static_cast<std::size_t>(k)], 1e-10);
        const double log_w = params.weights[k] > 0.0
                                 ? std::log(params.weights[k])
                                 : -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::VectorXd diff = data.row(i).transpose() - params.means.row(k).transpose();
            out(i, k) = log_w + log_pdf_from_llt(diff, llt);
        }
    }
    return out;
}

double logsumexp_row(const Eigen::RowVectorXd& row) {
    const double m = row.maxCoeff();
    if (!std::isfinite(m)) return m;
    return m + std::log((row.array() - m).exp().sum());
}

// Absolute ridge used by fit_em: reg_eps relative to the mean diagonal of
// the global data covariance.
double absolute_ridge(const Eigen::MatrixXd& data, double reg_eps) {
    const Eigen::RowVectorXd mean = data.colwise().mean();
    const double mean_var =
        (data.rowwise() - mean).array().square().sum() /
        (static_cast<double>(data.rows()) * static_cast<double>(data.cols()));
    return reg_eps * std::max(mean_var, 1e-12);
}

std::mt19937_64 restart_rng(std::uint64_t seed, int restart) {
    // independent stream per restart so serial and parallel execution agree
    return std::mt19937_64(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(restart + 1)));
}

// k-means++-style seeding: first center uniform, the rest picked with
// probability proportional to squared distance from the nearest chosen center.
Eigen::MatrixXd seed_means(const Eigen::MatrixXd& data, int nc, std::mt19937_64& rng) {
    const auto n = data.rows();
    Eigen::MatrixXd means(nc, data.cols());
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    means.row(0) = data.row(pick(rng));

    Eigen::VectorXd dist2 = (data.rowwise() - means.row(0)).rowwise().squaredNorm();
    for (int k = 1; k < nc; ++k) {
        const double total = dist2.sum();
        Eigen::Index chosen = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double target = u(rng);
            for (Eigen::Index i = 0; i < n; ++i) {
                target -= dist2[i];
                if (target <= 0.0) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = pick(rng);
        }
        means.row(k) = data.row(chosen);
        dist2 = dist2.cwiseMin((data.rowwise() - means.row(k)).rowwise().squaredNorm());
    }
    return means;
}

GmmParams initial_params(const Eigen::MatrixXd& data, int nc, double ridge,
                         std::mt19937_64& rng) {
    GmmParams params;
    params.weights = Eigen::VectorXd::Constant(nc, 1.0 / static_cast<double>(nc));
    params.means = seed_means(data, nc, rng);

    const Eigen::RowVectorXd mean = data.colwise().mean();
    const Eigen::MatrixXd centered = data.rowwise() - mean;
    Eigen::MatrixXd global_cov =
        centered.transpose() * centered / static_cast<double>(data.rows());
    global_cov += ridge * Eigen::MatrixXd::Identity(data.cols(), data.cols());
    params.covariances.assign(static_cast<std::size_t>(nc), global_cov);
    return params;
}

}  // namespace

double log_gaussian_pdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                        const Eigen::MatrixXd& cov) {
    if (x.size() != mean.size() || cov.rows() != x.size() || cov.cols() != x.size())
        throw std::runtime_error("dimension mismatch in log_gaussian_pdf");
    const auto llt = cholesky_regularized(cov, 1e-10);
    return log_pdf_from_llt(x - mean, llt);
}

EStepResult e_step(const Eigen::MatrixXd& data, const GmmParams& params) {
    if (data.cols() != params.dim()) throw std::runtime_error("dimension mismatch in e_step");
    const Eigen::MatrixXd log_wd = weighted_log_densities(data, params);

    EStepResult result;
    result.responsibilities.resize(data.rows(), params.n_components());
    result.log_likelihood = 0.0;
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        const double lse = logsumexp_row(log_wd.row(i));
        if (!std::isfinite(lse))
            throw std::runtime_error("all component densities vanished for row " +
                                     std::to_string(i));
        result.responsibilities.row(i) = (log_wd.row(i).array() - lse).exp();
        result.log_likelihood += lse;
    }
    return result;
}

GmmParams m_step(const Eigen::MatrixXd& data, const Eigen::MatrixXd& responsibilities,
                 double ridge) {
    const auto n = data.rows();
    const auto d = data.cols();
    const auto nc = responsibilities.cols();
    if (responsibilities.rows() != n) throw std::runtime_error("m_step shape mismatch");

    const Eigen::VectorXd nk = responsibilities.colwise().sum();
    if (nk.minCoeff() < 1e-10) throw std::runtime_error("degenerate component in m_step");

    GmmParams params;
    params.weights = nk / static_cast<double>(n);
    params.means = (responsibilities.transpose() * data).array().colwise() / nk.array();
    params.covariances.reserve(static_cast<std::size_t>(nc));
    for (Eigen::Index k = 0; k < nc; ++k) {
        const Eigen::MatrixXd centered = data.rowwise() - params.means.row(k);
        Eigen::MatrixXd cov =
            centered.transpose() * (responsibilities.col(k).asDiagonal() * centered) / nk[k];
        cov += ridge * Eigen::MatrixXd::Identity(d, d);
        params.covariances.push_back(std::move(cov));
    }
    return params;
}

std::pair<GmmParams, FitReport> fit_em(const Eigen::MatrixXd& data, const EmConfig& cfg) {
    if (cfg.n_components < 1 || cfg.max_iter < 1 || cfg.rel_tol <= 0.0 ||
        cfg.rel_tol >= 1.0 || cfg.reg_eps <= 0.0 || cfg.n_restarts < 1)
        throw std::runtime_error("invalid EmConfig");
    if (data.rows() <= cfg.n_components)
        throw std::runtime_error("need more samples than components");
    if (!data.allFinite()) throw std::runtime_error("non-finite data");

    const double ridge = absolute_ridge(data, cfg.reg_eps);

    GmmParams best_params;
    FitReport best_report;
    double best_ll = -std::numeric_limits<double>::infinity();
    bool any_success = false;

    for (int restart = 0; restart < cfg.n_restarts; ++restart) {
        auto rng = restart_rng(cfg.seed, restart);
        try {
            GmmParams params = initial_params(data, cfg.n_components, ridge, rng);
            FitReport report;
            double prev_ll = -std::numeric_limits<double>::infinity();
            for (int iter = 0; iter < cfg.max_iter; ++iter) {
                auto es = e_step(data, params);
                params = m_step(data, es.responsibilities, ridge);
                report.log_likelihood_trace.push_back(es.log_likelihood);
                report.iterations = iter + 1;
                if (iter > 0 &&
                    std::abs(es.log_likelihood - prev_ll) <=
                        cfg.rel_tol * std::abs(prev_ll)) {
                    report.converged = true;
                    break;
                }
                prev_ll = es.log_likelihood;
            }
            const double final_ll = report.log_likelihood_trace.back();
            if (!any_success || final_ll > best_ll) {
                best_ll = final_ll;
                best_params = params;
                best_report = report;
                best_report.best_restart = restart;
                any_success = true;
            }
        } catch (const std::runtime_error&) {
            // degenerate restart; try the next one
        }
    }
    if (!any_success) throw std::runtime_error("all EM restarts failed");
    return {best_params, best_report};
}

long param_count(int n_components, int d) {
    if (n_components < 1 || d < 1) throw std::runtime_error("invalid param_count arguments");
    const long nc = n_components;
    const long dl = d;
    return (nc - 1) + nc * dl + nc * dl * (dl + 1) / 2;
}

double aic(double log_lik, long k) { return 2.0 * static_cast<double>(k) - 2.0 * log_lik; }

double bic(double log_lik, long k, long n) {
    return static_cast<double>(k) * std::log(static_cast<double>(n)) - 2.0 * log_lik;
}

SelectionResult select_components(const Eigen::MatrixXd& data, int min_components,
                                  int max_components, const EmConfig& cfg,
                                  Criterion criterion) {
    if (min_components < 1 || max_components < min_components)
        throw std::runtime_error("invalid component range");
    if (data.rows() <= max_components)
        throw std::runtime_error("need more samples than the largest candidate");

    SelectionResult result;
    double best = std::numeric_limits<double>::infinity();
    for (int nc = min_components; nc <= max_components; ++nc) {
        EmConfig c = cfg;
        c.n_components = nc;
        auto [params, report] = fit_em(data, c);
        (void)params;
        const double ll = report.log_likelihood_trace.back();
        const long k = param_count(nc, static_cast<int>(data.cols()));
        SelectionRow row{nc, ll, aic(ll, k), bic(ll, k, data.rows())};
        const double score = criterion == Criterion::Aic ? row.aic : row.bic;
        if (result.table.empty() || score < best) {
            best = score;
            result.chosen = nc;
        }
        result.table.push_back(row);
    }
    if (result.table.empty()) throw std::runtime_error("no candidate fitted");
    return result;
}

namespace {

nlohmann::json gmm_to_json(const GmmParams& params) {
    nlohmann::json j;
    j["weights"] = std::vector<double>(params.weights.data(),
                                       params.weights.data() + params.weights.size());
    std::vector<std::vector<double>> means;
    for (Eigen::Index k = 0; k < params.means.rows(); ++k) {
        std::vector<double> row(static_cast<std::size_t>(params.means.cols()));
        for (Eigen::Index c = 0; c < params.means.cols(); ++c)
            row[static_cast<std::size_t>(c)] = params.means(k, c);
        means.push_back(std::move(row));
    }
    j["means"] = means;
    std::vector<std::vector<std::vector<double>>> covs;
    for (const auto& cov : params.covariances) {
        std::vector<std::vector<double>> m;
        for (Eigen::Index r = 0; r < cov.rows(); ++r) {
            std::vector<double> row(static_cast<std::size_t>(cov.cols()));
            for (Eigen::Index c = 0; c < cov.cols(); ++c)
                row[static_cast<std::size_t>(c)] = cov(r, c);
            m.push_back(std::move(row));
        }
        covs.push_back(std::move(m));
    }
    j["covariances"] = covs;
    return j;
}

GmmParams gmm_from_json(const nlohmann::json& j) {
    GmmParams params;
    const auto weights = j.at("weights").get<std::vector<double>>();
    params.weights = Eigen::Map<const Eigen::VectorXd>(weights.data(),
                                                       static_cast<Eigen::Index>(weights.size()));
    const auto means = j.at("means").get<std::vector<std::vector<double>>>();
    if (means.empty()) throw std::runtime_error("empty means in GMM document");
    params.means.resize(static_cast<Eigen::Index>(means.size()),
                        static_cast<Eigen::Index>(means[0].size()));
    for (std::size_t k = 0; k < means.size(); ++k)
        params.means.row(static_cast<Eigen::Index>(k)) =
            Eigen::Map<const Eigen::RowVectorXd>(means[k].data(),
                                                 static_cast<Eigen::Index>(means[k].size()));
    for (const auto& covj : j.at("covariances")) {
        const auto m = covj.get<std::vector<std::vector<double>>>();
        Eigen::MatrixXd cov(static_cast<Eigen::Index>(m.size()),
                            static_cast<Eigen::Index>(m.empty() ? 0 : m[0].size()));
        for (std::size_t r = 0; r < m.size(); ++r)
            for (std::size_t c = 0; c < m[r].size(); ++c)
                cov(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m[r][c];
        params.covariances.push_back(std::move(cov));
    }
    return params;
}

}  // namespace

std::string to_json_string(const GmmParams& params) { return gmm_to_json(params).dump(2); }

GmmParams gmm_from_json_string(const std::string& text) {
    return gmm_from_json(nlohmann::json::parse(text));
}

void write_selection_csv(const std::vector<SelectionRow>& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "n_components,log_likelihood,aic,bic\n";
    out.precision(17);
    for (const auto& row : table)
        out << row.n_components << ',' << row.log_likelihood << ',' << row.aic << ','
            << row.bic << '\n';
}

}  // namespace csgm
