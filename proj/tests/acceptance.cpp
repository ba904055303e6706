// Acceptance suite: one line per criterion, [PASS]/[FAIL]/[SKIP].
// Criteria that need the real UCI credit files skip with a notice when the
// files have not been supplied (see data/README.md).

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "csgm/dataset.hpp"
#include "csgm/gmm.hpp"
#include "csgm/metrics.hpp"
#include "csgm/model.hpp"
#include "csgm/smote.hpp"
#include "helpers.hpp"

using namespace csgm;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.empty() ? "" : " — ", detail.c_str());
    if (!ok) ++g_failures;
}

void skip(int criterion, const std::string& name, const std::string& why) {
    std::printf("[SKIP] criterion %d: %s — %s\n", criterion, name.c_str(), why.c_str());
}

struct RealRun {
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
};

// The reference experiment: encode, 2:1 split, standardize, SMOTE on train,
// BIC selection over [1,12], soft labeling at D=0.5.
RealRun run_pipeline(const DatasetConfig& cfg, std::uint64_t seed) {
    auto encoded = prepare_encoded(cfg);
    auto [train, test] = train_test_split(encoded, {2.0 / 3.0, seed});
    std::tie(train, test) = standardize_fit_apply(train, test);

    EmConfig em;
    em.seed = seed;
    auto fit = fit_csgm(train, em, {1, 12, Criterion::Bic}, SmoteConfig{seed}, 0.5);

    RealRun out;
    out.train_accuracy = fit.train_accuracy;
    out.test_accuracy = evaluate_model(fit.model, test).accuracy;
    return out;
}

// ---- criterion 1: metric-layer exactness from the published matrices ----

void criterion_1() {
    struct Case {
        ConfusionMatrix cm;
        double expected_accuracy;
    };
    const std::vector<Case> cases = {
        {{307, 151, 56, 402}, 0.7740},  // German train
        {{203, 51, 23, 183}, 0.8391},   // Australian train
        {{220, 14, 64, 142}, 0.8227},   // Japanese train
        {{9, 83, 16, 226}, 0.7035},     // German test
        {{104, 25, 10, 91}, 0.8478},    // Australian test
        {{125, 5, 31, 60}, 0.8371},     // Japanese test
    };
    bool ok = true;
    for (const auto& c : cases)
        if (std::abs(accuracy(c.cm) - c.expected_accuracy) > 1e-4) ok = false;

    const ConfusionMatrix german_test{9, 83, 16, 226};
    if (std::abs(*precision(german_test) - 0.73) > 0.005) ok = false;
    if (std::abs(*recall(german_test) - 0.93) > 0.005) ok = false;
    if (std::abs(*f1(german_test) - 0.82) > 0.005) ok = false;
    report(1, "metric-layer exactness on the six published confusion matrices", ok);
}

// ---- criterion 2: EM property suite ----

bool em_properties(const Eigen::MatrixXd& data, const EmConfig& cfg, std::string& why) {
    auto [params, rep] = fit_em(data, cfg);
    for (std::size_t i = 1; i < rep.log_likelihood_trace.size(); ++i)
        if (rep.log_likelihood_trace[i] < rep.log_likelihood_trace[i - 1] - 1e-8) {
            why = "log-likelihood decreased";
            return false;
        }
    if (std::abs(params.weights.sum() - 1.0) > 1e-12) {
        why = "weights do not sum to 1";
        return false;
    }
    const auto es = e_step(data, params);
    for (Eigen::Index i = 0; i < data.rows(); ++i)
        if (std::abs(es.responsibilities.row(i).sum() - 1.0) > 1e-12) {
            why = "responsibility row does not sum to 1";
            return false;
        }
    return true;
}

void criterion_2() {
    bool ok = true;
    std::string why;
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50 && ok; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 3);
        const int nc = 1 + static_cast<int>(rng() % 3);
        const int n = 40 + static_cast<int>(rng() % 60);
        std::normal_distribution<double> g(0.0, 1.0);
        Eigen::MatrixXd data(n, d);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j)
                data(i, j) = g(rng) + 4.0 * static_cast<double>(i % nc);
        EmConfig cfg;
        cfg.n_components = nc;
        cfg.n_restarts = 2;
        cfg.seed = rng();
        ok = em_properties(data, cfg, why);
    }
    report(2, "EM property suite on 50 synthetic instances", ok, why);

    int with_data = 0;
    bool real_ok = true;
    for (const auto* name : {"german", "australian", "japanese"}) {
        auto cfg = testutil::real_dataset_config(name);
        if (!cfg) continue;
        ++with_data;
        auto encoded = prepare_encoded(*cfg);
        auto [train, test] = train_test_split(encoded, {2.0 / 3.0, 1});
        std::tie(train, test) = standardize_fit_apply(train, test);
        EmConfig em;
        em.n_components = 3;
        em.n_restarts = 2;
        em.seed = 1;
        real_ok = real_ok && em_properties(train.features, em, why);
    }
    if (with_data == 3)
        report(2, "EM property suite on the three real datasets", real_ok, why);
    else
        skip(2, "EM property suite on the three real datasets",
             "UCI files not supplied (see data/README.md)");
}

// ---- criterion 3: parameter recovery oracle ----

void criterion_3() {
    bool ok = true;
    std::string why;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto data = testutil::mixture_1d(500, 500, -3.0, 3.0, seed * 7919);
        EmConfig cfg;
        cfg.n_components = 2;
        cfg.seed = seed;
        auto [p, rep] = fit_em(data, cfg);
        (void)rep;
        const int lo = p.means(0, 0) < p.means(1, 0) ? 0 : 1;
        if (std::abs(p.means(lo, 0) + 3.0) > 0.2 || std::abs(p.means(1 - lo, 0) - 3.0) > 0.2 ||
            std::abs(p.weights[0] - 0.5) > 0.05) {
            ok = false;
            why = "seed " + std::to_string(seed) + " out of tolerance";
            break;
        }
    }
    report(3, "parameter recovery on the +-3 unit-variance mixture, 10/10 seeds", ok, why);
}

// ---- criterion 4: density oracle ----

void criterion_4() {
    bool ok = true;
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 100 && ok; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 5);
        const Eigen::MatrixXd cov = testutil::random_spd(d, rng);
        Eigen::VectorXd x(d), mu(d);
        for (int j = 0; j < d; ++j) {
            x[j] = u(rng);
            mu[j] = u(rng);
        }
        if (std::abs(log_gaussian_pdf(x, mu, cov) -
                     testutil::log_mvn_bruteforce(x, mu, cov)) > 1e-9)
            ok = false;
    }

    // 1-D quadrature normalization
    Eigen::VectorXd mu(1);
    mu << -0.4;
    Eigen::MatrixXd cov(1, 1);
    cov << 0.49;
    const double sigma = 0.7;
    const int steps = 40000;
    const double lo = mu[0] - 10.0 * sigma, hi = mu[0] + 10.0 * sigma;
    const double h = (hi - lo) / steps;
    double integral = 0.0;
    for (int i = 0; i <= steps; ++i) {
        Eigen::VectorXd x(1);
        x << lo + i * h;
        const double f = std::exp(log_gaussian_pdf(x, mu, cov));
        integral += (i == 0 || i == steps) ? f / 2.0 : f;
    }
    integral *= h;
    if (std::abs(integral - 1.0) > 1e-6) ok = false;
    report(4, "density oracle (100 SPD instances, quadrature normalization)", ok);
}

// ---- criterion 5: AUC oracle ----

void criterion_5() {
    bool ok = true;
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int done = 0;
    while (done < 100) {
        const int n = 4 + static_cast<int>(rng() % 47);
        std::vector<double> scores(n);
        std::vector<int> actual(n);
        bool has0 = false, has1 = false;
        for (int i = 0; i < n; ++i) {
            scores[i] = std::round(u(rng) * 10.0) / 10.0;
            actual[i] = static_cast<int>(rng() % 2);
            (actual[i] == 1 ? has1 : has0) = true;
        }
        if (!has0 || !has1) continue;
        ++done;
        if (std::abs(roc_curve(scores, actual).auc -
                     testutil::auc_bruteforce(scores, actual)) > 1e-9)
            ok = false;
    }
    report(5, "trapezoidal AUC equals pair concordance on 100 random instances", ok);
}

// ---- criterion 6: SMOTE contract on the German train split ----

bool smote_contract(const EncodedDataset& train, std::uint64_t seed, std::string& why) {
    std::int64_t c0 = 0, c1 = 0;
    for (Eigen::Index i = 0; i < train.n(); ++i) train.labels[i] == 0 ? ++c0 : ++c1;
    const int minority = c1 < c0 ? 1 : 0;
    const std::int64_t majority_count = std::max(c0, c1);

    const auto out = smote_balance(train, {seed});
    std::int64_t o0 = 0, o1 = 0;
    for (Eigen::Index i = 0; i < out.n(); ++i) out.labels[i] == 0 ? ++o0 : ++o1;
    if (o0 != o1 || o0 != majority_count) {
        why = "classes not balanced to the majority count";
        return false;
    }
    if (out.features.topRows(train.n()) != train.features ||
        out.labels.head(train.n()) != train.labels) {
        why = "original rows not preserved bit-identically";
        return false;
    }
    // synthetic coordinates must lie within the minority coordinate range
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(train.dim(), 1e300);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(train.dim(), -1e300);
    for (Eigen::Index i = 0; i < train.n(); ++i)
        if (train.labels[i] == minority) {
            lo = lo.cwiseMin(train.features.row(i).transpose());
            hi = hi.cwiseMax(train.features.row(i).transpose());
        }
    for (Eigen::Index i = train.n(); i < out.n(); ++i)
        for (Eigen::Index j = 0; j < train.dim(); ++j)
            if (out.features(i, j) < lo[j] - 1e-12 || out.features(i, j) > hi[j] + 1e-12) {
                why = "synthetic coordinate outside the minority range";
                return false;
            }
    return true;
}

void criterion_6() {
    auto cfg = testutil::real_dataset_config("german");
    if (!cfg) {
        skip(6, "SMOTE contract on the German train split",
             "UCI files not supplied (see data/README.md)");
        return;
    }
    auto encoded = prepare_encoded(*cfg);
    bool ok = true;
    std::string why;
    for (std::uint64_t seed = 1; seed <= 5 && ok; ++seed) {
        auto [train, test] = train_test_split(encoded, {2.0 / 3.0, seed});
        std::tie(train, test) = standardize_fit_apply(train, test);
        ok = smote_contract(train, seed, why);
    }
    report(6, "SMOTE contract on the German train split (5 seeds)", ok, why);
}

// ---- criterion 7: end-to-end accuracy bands ----

void criterion_7() {
    struct Band {
        const char* name;
        double min_mean_test;
        std::optional<double> max_gap;
    };
    const std::vector<Band> bands = {{"australian", 0.78, 0.12},
                                     {"japanese", 0.78, 0.12},
                                     {"german", 0.62, std::nullopt}};
    bool any_missing = false;
    for (const auto& band : bands) {
        auto cfg = testutil::real_dataset_config(band.name);
        if (!cfg) {
            any_missing = true;
            continue;
        }
        double sum_test = 0.0, sum_gap = 0.0;
        const int n_seeds = 10;
        for (std::uint64_t seed = 1; seed <= n_seeds; ++seed) {
            const auto run = run_pipeline(*cfg, seed);
            sum_test += run.test_accuracy;
            sum_gap += std::abs(run.train_accuracy - run.test_accuracy);
        }
        const double mean_test = sum_test / n_seeds;
        const double mean_gap = sum_gap / n_seeds;
        bool ok = mean_test >= band.min_mean_test;
        std::string detail = "mean test accuracy " + std::to_string(mean_test);
        if (band.max_gap) {
            ok = ok && mean_gap < *band.max_gap;
            detail += ", mean |train-test| gap " + std::to_string(mean_gap);
        }
        report(7, std::string("end-to-end band on ") + band.name, ok, detail);
    }
    if (any_missing)
        skip(7, "end-to-end accuracy bands", "UCI files not supplied (see data/README.md)");
}

// ---- criterion 8: determinism ----

void criterion_8() {
    Eigen::MatrixXd centers(2, 2);
    centers << -3, -3, 3, 3;
    EncodedDataset train;
    train.features = testutil::blobs(centers, 60, 1.0, 88);
    train.labels.resize(120);
    for (int i = 0; i < 120; ++i) train.labels[i] = i < 60 ? 0 : 1;
    train.feature_names = {"a", "b"};

    EmConfig cfg;
    cfg.seed = 21;
    cfg.n_restarts = 3;
    auto f1 = fit_csgm(train, cfg, {1, 4, Criterion::Bic}, SmoteConfig{21}, 0.5);
    auto f2 = fit_csgm(train, cfg, {1, 4, Criterion::Bic}, SmoteConfig{21}, 0.5);
    const bool ok = to_json_string(f1.model) == to_json_string(f2.model) &&
                    to_json_string(evaluate_model(f1.model, train)) ==
                        to_json_string(evaluate_model(f2.model, train));
    report(8, "identical config and seed give byte-identical model and report", ok);
}

// ---- criterion 9: decision-boundary monotonicity ----

bool boundary_sweep_monotone(const CsgmModel& base, const EncodedDataset& test,
                             std::string& why) {
    std::vector<int> prev(static_cast<std::size_t>(test.n()), 1);
    std::optional<double> prev_recall;
    for (int step = 0; step <= 10; ++step) {
        auto model = base;
        model.decision_boundary = step / 10.0;
        const auto pred = predict_all(test.features, model);
        for (std::size_t i = 0; i < pred.size(); ++i)
            if (pred[i] > prev[i]) {
                why = "a prediction flipped 0 to 1 as D rose";
                return false;
            }
        std::vector<int> actual(static_cast<std::size_t>(test.n()));
        for (Eigen::Index i = 0; i < test.n(); ++i)
            actual[static_cast<std::size_t>(i)] = test.labels[i];
        const auto r = recall(confusion_matrix(pred, actual));
        if (prev_recall && r && *r > *prev_recall + 1e-12) {
            why = "recall increased as D rose";
            return false;
        }
        if (r) prev_recall = r;
        prev = pred;
    }
    return true;
}

void criterion_9() {
    auto cfg = testutil::real_dataset_config("australian");
    if (!cfg) {
        skip(9, "decision-boundary monotonicity on the Australian test set",
             "UCI files not supplied (see data/README.md)");
        // the property itself is still exercised on synthetic data
        Eigen::MatrixXd centers(2, 2);
        centers << -2, 2, 2, -2;
        EncodedDataset data;
        data.features = testutil::blobs(centers, 50, 1.2, 909);
        data.labels.resize(100);
        for (int i = 0; i < 100; ++i) data.labels[i] = i < 50 ? 0 : 1;
        data.feature_names = {"a", "b"};
        auto [train, test] = train_test_split(data, {2.0 / 3.0, 3});
        EmConfig em;
        em.seed = 3;
        em.n_restarts = 2;
        auto fit = fit_csgm(train, em, {1, 4, Criterion::Bic}, std::nullopt, 0.5);
        std::string why;
        report(9, "decision-boundary monotonicity (synthetic surrogate)",
               boundary_sweep_monotone(fit.model, test, why), why);
        return;
    }
    auto encoded = prepare_encoded(*cfg);
    auto [train, test] = train_test_split(encoded, {2.0 / 3.0, 1});
    std::tie(train, test) = standardize_fit_apply(train, test);
    EmConfig em;
    em.seed = 1;
    auto fit = fit_csgm(train, em, {1, 12, Criterion::Bic}, std::nullopt, 0.5);
    std::string why;
    report(9, "decision-boundary monotonicity on the Australian test set",
           boundary_sweep_monotone(fit.model, test, why), why);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures > 0) {
        std::printf("%d criterion check(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all executed criteria passed\n");
    return 0;
}
