#include "csgm/smote.hpp"

#include <iostream>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace csgm {

EncodedDataset smote_balance(const EncodedDataset& train, const SmoteConfig& cfg) {
    std::vector<Eigen::Index> class_rows[2];
    for (Eigen::Index i = 0; i < train.n(); ++i) {
        const int y = train.labels[i];
        if (y != 0 && y != 1) throw std::runtime_error("non-binary label in smote_balance");
        class_rows[y].push_back(i);
    }
    if (class_rows[0].empty() || class_rows[1].empty())
        throw std::runtime_error("smote_balance needs both classes present");

    const int minority = class_rows[1].size() < class_rows[0].size() ? 1 : 0;
    const auto& min_rows = class_rows[minority];
    const auto deficit = static_cast<Eigen::Index>(class_rows[1 - minority].size()) -
                         static_cast<Eigen::Index>(min_rows.size());
    if (deficit == 0) return train;

    if (min_rows.size() == 1)
        std::cerr << "smote_balance: minority class has a single member; duplicating it\n";

    // nearest minority neighbour per minority row, ties to the lowest index
    std::vector<Eigen::Index> nearest(min_rows.size(), -1);
    for (std::size_t a = 0; a < min_rows.size(); ++a) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < min_rows.size(); ++b) {
            if (a == b) continue;
            const double d2 =
                (train.features.row(min_rows[a]) - train.features.row(min_rows[b]))
                    .squaredNorm();
            if (d2 < best) {
                best = d2;
                nearest[a] = min_rows[b];
            }
        }
        if (nearest[a] < 0) nearest[a] = min_rows[a];  // size-1 fallback
    }

    EncodedDataset out;
    out.feature_names = train.feature_names;
    out.standardization = train.standardization;
    out.features.resize(train.n() + deficit, train.dim());
    out.labels.resize(train.n() + deficit);
    out.features.topRows(train.n()) = train.features;
    out.labels.head(train.n()) = train.labels;

    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::size_t> pick(0, min_rows.size() - 1);
    std::uniform_real_distribution<double> alpha_dist(0.0, 1.0);
    for (Eigen::Index s = 0; s < deficit; ++s) {
        const std::size_t a = pick(rng);
        const Eigen::Index x1 = min_rows[a];
        const Eigen::Index x2 = nearest[a];
        const double alpha = alpha_dist(rng);
        out.features.row(train.n() + s) =
            train.features.row(x1) + alpha * (train.features.row(x2) - train.features.row(x1));
        out.labels[train.n() + s] = minority;
    }
    return out;
}

}  // namespace csgm
