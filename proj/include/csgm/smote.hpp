#pragma once

#include <cstdint>

#include "csgm/dataset.hpp"

namespace csgm {

struct SmoteConfig {
    std::uint64_t seed = 0;
};

// Oversample the minority class until both classes have equal counts.
// Each synthetic point lies on the open segment between a randomly picked
// minority sample and its nearest minority neighbour (Euclidean distance,
// ties broken by lowest row index). Original rows are preserved verbatim;
// synthetic rows are appended after them.
EncodedDataset smote_balance(const EncodedDataset& train, const SmoteConfig& cfg);

}  // namespace csgm
