// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "faceset/dataset.hpp"

namespace faceset::curator {

// Upper bound on valid rows accepted by exhaustive_best_subset.
inline constexpr std::size_t kExhaustiveLimit = 20;

struct CurationResult {
    std::vector<std::string> selected_ids;
    double min_pairwise_distance = 0.0;   // squared distance, 0 when k == 1
    double mean_pairwise_distance = 0.0;  // squared distance, 0 when k == 1
};

/// Greedy max-min dispersion (farthest-point insertion) over the valid rows.
///
/// For k >= 2 the farthest pair seeds the selection and each step adds the
/// candidate whose nearest selected row is farthest away. k == 1 picks the
/// row farthest from the pool mean. Ties go to the lexicographically
/// smallest id. `selected_ids` is in selection order. Rows are prepared the
/// same way as for pairwise variability.
CurationResult curate_subset(const EmbeddingSet& pool, std::size_t k);

/// Enumerates every k-subset of at most kExhaustiveLimit valid rows and
/// returns the one with the largest minimum pairwise squared distance.
/// Equal minima prefer the larger sum of pairwise distances, then the
/// lexicographically smallest sorted id list, which is also the order of
/// `selected_ids`.
CurationResult exhaustive_best_subset(const EmbeddingSet& pool, std::size_t k);

}  // namespace faceset::curator
