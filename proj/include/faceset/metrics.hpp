// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "faceset/dataset.hpp"
#include "faceset/numerics.hpp"

namespace faceset::metrics {

inline constexpr std::size_t kDefaultSplits = 10;
inline constexpr double kDefaultMatchThreshold = 0.6;

// Probabilities below this are raised to it and the row re-normalized
// before taking logs.
inline constexpr double kProbabilityFloor = 1e-12;

inline constexpr std::size_t kHistogramBins = 40;
inline constexpr double kMaxUnitSquaredDistance = 4.0;

struct InceptionScore {
    double mean = 0.0;
    double variance = 0.0;  // population variance across splits
    std::size_t splits = 0;
    std::vector<double> split_scores;
};

struct FidResult {
    double value = 0.0;
    bool regularized = false;
    std::size_t reference_rows = 0;
    std::size_t generated_rows = 0;
};

struct VariabilityReport {
    std::size_t pair_count = 0;
    double mean = 0.0;
    double variance = 0.0;  // population variance
    double min = 0.0;
    double max = 0.0;
    std::array<std::size_t, kHistogramBins> histogram{};  // equal bins over [0, 4]
};

struct MatchReport {
    std::size_t matching = 0;
    std::size_t not_matching = 0;
    std::size_t not_faces = 0;
    double threshold = kDefaultMatchThreshold;

    std::size_t total() const { return matching + not_matching + not_faces; }
};

// Row index ranges [begin, end) of `splits` contiguous groups whose sizes
// differ by at most one; the first n % splits groups get the extra row.
std::vector<std::pair<std::size_t, std::size_t>> split_ranges(std::size_t n, std::size_t splits);

InceptionScore inception_score(const ClassProbabilitySet& probs,
                               std::size_t splits = kDefaultSplits);

FidResult fid(const EmbeddingSet& reference, const EmbeddingSet& generated);

// Valid rows, L2-normalized unless the set already claims unit norm.
// Throws DegenerateEmbedding for a zero-norm row that needs normalizing.
struct PreparedRows {
    std::vector<std::string> ids;
    RowMatrix rows;
};
PreparedRows prepare_unit_rows(const EmbeddingSet& embeddings);

double squared_distance(const RowMatrix& rows, Eigen::Index i, Eigen::Index j);

std::size_t histogram_bin(double squared_distance);

VariabilityReport pairwise_variability(const EmbeddingSet& embeddings);

/// A generated row matches when its nearest valid reference row lies within
/// `threshold` (plain Euclidean distance). Rows without a detected face are
/// counted separately.
MatchReport match_classify(const EmbeddingSet& generated, const EmbeddingSet& reference,
                           double threshold = kDefaultMatchThreshold);

}  // namespace faceset::metrics
