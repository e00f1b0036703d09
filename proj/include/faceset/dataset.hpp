// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace faceset {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// N x D feature rows (face embeddings or pooled classifier features).
// Rows with face_found == false are all-zero placeholders and are skipped
// by every metric.
struct EmbeddingSet {
    std::vector<std::string> ids;
    RowMatrix matrix;
    bool normalized = false;
    std::vector<bool> face_found;

    std::size_t rows() const { return static_cast<std::size_t>(matrix.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(matrix.cols()); }
    std::size_t valid_count() const;

    // Throws InvalidInput on shape, duplicate id or placeholder violations.
    void validate() const;

    // Largest |norm - 1| over valid rows.
    double max_unit_norm_deviation() const;

    // All rows valid.
    static EmbeddingSet from_rows(std::vector<std::string> ids, RowMatrix matrix,
                                  bool normalized = false);
};

// N x C class probabilities p(y|x), one row per image.
struct ClassProbabilitySet {
    std::vector<std::string> ids;
    RowMatrix matrix;

    std::size_t rows() const { return static_cast<std::size_t>(matrix.rows()); }
    std::size_t classes() const { return static_cast<std::size_t>(matrix.cols()); }

    // Entries in [0, 1], rows sum to 1 within 1e-5, unique ids.
    void validate() const;
};

// Ids "0000", "0001", ... so lexicographic order equals row order.
std::vector<std::string> sequential_ids(std::size_t n, const std::string& prefix = "");

}  // namespace faceset
