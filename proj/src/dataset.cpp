// SPDX-License-Identifier: Apache-2.0
#include "faceset/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "faceset/error.hpp"

namespace faceset {

namespace {

void check_unique(const std::vector<std::string>& ids) {
    std::unordered_set<std::string> seen;
    seen.reserve(ids.size());
    for (const auto& id : ids) {
        if (!seen.insert(id).second) {
            throw Error(ErrorCode::InvalidInput, "duplicate id '" + id + "'");
        }
    }
}

}  // namespace

std::size_t EmbeddingSet::valid_count() const {
    std::size_t n = 0;
    for (bool f : face_found) n += f ? 1 : 0;
    return n;
}

void EmbeddingSet::validate() const {
    if (ids.size() != rows() || face_found.size() != rows()) {
        throw Error(ErrorCode::InvalidInput,
                    "row count " + std::to_string(rows()) + " does not match " +
                        std::to_string(ids.size()) + " ids / " +
                        std::to_string(face_found.size()) + " face flags");
    }
    check_unique(ids);
    for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
        if (face_found[static_cast<std::size_t>(r)]) {
            if (!matrix.row(r).allFinite()) {
                throw Error(ErrorCode::InvalidInput, "non-finite value in row '" +
                                                         ids[static_cast<std::size_t>(r)] + "'");
            }
        } else if ((matrix.row(r).array() != 0.0).any()) {
            throw Error(ErrorCode::InvalidInput,
                        "row '" + ids[static_cast<std::size_t>(r)] +
                            "' has face_found=false but is not an all-zero placeholder");
        }
    }
}

double EmbeddingSet::max_unit_norm_deviation() const {
    double worst = 0.0;
    for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
        if (!face_found[static_cast<std::size_t>(r)]) continue;
        worst = std::max(worst, std::abs(matrix.row(r).norm() - 1.0));
    }
    return worst;
}

EmbeddingSet EmbeddingSet::from_rows(std::vector<std::string> ids, RowMatrix matrix,
                                     bool normalized) {
    EmbeddingSet set;
    set.face_found.assign(static_cast<std::size_t>(matrix.rows()), true);
    set.ids = std::move(ids);
    set.matrix = std::move(matrix);
    set.normalized = normalized;
    return set;
}

void ClassProbabilitySet::validate() const {
    if (ids.size() != rows()) {
        throw Error(ErrorCode::InvalidInput, "row count " + std::to_string(rows()) +
                                                 " does not match " + std::to_string(ids.size()) +
                                                 " ids");
    }
    check_unique(ids);
    for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
        const auto row = matrix.row(r);
        if (!row.allFinite() || (row.array() < 0.0).any() || (row.array() > 1.0).any()) {
            throw Error(ErrorCode::InvalidInput,
                        "probability row '" + ids[static_cast<std::size_t>(r)] +
                            "' has entries outside [0, 1]");
        }
        if (std::abs(row.sum() - 1.0) > 1e-5) {
            throw Error(ErrorCode::InvalidInput, "probability row '" +
                                                     ids[static_cast<std::size_t>(r)] +
                                                     "' does not sum to 1");
        }
    }
}

std::vector<std::string> sequential_ids(std::size_t n, const std::string& prefix) {
    std::vector<std::string> ids;
    ids.reserve(n);
    const int width = n <= 10000 ? 4 : static_cast<int>(std::to_string(n - 1).size());
    for (std::size_t i = 0; i < n; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%0*zu", width, i);
        ids.push_back(prefix + buf);
    }
    return ids;
}

}  // namespace faceset
