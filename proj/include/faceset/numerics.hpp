// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "faceset/dataset.hpp"

namespace faceset::numerics {

// Mean and unbiased (N - 1) covariance of the valid rows of a feature set.
struct GaussianSummary {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
    std::size_t sample_count = 0;
    std::size_t excluded_count = 0;  // face_found == false rows skipped

    Eigen::Index dim() const { return mean.size(); }
};

struct SymmetricEigen {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // columns, orthonormal
};

struct PsdSqrt {
    Eigen::MatrixXd root;
    std::size_t clamped = 0;  // negative eigenvalues within tolerance set to zero
};

struct FrechetResult {
    double distance = 0.0;
    bool regularized = false;  // epsilon * I was added to both covariances
};

/// Eigenvalues of a PSD matrix may fall this far below zero (relative to
/// max(1, lambda_max)) before the matrix is rejected.
inline constexpr double kPsdTolerance = 1e-8;

/// Diagonal offset added to both covariances when the inner product matrix
/// of the Frechet trace term is indefinite beyond tolerance.
inline constexpr double kRegularizationEpsilon = 1e-6;

GaussianSummary gaussian_summary(const EmbeddingSet& embeddings);

// Throws NotSymmetric when max|M - M^T| > 1e-9 * (1 + max|M|).
SymmetricEigen sym_eigen(const Eigen::MatrixXd& m);

PsdSqrt sqrtm_psd(const Eigen::MatrixXd& m);

/// Squared Wasserstein-2 distance between two Gaussians:
///   |mu1 - mu2|^2 + tr(S1) + tr(S2) - 2 tr((S2^1/2 S1 S2^1/2)^1/2)
/// clamped to be non-negative.
FrechetResult frechet_distance(const GaussianSummary& a, const GaussianSummary& b);

// Validates the GaussianSummary invariants (symmetry, PSD, sample count).
void validate(const GaussianSummary& summary);

}  // namespace faceset::numerics
