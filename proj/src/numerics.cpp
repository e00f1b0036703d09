// SPDX-License-Identifier: Apache-2.0
#include "faceset/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "faceset/error.hpp"

namespace faceset::numerics {

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
    return 0.5 * (m + m.transpose());
}

void require_square_finite(const Eigen::MatrixXd& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw Error(ErrorCode::InvalidInput, std::string(what) + " must be a non-empty square matrix");
    }
    if (!m.allFinite()) {
        throw Error(ErrorCode::InvalidInput, std::string(what) + " contains non-finite values");
    }
}

// tr((S2^1/2 S1 S2^1/2)^1/2), or nullopt when the inner matrix is indefinite
// beyond tolerance.
std::optional<double> trace_sqrt_product(const Eigen::MatrixXd& s1, const Eigen::MatrixXd& s2) {
    PsdSqrt root2;
    try {
        root2 = sqrtm_psd(s2);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NotPSD) return std::nullopt;
        throw;
    }
    const Eigen::MatrixXd inner = symmetrized(root2.root * s1 * root2.root);
    const SymmetricEigen eig = sym_eigen(inner);
    const double lambda_max = eig.eigenvalues.maxCoeff();
    if (eig.eigenvalues.minCoeff() < -kPsdTolerance * std::max(lambda_max, 0.0)) {
        return std::nullopt;
    }
    double trace = 0.0;
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        trace += std::sqrt(std::max(eig.eigenvalues[i], 0.0));
    }
    return trace;
}

}  // namespace

GaussianSummary gaussian_summary(const EmbeddingSet& embeddings) {
    if (embeddings.face_found.size() != embeddings.rows()) {
        throw Error(ErrorCode::InvalidInput, "face_found length does not match row count");
    }
    const Eigen::Index dim = embeddings.matrix.cols();
    std::vector<Eigen::Index> valid;
    valid.reserve(embeddings.rows());
    for (Eigen::Index r = 0; r < embeddings.matrix.rows(); ++r) {
        if (!embeddings.face_found[static_cast<std::size_t>(r)]) continue;
        if (!embeddings.matrix.row(r).allFinite()) {
            throw Error(ErrorCode::InvalidInput,
                        "non-finite value in row " + std::to_string(r));
        }
        valid.push_back(r);
    }
    if (valid.size() < 2) {
        throw Error(ErrorCode::InsufficientSamples,
                    "need at least 2 valid rows, have " + std::to_string(valid.size()));
    }

    GaussianSummary out;
    out.sample_count = valid.size();
    out.excluded_count = embeddings.rows() - valid.size();

    const double n = static_cast<double>(valid.size());
    out.mean = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index r : valid) out.mean += embeddings.matrix.row(r).transpose();
    out.mean /= n;

    Eigen::MatrixXd centered(static_cast<Eigen::Index>(valid.size()), dim);
    for (std::size_t i = 0; i < valid.size(); ++i) {
        centered.row(static_cast<Eigen::Index>(i)) =
            embeddings.matrix.row(valid[i]) - out.mean.transpose();
    }
    out.covariance = symmetrized(centered.transpose() * centered) / (n - 1.0);
    return out;
}

SymmetricEigen sym_eigen(const Eigen::MatrixXd& m) {
    require_square_finite(m, "matrix");
    const double scale = m.cwiseAbs().maxCoeff();
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-9 * (1.0 + scale)) {
        throw Error(ErrorCode::NotSymmetric,
                    "max |M - M^T| = " + std::to_string(asym) + " exceeds tolerance");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrized(m), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::InvalidInput, "eigen decomposition did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

PsdSqrt sqrtm_psd(const Eigen::MatrixXd& m) {
    SymmetricEigen eig = sym_eigen(m);
    const double lambda_max = eig.eigenvalues.maxCoeff();
    const double tolerance = kPsdTolerance * std::max(1.0, lambda_max);

    PsdSqrt out;
    Eigen::VectorXd roots(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        double lambda = eig.eigenvalues[i];
        if (lambda < -tolerance) {
            throw Error(ErrorCode::NotPSD, "eigenvalue " + std::to_string(lambda) +
                                               " below tolerance " + std::to_string(-tolerance));
        }
        if (lambda < 0.0) {
            lambda = 0.0;
            ++out.clamped;
        }
        roots[i] = std::sqrt(lambda);
    }
    out.root = symmetrized(eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.transpose());
    return out;
}

FrechetResult frechet_distance(const GaussianSummary& a, const GaussianSummary& b) {
    if (a.dim() != b.dim() || a.covariance.rows() != a.dim() || b.covariance.rows() != b.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "summaries have dimensions " +
                                                      std::to_string(a.dim()) + " and " +
                                                      std::to_string(b.dim()));
    }
    const double mean_term = (a.mean - b.mean).squaredNorm();

    FrechetResult out;
    Eigen::MatrixXd s1 = a.covariance;
    Eigen::MatrixXd s2 = b.covariance;
    std::optional<double> trace_root = trace_sqrt_product(s1, s2);
    if (!trace_root) {
        const auto offset = kRegularizationEpsilon * Eigen::MatrixXd::Identity(a.dim(), a.dim());
        s1 += offset;
        s2 += offset;
        out.regularized = true;
        trace_root = trace_sqrt_product(s1, s2);
        if (!trace_root) {
            throw Error(ErrorCode::NotPSD,
                        "covariance product is indefinite even after regularization");
        }
    }
    const double value = mean_term + s1.trace() + s2.trace() - 2.0 * *trace_root;
    out.distance = std::max(value, 0.0);
    return out;
}

void validate(const GaussianSummary& summary) {
    const Eigen::Index d = summary.dim();
    if (summary.covariance.rows() != d || summary.covariance.cols() != d) {
        throw Error(ErrorCode::DimensionMismatch, "covariance shape does not match mean");
    }
    if (summary.sample_count < 2) {
        throw Error(ErrorCode::InsufficientSamples, "summary needs sample_count >= 2");
    }
    if (!summary.mean.allFinite() || !summary.covariance.allFinite()) {
        throw Error(ErrorCode::InvalidInput, "summary contains non-finite values");
    }
    const double scale = summary.covariance.cwiseAbs().maxCoeff();
    const double asym = (summary.covariance - summary.covariance.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * (1.0 + scale)) {
        throw Error(ErrorCode::NotSymmetric, "covariance is not symmetric");
    }
    const SymmetricEigen eig = sym_eigen(summary.covariance);
    const double lambda_max = eig.eigenvalues.maxCoeff();
    if (eig.eigenvalues.minCoeff() < -kPsdTolerance * std::max(1.0, lambda_max)) {
        throw Error(ErrorCode::NotPSD, "covariance is not positive semi-definite");
    }
}

}  // namespace faceset::numerics
