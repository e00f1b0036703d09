// SPDX-License-Identifier: Apache-2.0
#include "faceset/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "faceset/error.hpp"

namespace faceset::metrics {

std::vector<std::pair<std::size_t, std::size_t>> split_ranges(std::size_t n, std::size_t splits) {
    if (splits == 0 || splits > n) {
        throw Error(ErrorCode::InvalidSplit, "splits=" + std::to_string(splits) +
                                                 " must be in [1, " + std::to_string(n) + "]");
    }
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    ranges.reserve(splits);
    const std::size_t base = n / splits;
    const std::size_t extra = n % splits;
    std::size_t begin = 0;
    for (std::size_t s = 0; s < splits; ++s) {
        const std::size_t size = base + (s < extra ? 1 : 0);
        ranges.emplace_back(begin, begin + size);
        begin += size;
    }
    return ranges;
}

InceptionScore inception_score(const ClassProbabilitySet& probs, std::size_t splits) {
    probs.validate();
    const auto ranges = split_ranges(probs.rows(), splits);

    RowMatrix floored = probs.matrix.cwiseMax(kProbabilityFloor);
    for (Eigen::Index r = 0; r < floored.rows(); ++r) {
        floored.row(r) /= floored.row(r).sum();
    }

    InceptionScore out;
    out.splits = splits;
    out.split_scores.reserve(splits);
    for (const auto& [begin, end] : ranges) {
        const auto rows = static_cast<Eigen::Index>(end - begin);
        const auto group = floored.middleRows(static_cast<Eigen::Index>(begin), rows);
        const Eigen::RowVectorXd marginal = group.colwise().sum() / static_cast<double>(rows);
        double kl_total = 0.0;
        for (Eigen::Index r = 0; r < rows; ++r) {
            double kl = 0.0;
            for (Eigen::Index c = 0; c < group.cols(); ++c) {
                const double p = group(r, c);
                kl += p * std::log(p / marginal[c]);
            }
            kl_total += kl;
        }
        out.split_scores.push_back(std::exp(kl_total / static_cast<double>(rows)));
    }

    double sum = 0.0;
    for (double s : out.split_scores) sum += s;
    out.mean = sum / static_cast<double>(splits);
    double spread = 0.0;
    for (double s : out.split_scores) spread += (s - out.mean) * (s - out.mean);
    out.variance = spread / static_cast<double>(splits);
    return out;
}

FidResult fid(const EmbeddingSet& reference, const EmbeddingSet& generated) {
    if (reference.dim() != generated.dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "reference has D=" + std::to_string(reference.dim()) +
                        ", generated has D=" + std::to_string(generated.dim()));
    }
    const auto ref_summary = numerics::gaussian_summary(reference);
    const auto gen_summary = numerics::gaussian_summary(generated);
    const auto frechet = numerics::frechet_distance(ref_summary, gen_summary);
    return {frechet.distance, frechet.regularized, ref_summary.sample_count,
            gen_summary.sample_count};
}

PreparedRows prepare_unit_rows(const EmbeddingSet& embeddings) {
    if (embeddings.face_found.size() != embeddings.rows() ||
        embeddings.ids.size() != embeddings.rows()) {
        throw Error(ErrorCode::InvalidInput, "ids / face_found length does not match row count");
    }
    PreparedRows out;
    out.rows.resize(static_cast<Eigen::Index>(embeddings.valid_count()), embeddings.matrix.cols());
    Eigen::Index next = 0;
    for (Eigen::Index r = 0; r < embeddings.matrix.rows(); ++r) {
        const auto idx = static_cast<std::size_t>(r);
        if (!embeddings.face_found[idx]) continue;
        const auto row = embeddings.matrix.row(r);
        if (!row.allFinite()) {
            throw Error(ErrorCode::InvalidInput, "non-finite value in row '" + embeddings.ids[idx] + "'");
        }
        if (embeddings.normalized) {
            out.rows.row(next) = row;
        } else {
            const double norm = row.norm();
            if (norm == 0.0) throw DegenerateEmbeddingError(embeddings.ids[idx]);
            out.rows.row(next) = row / norm;
        }
        out.ids.push_back(embeddings.ids[idx]);
        ++next;
    }
    return out;
}

double squared_distance(const RowMatrix& rows, Eigen::Index i, Eigen::Index j) {
    double sum = 0.0;
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
        const double diff = rows(i, c) - rows(j, c);
        sum += diff * diff;
    }
    return sum;
}

std::size_t histogram_bin(double squared_distance) {
    constexpr double width = kMaxUnitSquaredDistance / static_cast<double>(kHistogramBins);
    if (!(squared_distance > 0.0)) return 0;
    const auto bin = static_cast<std::size_t>(std::floor(squared_distance / width));
    return std::min(bin, kHistogramBins - 1);
}

VariabilityReport pairwise_variability(const EmbeddingSet& embeddings) {
    const PreparedRows prepared = prepare_unit_rows(embeddings);
    const Eigen::Index v = prepared.rows.rows();
    if (v < 2) {
        throw Error(ErrorCode::InsufficientSamples,
                    "pairwise variability needs at least 2 valid rows, have " + std::to_string(v));
    }

    std::vector<double> distances;
    distances.reserve(static_cast<std::size_t>(v * (v - 1) / 2));
    for (Eigen::Index i = 0; i < v; ++i) {
        for (Eigen::Index j = i + 1; j < v; ++j) {
            distances.push_back(squared_distance(prepared.rows, i, j));
        }
    }

    VariabilityReport out;
    out.pair_count = distances.size();
    out.min = std::numeric_limits<double>::infinity();
    out.max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (double d : distances) {
        sum += d;
        out.min = std::min(out.min, d);
        out.max = std::max(out.max, d);
        ++out.histogram[histogram_bin(d)];
    }
    const double count = static_cast<double>(out.pair_count);
    out.mean = sum / count;
    double spread = 0.0;
    for (double d : distances) spread += (d - out.mean) * (d - out.mean);
    out.variance = spread / count;
    return out;
}

MatchReport match_classify(const EmbeddingSet& generated, const EmbeddingSet& reference,
                           double threshold) {
    if (!std::isfinite(threshold) || threshold < 0.0) {
        throw Error(ErrorCode::InvalidInput, "threshold must be a finite non-negative number");
    }
    if (generated.dim() != reference.dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "generated has D=" + std::to_string(generated.dim()) +
                        ", reference has D=" + std::to_string(reference.dim()));
    }
    if (generated.face_found.size() != generated.rows() ||
        reference.face_found.size() != reference.rows()) {
        throw Error(ErrorCode::InvalidInput, "face_found length does not match row count");
    }
    std::vector<Eigen::Index> refs;
    for (Eigen::Index r = 0; r < reference.matrix.rows(); ++r) {
        if (reference.face_found[static_cast<std::size_t>(r)]) refs.push_back(r);
    }
    if (refs.empty()) {
        throw Error(ErrorCode::InsufficientReference, "reference set has no valid rows");
    }

    MatchReport out;
    out.threshold = threshold;
    for (Eigen::Index g = 0; g < generated.matrix.rows(); ++g) {
        if (!generated.face_found[static_cast<std::size_t>(g)]) {
            ++out.not_faces;
            continue;
        }
        double nearest = std::numeric_limits<double>::infinity();
        for (Eigen::Index r : refs) {
            nearest = std::min(nearest, (generated.matrix.row(g) - reference.matrix.row(r)).norm());
        }
        if (nearest <= threshold) {
            ++out.matching;
        } else {
            ++out.not_matching;
        }
    }
    return out;
}

}  // namespace faceset::metrics
