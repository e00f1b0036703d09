// SPDX-License-Identifier: Apache-2.0
#pragma once

// Seeded generators and brute-force oracles shared by the unit and
// acceptance suites. Oracles here deliberately avoid calling into the
// library code they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "faceset/dataset.hpp"

namespace support {

using faceset::EmbeddingSet;
using faceset::RowMatrix;
using Rng = std::mt19937_64;

inline RowMatrix gaussian_rows(Rng& rng, std::size_t n, std::size_t d, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    RowMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = normal(rng);
    return m;
}

inline RowMatrix unit_rows(Rng& rng, std::size_t n, std::size_t d) {
    RowMatrix m = gaussian_rows(rng, n, d);
    for (Eigen::Index r = 0; r < m.rows(); ++r) m.row(r) /= m.row(r).norm();
    return m;
}

// Unit vectors scattered around one random direction: normalize(dir + sigma * g).
inline RowMatrix jittered_cluster(Rng& rng, std::size_t n, std::size_t d, double sigma) {
    RowMatrix dir = unit_rows(rng, 1, d);
    RowMatrix m = gaussian_rows(rng, n, d, sigma);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        m.row(r) += dir.row(0);
        m.row(r) /= m.row(r).norm();
    }
    return m;
}

inline RowMatrix probability_rows(Rng& rng, std::size_t n, std::size_t c) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    RowMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            // Cube to get peaked rows and the occasional near-zero entry.
            const double u = uniform(rng);
            m(r, k) = u * u * u;
        }
        m.row(r) /= m.row(r).sum();
    }
    return m;
}

inline Eigen::MatrixXd random_symmetric(Rng& rng, std::size_t d) {
    const RowMatrix a = gaussian_rows(rng, d, d);
    return 0.5 * (Eigen::MatrixXd(a) + Eigen::MatrixXd(a).transpose());
}

// A * A^T + I
inline Eigen::MatrixXd random_spd(Rng& rng, std::size_t d) {
    const Eigen::MatrixXd a = gaussian_rows(rng, d, d);
    return a * a.transpose() + Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

inline Eigen::MatrixXd random_orthogonal(Rng& rng, std::size_t d) {
    const Eigen::MatrixXd a = gaussian_rows(rng, d, d);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    return qr.householderQ();
}

inline EmbeddingSet make_set(RowMatrix rows, bool normalized = false, const std::string& prefix = "") {
    const auto n = static_cast<std::size_t>(rows.rows());
    return EmbeddingSet::from_rows(faceset::sequential_ids(n, prefix), std::move(rows), normalized);
}

// ---------------------------------------------------------------- oracles --

struct PlainSummary {
    std::vector<double> mean;
    std::vector<std::vector<double>> cov;
};

// Welford streaming update.
inline PlainSummary streaming_summary(const RowMatrix& rows) {
    const auto d = static_cast<std::size_t>(rows.cols());
    PlainSummary s{std::vector<double>(d, 0.0), std::vector<std::vector<double>>(d, std::vector<double>(d, 0.0))};
    std::vector<double> delta(d);
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        const double n = static_cast<double>(r + 1);
        for (std::size_t i = 0; i < d; ++i) delta[i] = rows(r, static_cast<Eigen::Index>(i)) - s.mean[i];
        for (std::size_t i = 0; i < d; ++i) s.mean[i] += delta[i] / n;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                s.cov[i][j] += delta[i] * (rows(r, static_cast<Eigen::Index>(j)) - s.mean[j]);
    }
    for (auto& row : s.cov)
        for (double& v : row) v /= static_cast<double>(rows.rows() - 1);
    return s;
}

// Textbook second-pass covariance with plain loops.
inline PlainSummary two_pass_summary(const RowMatrix& rows) {
    const auto n = static_cast<std::size_t>(rows.rows());
    const auto d = static_cast<std::size_t>(rows.cols());
    PlainSummary s{std::vector<double>(d, 0.0), std::vector<std::vector<double>>(d, std::vector<double>(d, 0.0))};
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i < d; ++i) s.mean[i] += rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i));
    for (double& m : s.mean) m /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                s.cov[i][j] += (rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) - s.mean[i]) *
                               (rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) - s.mean[j]);
    for (auto& row : s.cov)
        for (double& v : row) v /= static_cast<double>(n - 1);
    return s;
}

// Sum_i (dmu_i^2 + s1_i + s2_i - 2 sqrt(s1_i s2_i)) for diagonal Gaussians.
inline double diagonal_frechet(const std::vector<double>& mu1, const std::vector<double>& var1,
                               const std::vector<double>& mu2, const std::vector<double>& var2) {
    double total = 0.0;
    for (std::size_t i = 0; i < mu1.size(); ++i) {
        const double dm = mu1[i] - mu2[i];
        total += dm * dm + var1[i] + var2[i] - 2.0 * std::sqrt(var1[i] * var2[i]);
    }
    return total;
}

// 2^D rows, one per sign pattern, whose sample mean is `mean` and whose
// unbiased sample covariance is diag(variance).
inline RowMatrix rows_with_diagonal_summary(const std::vector<double>& mean, const std::vector<double>& variance) {
    const std::size_t d = mean.size();
    const std::size_t n = std::size_t{1} << d;
    RowMatrix rows(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < d; ++j) {
            const double sign = ((r >> j) & 1u) ? 1.0 : -1.0;
            const double a = std::sqrt(variance[j] * static_cast<double>(n - 1) / static_cast<double>(n));
            rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = mean[j] + sign * a;
        }
    }
    return rows;
}

struct IsOracle {
    double mean;
    double variance;
    std::vector<double> scores;
};

// Direct double loop over rows and classes. Entries below 1e-12 are floored
// and rows re-normalized, matching the documented zero handling.
inline IsOracle inception_oracle(const RowMatrix& probs, std::size_t splits) {
    const auto n = static_cast<std::size_t>(probs.rows());
    const auto c = static_cast<std::size_t>(probs.cols());
    std::vector<std::vector<double>> p(n, std::vector<double>(c));
    for (std::size_t r = 0; r < n; ++r) {
        double sum = 0.0;
        for (std::size_t k = 0; k < c; ++k) {
            p[r][k] = std::max(probs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)), 1e-12);
            sum += p[r][k];
        }
        for (double& v : p[r]) v /= sum;
    }
    std::vector<std::size_t> sizes(splits, n / splits);
    for (std::size_t s = 0; s < n % splits; ++s) ++sizes[s];

    IsOracle out{0.0, 0.0, {}};
    std::size_t start = 0;
    for (std::size_t s = 0; s < splits; ++s) {
        std::vector<double> marginal(c, 0.0);
        for (std::size_t r = start; r < start + sizes[s]; ++r)
            for (std::size_t k = 0; k < c; ++k) marginal[k] += p[r][k] / static_cast<double>(sizes[s]);
        double kl = 0.0;
        for (std::size_t r = start; r < start + sizes[s]; ++r)
            for (std::size_t k = 0; k < c; ++k) kl += p[r][k] * (std::log(p[r][k]) - std::log(marginal[k]));
        out.scores.push_back(std::exp(kl / static_cast<double>(sizes[s])));
        start += sizes[s];
    }
    for (double v : out.scores) out.mean += v / static_cast<double>(splits);
    for (double v : out.scores) out.variance += (v - out.mean) * (v - out.mean) / static_cast<double>(splits);
    return out;
}

struct PairOracle {
    std::size_t pairs = 0;
    double mean = 0.0;
    double variance = 0.0;
    double min = std::numeric_limits<double>::infinity();
    double max = 0.0;
    std::array<std::size_t, 40> histogram{};
};

// All unordered pairs (i < j, row-major order) of unit rows.
inline PairOracle pairwise_oracle(const RowMatrix& unit) {
    PairOracle o;
    std::vector<double> dist;
    for (Eigen::Index i = 0; i < unit.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < unit.rows(); ++j) {
            double s = 0.0;
            for (Eigen::Index k = 0; k < unit.cols(); ++k) s += (unit(i, k) - unit(j, k)) * (unit(i, k) - unit(j, k));
            dist.push_back(s);
        }
    }
    o.pairs = dist.size();
    double sum = 0.0;
    for (double d : dist) {
        sum += d;
        o.min = std::min(o.min, d);
        o.max = std::max(o.max, d);
        std::size_t bin = d <= 0.0 ? 0 : static_cast<std::size_t>(d / 0.1);
        ++o.histogram[std::min<std::size_t>(bin, 39)];
    }
    o.mean = sum / static_cast<double>(o.pairs);
    double spread = 0.0;
    for (double d : dist) spread += (d - o.mean) * (d - o.mean);
    o.variance = spread / static_cast<double>(o.pairs);
    return o;
}

inline RowMatrix normalized_copy(const RowMatrix& rows) {
    RowMatrix out = rows;
    for (Eigen::Index r = 0; r < out.rows(); ++r) out.row(r) /= out.row(r).norm();
    return out;
}

struct MatchOracle {
    std::size_t matching = 0, not_matching = 0, not_faces = 0;
};

inline MatchOracle match_oracle(const EmbeddingSet& gen, const EmbeddingSet& ref, double threshold) {
    MatchOracle o;
    for (Eigen::Index g = 0; g < gen.matrix.rows(); ++g) {
        if (!gen.face_found[static_cast<std::size_t>(g)]) {
            ++o.not_faces;
            continue;
        }
        std::vector<double> row_dist;
        for (Eigen::Index r = 0; r < ref.matrix.rows(); ++r) {
            if (!ref.face_found[static_cast<std::size_t>(r)]) continue;
            double s = 0.0;
            for (Eigen::Index k = 0; k < gen.matrix.cols(); ++k) {
                const double diff = gen.matrix(g, k) - ref.matrix(r, k);
                s += diff * diff;
            }
            row_dist.push_back(std::sqrt(s));
        }
        const double best = *std::min_element(row_dist.begin(), row_dist.end());
        (best <= threshold ? o.matching : o.not_matching)++;
    }
    return o;
}

struct SubsetOracle {
    std::vector<std::string> ids;  // sorted
    double min_distance = -1.0;
    double total = -1.0;
};

// Bitmask enumeration of every k-subset of (already prepared) rows. Equal
// minima prefer the larger distance total, then the smaller sorted id list.
inline SubsetOracle exhaustive_oracle(const RowMatrix& rows, const std::vector<std::string>& ids, std::size_t k) {
    const auto n = static_cast<std::size_t>(rows.rows());
    SubsetOracle best;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) members.push_back(i);
        double worst = k < 2 ? 0.0 : std::numeric_limits<double>::infinity();
        double total = 0.0;
        for (std::size_t a = 0; a < members.size(); ++a) {
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                double d = 0.0;
                for (Eigen::Index c = 0; c < rows.cols(); ++c) {
                    const double diff = rows(static_cast<Eigen::Index>(members[a]), c) -
                                        rows(static_cast<Eigen::Index>(members[b]), c);
                    d += diff * diff;
                }
                worst = std::min(worst, d);
                total += d;
            }
        }
        std::vector<std::string> names;
        for (std::size_t m : members) names.push_back(ids[m]);
        std::sort(names.begin(), names.end());
        const bool better = worst > best.min_distance ||
                            (worst == best.min_distance &&
                             (total > best.total || (total == best.total && names < best.ids)));
        if (better) {
            best.min_distance = worst;
            best.total = total;
            best.ids = names;
        }
    }
    return best;
}

// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("faceset_" + tag + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace support
