// SPDX-License-Identifier: Apache-2.0
#include "faceset/curator.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "faceset/error.hpp"
#include "faceset/metrics.hpp"

namespace faceset::curator {

namespace {

struct DistanceTable {
    std::vector<std::string> ids;     // sorted lexicographically
    std::vector<Eigen::Index> source;  // prepared row index for each sorted position
    RowMatrix rows;
    Eigen::MatrixXd squared;           // indexed by sorted position

    std::size_t size() const { return ids.size(); }
};

DistanceTable build_table(const EmbeddingSet& pool) {
    metrics::PreparedRows prepared = metrics::prepare_unit_rows(pool);
    const std::size_t v = prepared.ids.size();
    std::vector<std::size_t> order(v);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return prepared.ids[a] < prepared.ids[b];
    });

    DistanceTable table;
    table.rows = std::move(prepared.rows);
    table.ids.reserve(v);
    for (std::size_t i : order) {
        table.ids.push_back(prepared.ids[i]);
        table.source.push_back(static_cast<Eigen::Index>(i));
    }
    const auto n = static_cast<Eigen::Index>(v);
    table.squared = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = metrics::squared_distance(table.rows, table.source[static_cast<std::size_t>(i)],
                                                       table.source[static_cast<std::size_t>(j)]);
            table.squared(i, j) = d;
            table.squared(j, i) = d;
        }
    }
    return table;
}

void check_k(std::size_t k, std::size_t valid) {
    if (k == 0 || k > valid) {
        throw Error(ErrorCode::InvalidK, "k=" + std::to_string(k) + " must be in [1, " +
                                             std::to_string(valid) + "]");
    }
}

CurationResult summarize(const DistanceTable& table, const std::vector<std::size_t>& picked) {
    CurationResult out;
    out.selected_ids.reserve(picked.size());
    for (std::size_t p : picked) out.selected_ids.push_back(table.ids[p]);
    if (picked.size() < 2) return out;

    double min_d = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < picked.size(); ++i) {
        for (std::size_t j = i + 1; j < picked.size(); ++j) {
            const double d = table.squared(static_cast<Eigen::Index>(picked[i]),
                                           static_cast<Eigen::Index>(picked[j]));
            min_d = std::min(min_d, d);
            sum += d;
            ++pairs;
        }
    }
    out.min_pairwise_distance = min_d;
    out.mean_pairwise_distance = sum / static_cast<double>(pairs);
    // Keep min <= mean under rounding when every pair ties.
    out.mean_pairwise_distance = std::max(out.mean_pairwise_distance, min_d);
    return out;
}

}  // namespace

CurationResult curate_subset(const EmbeddingSet& pool, std::size_t k) {
    const DistanceTable table = build_table(pool);
    const std::size_t v = table.size();
    check_k(k, v);

    std::vector<std::size_t> picked;
    picked.reserve(k);

    if (k == 1) {
        const Eigen::RowVectorXd centre = table.rows.colwise().mean();
        double best = -1.0;
        std::size_t best_pos = 0;
        for (std::size_t p = 0; p < v; ++p) {
            const double d = (table.rows.row(table.source[p]) - centre).squaredNorm();
            if (d > best) {
                best = d;
                best_pos = p;
            }
        }
        picked.push_back(best_pos);
        return summarize(table, picked);
    }

    double best = -1.0;
    std::size_t first = 0;
    std::size_t second = 1;
    for (std::size_t a = 0; a < v; ++a) {
        for (std::size_t b = a + 1; b < v; ++b) {
            const double d = table.squared(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            if (d > best) {
                best = d;
                first = a;
                second = b;
            }
        }
    }
    std::vector<bool> taken(v, false);
    std::vector<double> nearest(v, std::numeric_limits<double>::infinity());
    auto take = [&](std::size_t p) {
        picked.push_back(p);
        taken[p] = true;
        for (std::size_t c = 0; c < v; ++c) {
            nearest[c] = std::min(
                nearest[c], table.squared(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(p)));
        }
    };
    take(first);
    take(second);

    while (picked.size() < k) {
        double farthest = -1.0;
        std::size_t candidate = v;
        for (std::size_t c = 0; c < v; ++c) {
            if (!taken[c] && nearest[c] > farthest) {
                farthest = nearest[c];
                candidate = c;
            }
        }
        take(candidate);
    }
    return summarize(table, picked);
}

CurationResult exhaustive_best_subset(const EmbeddingSet& pool, std::size_t k) {
    if (pool.valid_count() > kExhaustiveLimit) {
        throw Error(ErrorCode::PoolTooLarge, "exhaustive search is limited to " +
                                                 std::to_string(kExhaustiveLimit) + " valid rows, have " +
                                                 std::to_string(pool.valid_count()));
    }
    const DistanceTable table = build_table(pool);
    const std::size_t v = table.size();
    check_k(k, v);

    std::vector<std::size_t> combo(k);
    std::iota(combo.begin(), combo.end(), std::size_t{0});
    std::vector<std::size_t> best_combo = combo;
    double best = -1.0;
    double best_sum = -1.0;

    while (true) {
        double min_d = k < 2 ? 0.0 : std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (std::size_t i = 0; i < k && min_d >= best; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                const double d = table.squared(static_cast<Eigen::Index>(combo[i]), static_cast<Eigen::Index>(combo[j]));
                min_d = std::min(min_d, d);
                sum += d;
            }
        }
        // Equal minima fall back to the larger total spread; full ties keep
        // the earlier (lexicographically smaller) combination.
        if (min_d > best || (min_d == best && sum > best_sum)) {
            best = min_d;
            best_sum = sum;
            best_combo = combo;
        }

        // Advance to the next combination in lexicographic order.
        std::size_t i = k;
        while (i > 0 && combo[i - 1] == v - k + (i - 1)) --i;
        if (i == 0) break;
        ++combo[i - 1];
        for (std::size_t j = i; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
    return summarize(table, best_combo);
}

}  // namespace faceset::curator
