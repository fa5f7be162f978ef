#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "binclust/binary_matrix.hpp"
#include "binclust/cluster_state.hpp"

namespace binclust {

struct ContingencyTable {
    std::vector<std::vector<std::size_t>> counts; // [predicted][true]
    std::vector<std::size_t> row_totals;
    std::vector<std::size_t> col_totals;
    std::size_t total = 0;

    std::size_t n_pred() const noexcept { return counts.size(); }
    std::size_t n_true() const noexcept { return col_totals.size(); }
};

/// Labels are compacted (first appearance order) before counting.
inline ContingencyTable contingency(std::span<const std::size_t> pred, std::span<const std::size_t> truth)
{
    if (pred.size() != truth.size()) {
        throw std::invalid_argument("label vectors differ in length (" + std::to_string(pred.size()) +
                                    " vs " + std::to_string(truth.size()) + ")");
    }
    const auto p = compact_labels(pred);
    const auto t = compact_labels(truth);
    const std::size_t kp = p.empty() ? 0 : *std::max_element(p.begin(), p.end()) + 1;
    const std::size_t kt = t.empty() ? 0 : *std::max_element(t.begin(), t.end()) + 1;
    ContingencyTable table;
    table.counts.assign(kp, std::vector<std::size_t>(kt, 0));
    table.row_totals.assign(kp, 0);
    table.col_totals.assign(kt, 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        ++table.counts[p[i]][t[i]];
        ++table.row_totals[p[i]];
        ++table.col_totals[t[i]];
    }
    table.total = p.size();
    return table;
}

/// Maximum-weight one-to-one matching between rows and columns of a
/// non-negative weight matrix (Hungarian algorithm, O(n^2 m)). Returns, for
/// each row, the matched column or npos when the row is left unmatched.
inline std::vector<std::size_t> max_weight_matching(const std::vector<std::vector<std::size_t>>& weight)
{
    constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
    const std::size_t rows = weight.size();
    const std::size_t cols = rows == 0 ? 0 : weight.front().size();
    if (rows == 0 || cols == 0) {
        return std::vector<std::size_t>(rows, npos);
    }
    // Square padding with zero weights; minimize cost = max - weight.
    const std::size_t n = std::max(rows, cols);
    std::size_t wmax = 0;
    for (const auto& r : weight) {
        for (auto w : r) {
            wmax = std::max(wmax, w);
        }
    }
    auto cost = [&](std::size_t r, std::size_t c) -> long long {
        const std::size_t w = (r < rows && c < cols) ? weight[r][c] : 0;
        return static_cast<long long>(wmax) - static_cast<long long>(w);
    };

    constexpr long long inf = std::numeric_limits<long long>::max() / 4;
    std::vector<long long> u(n + 1, 0), v(n + 1, 0);
    std::vector<std::size_t> match_col(n + 1, 0), way(n + 1, 0); // 1-based, match_col[c] = row
    for (std::size_t r = 1; r <= n; ++r) {
        match_col[0] = r;
        std::size_t c0 = 0;
        std::vector<long long> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[c0] = true;
            const std::size_t r0 = match_col[c0];
            long long delta = inf;
            std::size_t c1 = 0;
            for (std::size_t c = 1; c <= n; ++c) {
                if (used[c]) {
                    continue;
                }
                const long long cur = cost(r0 - 1, c - 1) - u[r0] - v[c];
                if (cur < minv[c]) {
                    minv[c] = cur;
                    way[c] = c0;
                }
                if (minv[c] < delta) {
                    delta = minv[c];
                    c1 = c;
                }
            }
            for (std::size_t c = 0; c <= n; ++c) {
                if (used[c]) {
                    u[match_col[c]] += delta;
                    v[c] -= delta;
                } else {
                    minv[c] -= delta;
                }
            }
            c0 = c1;
        } while (match_col[c0] != 0);
        do {
            const std::size_t c1 = way[c0];
            match_col[c0] = match_col[c1];
            c0 = c1;
        } while (c0 != 0);
    }

    std::vector<std::size_t> assignment(rows, npos);
    for (std::size_t c = 1; c <= n; ++c) {
        const std::size_t r = match_col[c];
        if (r >= 1 && r <= rows && c <= cols) {
            assignment[r - 1] = c - 1;
        }
    }
    return assignment;
}

/// Percentage of objects whose predicted cluster is paired with their true
/// cluster under the best one-to-one pairing of clusters. Surplus clusters
/// on either side stay unpaired and score nothing.
inline double matched_accuracy(std::span<const std::size_t> pred, std::span<const std::size_t> truth)
{
    const auto table = contingency(pred, truth);
    if (table.total == 0) {
        throw std::invalid_argument("matched_accuracy: empty label vectors");
    }
    const auto match = max_weight_matching(table.counts);
    std::size_t matched = 0;
    for (std::size_t r = 0; r < match.size(); ++r) {
        if (match[r] != std::numeric_limits<std::size_t>::max()) {
            matched += table.counts[r][match[r]];
        }
    }
    return 100.0 * static_cast<double>(matched) / static_cast<double>(table.total);
}

/// Row k holds N_jk / N_k for cluster k (labels must be compact).
inline std::vector<std::vector<double>> cluster_feature_frequencies(std::span<const std::size_t> assignments,
                                                                    const BinaryMatrix& data)
{
    const ClusterState state = make_state(data, assignments);
    std::vector<std::vector<double>> freq(state.n_clusters(), std::vector<double>(data.cols()));
    // make_state compacts in first-appearance order; map back to caller labels.
    std::vector<std::size_t> caller_label(state.n_clusters());
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        caller_label[state.assignments[i]] = assignments[i];
    }
    for (std::size_t k = 0; k < state.n_clusters(); ++k) {
        if (caller_label[k] >= state.n_clusters()) {
            throw std::invalid_argument("cluster_feature_frequencies: labels are not compact");
        }
        const auto counts = state.counts(k);
        auto& row = freq[caller_label[k]];
        for (std::size_t j = 0; j < data.cols(); ++j) {
            row[j] = static_cast<double>(counts[j]) / static_cast<double>(state.sizes[k]);
        }
    }
    return freq;
}

/// Object order grouping rows by cluster label, stable within a cluster.
inline std::vector<std::size_t> cluster_order(std::span<const std::size_t> assignments)
{
    std::vector<std::size_t> order(assignments.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return assignments[x] < assignments[y]; });
    return order;
}

} // namespace binclust
