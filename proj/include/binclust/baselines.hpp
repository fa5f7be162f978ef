#pragma once

// k-means on binary rows with the gap statistic choosing k.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "binclust/binary_matrix.hpp"

namespace binclust {

struct KMeansOptions {
    std::size_t n_restarts = 5;
    std::size_t max_iters = 100;
};

struct KMeansResult {
    std::vector<std::size_t> labels;
    std::vector<double> centroids; // k x D row-major, entries in [0,1]
    std::size_t k = 0;
    double wcss = 0.0;             // within-cluster sum of squares
    std::vector<double> objective_trace; // wcss after each Lloyd iteration
    std::size_t iterations = 0;

    std::span<const double> centroid(std::size_t c) const
    {
        const std::size_t d = centroids.size() / k;
        return {centroids.data() + c * d, d};
    }
};

namespace detail {

class KMeansProblem {
public:
    explicit KMeansProblem(const BinaryMatrix& data) : data_(data), support_(data.row_supports())
    {
        nnz_.reserve(data.rows());
        for (const auto& s : support_) {
            nnz_.push_back(static_cast<double>(s.size()));
        }
    }

    template <class Rng>
    KMeansResult solve(std::size_t k, const KMeansOptions& opts, Rng& rng) const
    {
        if (k < 1 || k > data_.rows()) {
            throw std::invalid_argument("k must lie in [1, N]; got " + std::to_string(k));
        }
        if (opts.n_restarts == 0 || opts.max_iters == 0) {
            throw std::invalid_argument("n_restarts and max_iters must be positive");
        }
        KMeansResult best;
        for (std::size_t r = 0; r < opts.n_restarts; ++r) {
            KMeansResult cur = lloyd(k, opts.max_iters, rng);
            if (r == 0 || cur.wcss < best.wcss) {
                best = std::move(cur);
            }
        }
        return best;
    }

private:
    std::size_t n() const { return data_.rows(); }
    std::size_t d() const { return data_.cols(); }

    double sq_norm(std::span<const double> c) const
    {
        double s = 0.0;
        for (double v : c) {
            s += v * v;
        }
        return s;
    }

    // ||x_i - c||^2 = |x_i| - 2 x_i.c + ||c||^2
    double distance(std::size_t i, std::span<const double> c, double c_norm) const
    {
        double dot = 0.0;
        for (auto j : support_[i]) {
            dot += c[j];
        }
        return std::max(0.0, nnz_[i] - 2.0 * dot + c_norm);
    }

    template <class Rng>
    std::vector<double> seed_centroids(std::size_t k, Rng& rng) const
    {
        std::vector<double> centroids(k * d(), 0.0);
        std::vector<double> nearest(n(), std::numeric_limits<double>::infinity());
        std::uniform_int_distribution<std::size_t> uniform(0, n() - 1);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::size_t chosen = uniform(rng);
        for (std::size_t c = 0; c < k; ++c) {
            if (c > 0) {
                double total = 0.0;
                for (double v : nearest) {
                    total += v;
                }
                if (total > 0.0) {
                    const double target = unit(rng) * total;
                    double cumulative = 0.0;
                    chosen = n() - 1;
                    for (std::size_t i = 0; i < n(); ++i) {
                        cumulative += nearest[i];
                        if (target < cumulative) {
                            chosen = i;
                            break;
                        }
                    }
                } else {
                    chosen = uniform(rng);
                }
            }
            std::span<double> centre(centroids.data() + c * d(), d());
            for (auto j : support_[chosen]) {
                centre[j] = 1.0;
            }
            const double c_norm = nnz_[chosen];
            for (std::size_t i = 0; i < n(); ++i) {
                nearest[i] = std::min(nearest[i], distance(i, centre, c_norm));
            }
        }
        return centroids;
    }

    void recompute_centroids(std::size_t k, const std::vector<std::size_t>& labels,
                             std::vector<double>& centroids, std::vector<std::size_t>& sizes) const
    {
        std::fill(centroids.begin(), centroids.end(), 0.0);
        sizes.assign(k, 0);
        for (std::size_t i = 0; i < n(); ++i) {
            ++sizes[labels[i]];
            double* c = centroids.data() + labels[i] * d();
            for (auto j : support_[i]) {
                c[j] += 1.0;
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] == 0) {
                continue;
            }
            const double inv = 1.0 / static_cast<double>(sizes[c]);
            for (std::size_t j = 0; j < d(); ++j) {
                centroids[c * d() + j] *= inv;
            }
        }
    }

    template <class Rng>
    KMeansResult lloyd(std::size_t k, std::size_t max_iters, Rng& rng) const
    {
        KMeansResult res;
        res.k = k;
        res.centroids = seed_centroids(k, rng);
        res.labels.assign(n(), 0);
        std::vector<double> norms(k);
        std::vector<double> dist(n());
        std::vector<std::size_t> sizes;

        for (std::size_t iter = 0; iter < max_iters; ++iter) {
            for (std::size_t c = 0; c < k; ++c) {
                norms[c] = sq_norm(res.centroid(c));
            }
            bool changed = iter == 0;
            for (std::size_t i = 0; i < n(); ++i) {
                std::size_t best = 0;
                double best_dist = std::numeric_limits<double>::infinity();
                for (std::size_t c = 0; c < k; ++c) {
                    const double dc = distance(i, res.centroid(c), norms[c]);
                    if (dc < best_dist) {
                        best_dist = dc;
                        best = c;
                    }
                }
                changed = changed || best != res.labels[i];
                res.labels[i] = best;
                dist[i] = best_dist;
            }
            recompute_centroids(k, res.labels, res.centroids, sizes);

            // Empty clusters take the point farthest from its centroid,
            // drawn from clusters that can spare one.
            for (std::size_t c = 0; c < k; ++c) {
                if (sizes[c] != 0) {
                    continue;
                }
                std::size_t far = n();
                double far_dist = -1.0;
                for (std::size_t i = 0; i < n(); ++i) {
                    if (sizes[res.labels[i]] > 1 && dist[i] > far_dist) {
                        far_dist = dist[i];
                        far = i;
                    }
                }
                --sizes[res.labels[far]];
                res.labels[far] = c;
                sizes[c] = 1;
                dist[far] = 0.0;
                changed = true;
                recompute_centroids(k, res.labels, res.centroids, sizes);
            }

            res.iterations = iter + 1;
            res.wcss = wcss(res);
            res.objective_trace.push_back(res.wcss);
            if (!changed) {
                break;
            }
        }
        return res;
    }

    double wcss(const KMeansResult& res) const
    {
        std::vector<double> norms(res.k);
        for (std::size_t c = 0; c < res.k; ++c) {
            norms[c] = sq_norm(res.centroid(c));
        }
        double total = 0.0;
        for (std::size_t i = 0; i < n(); ++i) {
            total += distance(i, res.centroid(res.labels[i]), norms[res.labels[i]]);
        }
        return total;
    }

    const BinaryMatrix& data_;
    std::vector<std::vector<std::uint32_t>> support_;
    std::vector<double> nnz_;
};

} // namespace detail

/// Lloyd's algorithm with k-means++ seeding; best of n_restarts by WCSS.
template <class Rng>
KMeansResult kmeans_binary(const BinaryMatrix& data, std::size_t k, const KMeansOptions& opts, Rng& rng)
{
    return detail::KMeansProblem(data).solve(k, opts, rng);
}

struct GapResult {
    std::size_t chosen_k = 1;
    std::vector<double> gap_curve;        // Gap(k), k = 1..k_max
    std::vector<double> sk_curve;         // s_k
    std::vector<double> dispersion_curve; // log W_k of the data
    std::vector<double> ref_dispersion_curve; // mean reference log W_k
    std::vector<std::size_t> labels;      // k-means labels at chosen_k
};

/// Reference data set: every entry an independent Bernoulli draw with the
/// observed column mean.
template <class Rng>
BinaryMatrix bernoulli_reference(const BinaryMatrix& data, Rng& rng)
{
    const auto sums = data.column_sums();
    const auto n = static_cast<double>(data.rows());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::uint8_t> values(data.rows() * data.cols());
    for (std::size_t i = 0; i < data.rows(); ++i) {
        for (std::size_t j = 0; j < data.cols(); ++j) {
            values[i * data.cols() + j] = unit(rng) < static_cast<double>(sums[j]) / n ? 1 : 0;
        }
    }
    return BinaryMatrix(data.rows(), data.cols(), std::move(values));
}

/// Gap statistic over k = 1..k_max (k_max is capped at N). Picks the
/// smallest k with Gap(k) >= Gap(k+1) - s_{k+1}. A k at which the data is
/// fitted exactly (W_k = 0) is chosen outright, since no larger k can lower
/// the dispersion; entries with a zero reference dispersion are undefined
/// (NaN) and never satisfy the rule.
template <class Rng>
GapResult gap_statistic(const BinaryMatrix& data, std::size_t k_max, std::size_t n_refs, Rng& rng,
                        const KMeansOptions& opts = {})
{
    if (k_max < 1 || n_refs < 1) {
        throw std::invalid_argument("gap_statistic needs k_max >= 1 and n_refs >= 1");
    }
    k_max = std::min(k_max, data.rows());
    const double nan = std::numeric_limits<double>::quiet_NaN();

    GapResult res;
    res.gap_curve.assign(k_max, nan);
    res.sk_curve.assign(k_max, nan);
    res.dispersion_curve.assign(k_max, nan);
    res.ref_dispersion_curve.assign(k_max, nan);

    const detail::KMeansProblem problem(data);
    std::vector<std::vector<std::size_t>> labels_by_k(k_max);
    for (std::size_t k = 1; k <= k_max; ++k) {
        auto fit = problem.solve(k, opts, rng);
        res.dispersion_curve[k - 1] = std::log(fit.wcss);
        labels_by_k[k - 1] = std::move(fit.labels);
    }

    std::vector<std::vector<double>> ref_log_w(k_max, std::vector<double>(n_refs));
    for (std::size_t b = 0; b < n_refs; ++b) {
        const BinaryMatrix ref = bernoulli_reference(data, rng);
        const detail::KMeansProblem ref_problem(ref);
        for (std::size_t k = 1; k <= k_max; ++k) {
            ref_log_w[k - 1][b] = std::log(ref_problem.solve(k, opts, rng).wcss);
        }
    }

    const double refs = static_cast<double>(n_refs);
    for (std::size_t k = 0; k < k_max; ++k) {
        double mean = 0.0;
        for (double v : ref_log_w[k]) {
            mean += v;
        }
        mean /= refs;
        double var = 0.0;
        for (double v : ref_log_w[k]) {
            var += (v - mean) * (v - mean);
        }
        var /= refs;
        if (!std::isfinite(mean)) {
            continue;
        }
        res.ref_dispersion_curve[k] = mean;
        res.sk_curve[k] = std::sqrt(var) * std::sqrt(1.0 + 1.0 / refs);
        if (std::isfinite(res.dispersion_curve[k])) {
            res.gap_curve[k] = mean - res.dispersion_curve[k];
        }
    }

    res.chosen_k = k_max;
    for (std::size_t k = 1; k < k_max; ++k) {
        if (!std::isfinite(res.dispersion_curve[k - 1])) {
            res.chosen_k = k;
            break;
        }
        const double g = res.gap_curve[k - 1];
        const double g_next = res.gap_curve[k];
        const double s_next = res.sk_curve[k];
        if (std::isfinite(g) && std::isfinite(g_next) && std::isfinite(s_next) && g >= g_next - s_next) {
            res.chosen_k = k;
            break;
        }
    }
    res.labels = std::move(labels_by_k[res.chosen_k - 1]);
    return res;
}

} // namespace binclust
