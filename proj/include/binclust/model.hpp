#pragma once

// Collapsed Beta-Bernoulli Dirichlet-process mixture.
//
// The Bernoulli parameters p_jk and the mixing weights are integrated out,
// so every quantity below depends on the data only through the cluster
// sizes N_k and the per-feature presence counts N_jk.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "binclust/binary_matrix.hpp"
#include "binclust/cluster_state.hpp"

namespace binclust {

/// Beta shapes per feature (shared by every cluster) and the DP concentration.
struct Hyperparams {
    std::vector<double> a;
    std::vector<double> b;
    double alpha = 1.0;

    std::size_t n_features() const noexcept { return a.size(); }

    void validate() const
    {
        if (a.size() != b.size()) {
            throw std::invalid_argument("hyperparameter vectors a and b differ in length");
        }
        if (!(alpha > 0.0) || !std::isfinite(alpha)) {
            throw std::invalid_argument("alpha must be a positive finite number");
        }
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (!(a[j] > 0.0) || !(b[j] > 0.0)) {
                throw std::invalid_argument("Beta shapes must be positive (feature " +
                                            std::to_string(j) + ")");
            }
        }
    }
};

/// Posterior law Beta(a_post, b_post) of one feature's presence probability.
struct BetaPosterior {
    double a_post;
    double b_post;
};

/// a_j = 1 and b_j = N / max(1, column sum), clamped to [1, N].
inline Hyperparams default_hyperparams(const BinaryMatrix& data, double alpha = 1.0)
{
    const auto n = static_cast<double>(data.rows());
    const auto sums = data.column_sums();
    Hyperparams h;
    h.alpha = alpha;
    h.a.assign(data.cols(), 1.0);
    h.b.resize(data.cols());
    for (std::size_t j = 0; j < data.cols(); ++j) {
        const double b = n / static_cast<double>(std::max<std::size_t>(1, sums[j]));
        h.b[j] = std::clamp(b, 1.0, n);
    }
    h.validate();
    return h;
}

/// Uniform shapes a_j = a, b_j = b for every feature.
inline Hyperparams uniform_hyperparams(std::size_t n_features, double a, double b, double alpha)
{
    Hyperparams h{std::vector<double>(n_features, a), std::vector<double>(n_features, b), alpha};
    h.validate();
    return h;
}

inline double log_beta(double a, double b)
{
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

inline BetaPosterior beta_posterior(std::size_t j, std::size_t n_k, std::size_t n_jk,
                                    const Hyperparams& hyper)
{
    if (n_jk > n_k) {
        throw std::logic_error("beta_posterior: feature count exceeds cluster size");
    }
    return {hyper.a[j] + static_cast<double>(n_jk), hyper.b[j] + static_cast<double>(n_k - n_jk)};
}

// log B(a+n_jk+x, b+n_k-n_jk+1-x) / B(a+n_jk, b+n_k-n_jk) for one feature,
// through B(a+1,b)/B(a,b) = a/(a+b).
inline double log_predictive_term(bool x, double a, double b, std::size_t n_k, std::size_t n_jk)
{
    const double present = a + static_cast<double>(n_jk);
    const double absent = b + static_cast<double>(n_k - n_jk);
    return std::log((x ? present : absent) / (present + absent));
}

/// Log predictive probability of row x joining a cluster with the given
/// size and per-feature counts.
inline double log_predictive(std::span<const std::uint8_t> x, std::size_t n_k,
                             std::span<const std::size_t> n_jk, const Hyperparams& hyper)
{
    if (x.size() != hyper.n_features() || n_jk.size() != x.size()) {
        throw std::invalid_argument("log_predictive: dimension mismatch");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (n_jk[j] > n_k) {
            throw std::logic_error("log_predictive: precondition violated, N_jk > N_k at feature " +
                                   std::to_string(j));
        }
        total += log_predictive_term(x[j] != 0, hyper.a[j], hyper.b[j], n_k, n_jk[j]);
    }
    return total;
}

/// Log predictive probability of row x opening a new cluster.
inline double log_predictive_new(std::span<const std::uint8_t> x, const Hyperparams& hyper)
{
    if (x.size() != hyper.n_features()) {
        throw std::invalid_argument("log_predictive_new: dimension mismatch");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        total += log_predictive_term(x[j] != 0, hyper.a[j], hyper.b[j], 0, 0);
    }
    return total;
}

/// CRP conditional for one object given the other N-1. `option` indexes
/// `loo_sizes`, or is fresh() for a new cluster.
inline double crp_log_prior(ClusterChoice option, std::span<const std::size_t> loo_sizes,
                            std::size_t n_total, double alpha)
{
    const double denom = static_cast<double>(n_total) - 1.0 + alpha;
    if (option.is_new()) {
        return std::log(alpha / denom);
    }
    const std::size_t size = loo_sizes[option.index()];
    if (size == 0) {
        throw std::logic_error("crp_log_prior: empty cluster offered as an existing option");
    }
    return std::log(static_cast<double>(size) / denom);
}

/// In-place max-shifted exponentiation and normalization of log weights.
/// If the weights are degenerate all mass goes to the first maximum.
inline void normalize_log_weights(std::span<double> w)
{
    if (w.empty()) {
        return;
    }
    const auto max_it = std::max_element(w.begin(), w.end());
    const double shift = *max_it;
    if (!std::isfinite(shift)) {
        const auto first = static_cast<std::size_t>(max_it - w.begin());
        std::fill(w.begin(), w.end(), 0.0);
        w[first] = 1.0;
        return;
    }
    double sum = 0.0;
    for (auto& v : w) {
        v = std::exp(v - shift);
        sum += v;
    }
    for (auto& v : w) {
        v /= sum;
    }
}

/// Tempered conditional over the K existing clusters plus a final NEW entry:
/// p_k ∝ N_{-i,k} exp(L_k / T), p_new ∝ alpha exp(L_new / T).
/// Object i must already be removed from `state`.
inline std::vector<double> assignment_distribution(std::size_t i, const ClusterState& state,
                                                   const BinaryMatrix& data,
                                                   const Hyperparams& hyper, double temperature)
{
    if (!(temperature > 0.0)) {
        throw std::invalid_argument("temperature must be positive");
    }
    if (state.assignments.at(i) != ClusterState::kUnassigned) {
        throw std::logic_error("assignment_distribution: object " + std::to_string(i) +
                               " must be removed first");
    }
    const auto x = data.row(i);
    const std::size_t k_count = state.n_clusters();
    std::vector<double> w(k_count + 1);
    for (std::size_t k = 0; k < k_count; ++k) {
        w[k] = std::log(static_cast<double>(state.sizes[k])) +
               log_predictive(x, state.sizes[k], state.counts(k), hyper) / temperature;
    }
    w[k_count] = std::log(hyper.alpha) + log_predictive_new(x, hyper) / temperature;
    normalize_log_weights(w);
    return w;
}

/// Log of the unnormalized posterior of a complete partition:
/// the exchangeable CRP partition probability times the collapsed marginal
/// likelihood of every cluster. Invariant under relabeling.
inline double joint_log_score(const ClusterState& state, const BinaryMatrix& data,
                              const Hyperparams& hyper)
{
    if (state.n_objects() != data.rows() || state.n_features != data.cols()) {
        throw std::invalid_argument("joint_log_score: state does not match data");
    }
    const std::size_t d = data.cols();
    std::vector<double> prior_base(d);
    for (std::size_t j = 0; j < d; ++j) {
        prior_base[j] = log_beta(hyper.a[j], hyper.b[j]);
    }

    // Per-cluster terms are summed in sorted order so that relabeling cannot
    // change the rounding.
    std::vector<double> terms;
    terms.reserve(state.n_clusters());
    for (std::size_t k = 0; k < state.n_clusters(); ++k) {
        const std::size_t n_k = state.sizes[k];
        const auto counts = state.counts(k);
        double term = std::log(hyper.alpha) + std::lgamma(static_cast<double>(n_k));
        for (std::size_t j = 0; j < d; ++j) {
            const auto post = beta_posterior(j, n_k, counts[j], hyper);
            term += log_beta(post.a_post, post.b_post) - prior_base[j];
        }
        terms.push_back(term);
    }
    std::sort(terms.begin(), terms.end());
    double score = 0.0;
    for (double t : terms) {
        score += t;
    }
    const double n = static_cast<double>(data.rows());
    score -= std::lgamma(n + hyper.alpha) - std::lgamma(hyper.alpha);
    return score;
}

} // namespace binclust
