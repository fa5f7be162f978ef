#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "binclust/binary_matrix.hpp"
#include "binclust/cluster_state.hpp"
#include "binclust/model.hpp"

namespace binclust {

/// Geometric block cooling: T is multiplied by lambda after every
/// `block`-th sweep.
struct AnnealingSchedule {
    double t_init = 1.0;
    double lambda = 0.9;
    std::size_t block = 20;
    std::size_t n_sweeps = 200;

    void validate() const
    {
        if (!(t_init > 0.0) || !std::isfinite(t_init)) {
            throw std::invalid_argument("t_init must be positive");
        }
        if (!(lambda > 0.0 && lambda < 1.0)) {
            throw std::invalid_argument("lambda must lie strictly between 0 and 1");
        }
        if (block == 0 || n_sweeps == 0) {
            throw std::invalid_argument("block and n_sweeps must be positive");
        }
    }

    /// Temperature in effect after `completed` sweeps (cooling included).
    double temperature_after(std::size_t completed) const
    {
        double t = t_init;
        for (std::size_t n = 1; n <= completed; ++n) {
            if (n % block == 0) {
                t *= lambda;
            }
        }
        return t;
    }

    friend bool operator==(const AnnealingSchedule&, const AnnealingSchedule&) = default;
};

/// Everything needed to reproduce a run.
struct RunConfig {
    double alpha = 1.0;
    std::string a_policy = "custom";
    std::string b_policy = "custom";
    AnnealingSchedule schedule;
    std::size_t k_init = 0;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct RunReport {
    std::vector<std::size_t> assignments;
    std::size_t n_clusters = 0;
    std::vector<double> score_trace; // joint_log_score after each sweep
    std::vector<std::size_t> k_trace;
    std::vector<double> temp_trace;  // temperature after each sweep's cooling step
    std::uint64_t seed = 0;
    RunConfig config;

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Inverse-CDF draw from a normalized probability vector.
template <class Rng>
std::size_t sample_categorical(std::span<const double> probs, Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(rng);
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] > 0.0) {
            last_positive = k;
        }
        cumulative += probs[k];
        if (u < cumulative) {
            return k;
        }
    }
    return last_positive;
}

namespace detail {

// Per-cluster log predictive tables, so that scoring a row against a
// cluster costs one add per 1-entry:
//   L_k(x) = base_k + sum_{j : x_j = 1} delta_kj
// with base_k = sum_j log P(x_j = 0 | k) and
//      delta_kj = log P(x_j = 1 | k) - log P(x_j = 0 | k).
class PredictiveTables {
public:
    PredictiveTables(const Hyperparams& hyper, std::size_t n_features)
        : hyper_(hyper), d_(n_features)
    {
        fresh_delta_.resize(d_);
        fresh_base_ = fill(0, std::span<const std::size_t>(), fresh_delta_);
    }

    void rebuild_all(const ClusterState& state)
    {
        base_.assign(state.n_clusters(), 0.0);
        delta_.assign(state.n_clusters() * d_, 0.0);
        for (std::size_t k = 0; k < state.n_clusters(); ++k) {
            rebuild(k, state);
        }
    }

    void rebuild(std::size_t k, const ClusterState& state)
    {
        if (k == base_.size()) {
            base_.push_back(0.0);
            delta_.resize(delta_.size() + d_);
        }
        base_[k] = fill(state.sizes[k], state.counts(k), std::span<double>(delta_.data() + k * d_, d_));
    }

    void erase(std::size_t k)
    {
        base_.erase(base_.begin() + static_cast<std::ptrdiff_t>(k));
        auto first = delta_.begin() + static_cast<std::ptrdiff_t>(k * d_);
        delta_.erase(first, first + static_cast<std::ptrdiff_t>(d_));
    }

    double evaluate(std::size_t k, std::span<const std::uint32_t> support) const
    {
        const double* delta = delta_.data() + k * d_;
        double total = base_[k];
        for (auto j : support) {
            total += delta[j];
        }
        return total;
    }

    double evaluate_fresh(std::span<const std::uint32_t> support) const
    {
        double total = fresh_base_;
        for (auto j : support) {
            total += fresh_delta_[j];
        }
        return total;
    }

private:
    double fill(std::size_t n_k, std::span<const std::size_t> counts, std::span<double> delta) const
    {
        double base = 0.0;
        for (std::size_t j = 0; j < d_; ++j) {
            const std::size_t n_jk = counts.empty() ? 0 : counts[j];
            const double present = hyper_.a[j] + static_cast<double>(n_jk);
            const double absent = hyper_.b[j] + static_cast<double>(n_k - n_jk);
            const double log_total = std::log(present + absent);
            const double log_absent = std::log(absent) - log_total;
            base += log_absent;
            delta[j] = std::log(present) - std::log(absent);
        }
        return base;
    }

    const Hyperparams& hyper_;
    std::size_t d_;
    std::vector<double> base_;
    std::vector<double> delta_;
    double fresh_base_ = 0.0;
    std::vector<double> fresh_delta_;
};

class GibbsSweeper {
public:
    GibbsSweeper(const BinaryMatrix& data, const Hyperparams& hyper)
        : data_(data), hyper_(hyper), support_(data.row_supports()), tables_(hyper, data.cols()),
          log_alpha_(std::log(hyper.alpha))
    {
        if (hyper.n_features() != data.cols()) {
            throw std::invalid_argument("hyperparameters do not match the data width");
        }
        hyper.validate();
    }

    template <class Rng>
    void sweep(ClusterState& state, double temperature, Rng& rng)
    {
        if (!(temperature > 0.0)) {
            throw std::invalid_argument("temperature must be positive");
        }
        tables_.rebuild_all(state);
        const double inv_t = 1.0 / temperature;
        for (std::size_t i = 0; i < data_.rows(); ++i) {
            const std::size_t before = state.n_clusters();
            const std::size_t from = remove_object(state, i, data_);
            if (state.n_clusters() < before) {
                tables_.erase(from);
            } else {
                tables_.rebuild(from, state);
            }

            const std::size_t k_count = state.n_clusters();
            weights_.resize(k_count + 1);
            const auto support = std::span<const std::uint32_t>(support_[i]);
            for (std::size_t k = 0; k < k_count; ++k) {
                weights_[k] = std::log(static_cast<double>(state.sizes[k])) +
                              tables_.evaluate(k, support) * inv_t;
            }
            weights_[k_count] = log_alpha_ + tables_.evaluate_fresh(support) * inv_t;
            normalize_log_weights(weights_);

            const std::size_t pick = sample_categorical(std::span<const double>(weights_), rng);
            const auto choice = pick == k_count ? ClusterChoice::fresh() : ClusterChoice::existing(pick);
            const std::size_t to = insert_object(state, i, choice, data_);
            tables_.rebuild(to, state);
        }
    }

private:
    const BinaryMatrix& data_;
    const Hyperparams& hyper_;
    std::vector<std::vector<std::uint32_t>> support_;
    PredictiveTables tables_;
    double log_alpha_;
    std::vector<double> weights_;
};

} // namespace detail

/// One pass over all objects in index order: remove, compute the tempered
/// assignment distribution, draw, reinsert.
template <class Rng>
void gibbs_sweep(ClusterState& state, const BinaryMatrix& data, const Hyperparams& hyper,
                 double temperature, Rng& rng)
{
    detail::GibbsSweeper sweeper(data, hyper);
    sweeper.sweep(state, temperature, rng);
}

/// Default initial label range: each object draws one of N labels. Smaller
/// ranges start from large mixed clusters that single-object moves cannot
/// split again.
inline std::size_t default_k_init(const BinaryMatrix& data) noexcept
{
    return data.rows();
}

/// Annealed Gibbs sampling from a random k_init-cluster start. Deterministic
/// in (data, hyper, schedule, k_init, seed).
inline RunReport run(const BinaryMatrix& data, const Hyperparams& hyper,
                     const AnnealingSchedule& schedule, std::size_t k_init, std::uint64_t seed)
{
    schedule.validate();
    hyper.validate();
    std::mt19937_64 rng(seed);
    ClusterState state = init_state(data, k_init, rng);
    detail::GibbsSweeper sweeper(data, hyper);

    RunReport report;
    report.seed = seed;
    report.config.alpha = hyper.alpha;
    report.config.schedule = schedule;
    report.config.k_init = k_init;
    report.score_trace.reserve(schedule.n_sweeps);
    report.k_trace.reserve(schedule.n_sweeps);
    report.temp_trace.reserve(schedule.n_sweeps);

    double temperature = schedule.t_init;
    for (std::size_t n = 1; n <= schedule.n_sweeps; ++n) {
        sweeper.sweep(state, temperature, rng);
        if (n % schedule.block == 0) {
            temperature *= schedule.lambda;
        }
        report.score_trace.push_back(joint_log_score(state, data, hyper));
        report.k_trace.push_back(state.n_clusters());
        report.temp_trace.push_back(temperature);
    }
    report.assignments = state.assignments;
    report.n_clusters = state.n_clusters();
    return report;
}

} // namespace binclust
