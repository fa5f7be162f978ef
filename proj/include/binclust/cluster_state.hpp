#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "binclust/binary_matrix.hpp"

namespace binclust {

/// Target of an insertion: one of the existing clusters or a fresh one.
class ClusterChoice {
public:
    static constexpr ClusterChoice existing(std::size_t k) noexcept { return ClusterChoice(k); }
    static constexpr ClusterChoice fresh() noexcept { return ClusterChoice(kFresh); }

    constexpr bool is_new() const noexcept { return index_ == kFresh; }
    constexpr std::size_t index() const noexcept { return index_; }

    friend constexpr bool operator==(ClusterChoice, ClusterChoice) = default;

private:
    static constexpr std::size_t kFresh = std::numeric_limits<std::size_t>::max();
    constexpr explicit ClusterChoice(std::size_t k) noexcept : index_(k) {}
    std::size_t index_;
};

/// Labels plus the sufficient statistics of every cluster.
///
/// Labels are compact: clusters are numbered 0..K-1 and none is empty. An
/// object taken out with remove_object() is marked kUnassigned until it is
/// inserted again.
struct ClusterState {
    static constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

    std::vector<std::size_t> assignments;
    std::vector<std::size_t> sizes;          // N_k
    std::vector<std::size_t> feature_counts; // N_jk, K x D row-major
    std::size_t n_features = 0;

    std::size_t n_clusters() const noexcept { return sizes.size(); }
    std::size_t n_objects() const noexcept { return assignments.size(); }

    std::span<const std::size_t> counts(std::size_t k) const noexcept
    {
        return {feature_counts.data() + k * n_features, n_features};
    }

    friend bool operator==(const ClusterState&, const ClusterState&) = default;
};

/// Relabels to 0..K-1 in order of first appearance.
inline std::vector<std::size_t> compact_labels(std::span<const std::size_t> labels)
{
    std::map<std::size_t, std::size_t> remap;
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (auto l : labels) {
        auto [it, inserted] = remap.try_emplace(l, remap.size());
        out.push_back(it->second);
    }
    return out;
}

/// Builds a state from an arbitrary label vector (compacted on the way in).
inline ClusterState make_state(const BinaryMatrix& data, std::span<const std::size_t> labels)
{
    if (labels.size() != data.rows()) {
        throw std::invalid_argument("label vector has " + std::to_string(labels.size()) +
                                    " entries for " + std::to_string(data.rows()) + " objects");
    }
    ClusterState state;
    state.n_features = data.cols();
    state.assignments = compact_labels(labels);
    const std::size_t k = state.assignments.empty()
                              ? 0
                              : *std::max_element(state.assignments.begin(), state.assignments.end()) + 1;
    state.sizes.assign(k, 0);
    state.feature_counts.assign(k * data.cols(), 0);
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const std::size_t c = state.assignments[i];
        ++state.sizes[c];
        const auto row = data.row(i);
        std::size_t* dst = state.feature_counts.data() + c * data.cols();
        for (std::size_t j = 0; j < data.cols(); ++j) {
            dst[j] += row[j];
        }
    }
    return state;
}

/// Uniform random assignment to k_init labels; empty labels are dropped.
template <class Rng>
ClusterState init_state(const BinaryMatrix& data, std::size_t k_init, Rng& rng)
{
    if (k_init < 1 || k_init > data.rows()) {
        throw std::invalid_argument("k_init must lie in [1, N]; got " + std::to_string(k_init));
    }
    std::uniform_int_distribution<std::size_t> pick(0, k_init - 1);
    std::vector<std::size_t> labels(data.rows());
    for (auto& l : labels) {
        l = pick(rng);
    }
    return make_state(data, labels);
}

/// Takes object i out of its cluster. A cluster left empty is deleted and
/// the labels above it shift down by one. Returns the label i had before
/// the call.
inline std::size_t remove_object(ClusterState& state, std::size_t i, const BinaryMatrix& data)
{
    const std::size_t k = state.assignments.at(i);
    if (k == ClusterState::kUnassigned) {
        throw std::logic_error("remove_object: object " + std::to_string(i) + " is not assigned");
    }
    state.assignments[i] = ClusterState::kUnassigned;
    const std::size_t d = state.n_features;
    if (--state.sizes[k] == 0) {
        state.sizes.erase(state.sizes.begin() + static_cast<std::ptrdiff_t>(k));
        auto first = state.feature_counts.begin() + static_cast<std::ptrdiff_t>(k * d);
        state.feature_counts.erase(first, first + static_cast<std::ptrdiff_t>(d));
        for (auto& label : state.assignments) {
            if (label != ClusterState::kUnassigned && label > k) {
                --label;
            }
        }
        return k;
    }
    const auto row = data.row(i);
    std::size_t* dst = state.feature_counts.data() + k * d;
    for (std::size_t j = 0; j < d; ++j) {
        dst[j] -= row[j];
    }
    return k;
}

/// Puts an unassigned object into an existing cluster or a new one (label K).
/// Returns the label it received.
inline std::size_t insert_object(ClusterState& state, std::size_t i, ClusterChoice choice,
                                 const BinaryMatrix& data)
{
    if (state.assignments.at(i) != ClusterState::kUnassigned) {
        throw std::logic_error("insert_object: object " + std::to_string(i) + " is already assigned");
    }
    const std::size_t d = state.n_features;
    std::size_t k = 0;
    if (choice.is_new()) {
        k = state.n_clusters();
        state.sizes.push_back(0);
        state.feature_counts.resize(state.feature_counts.size() + d, 0);
    } else {
        k = choice.index();
        if (k >= state.n_clusters()) {
            throw std::invalid_argument("insert_object: cluster " + std::to_string(k) +
                                        " does not exist (K = " +
                                        std::to_string(state.n_clusters()) + ")");
        }
    }
    state.assignments[i] = k;
    ++state.sizes[k];
    const auto row = data.row(i);
    std::size_t* dst = state.feature_counts.data() + k * d;
    for (std::size_t j = 0; j < d; ++j) {
        dst[j] += row[j];
    }
    return k;
}

} // namespace binclust
