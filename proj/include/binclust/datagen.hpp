#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "binclust/binary_matrix.hpp"

namespace binclust {

/// Planted-cluster benchmark: each cluster switches on its own random set of
/// signal columns, then a fixed fraction of all cells is flipped.
struct SyntheticSpec {
    std::size_t n_objects = 200;
    std::size_t n_features = 500;
    double info_pct = 10.0;  // Sd
    double noise_pct = 20.0; // Sn
    std::size_t k_true = 5;
    std::uint64_t seed = 0;

    void validate() const
    {
        if (n_objects == 0 || n_features == 0) {
            throw std::invalid_argument("synthetic data needs N >= 1 and D >= 1");
        }
        if (!(info_pct >= 0.0 && info_pct <= 100.0) || !(noise_pct >= 0.0 && noise_pct <= 100.0)) {
            throw std::invalid_argument("information and noise percentages must lie in [0, 100]");
        }
        if (k_true < 1 || k_true > n_objects) {
            throw std::invalid_argument("k_true must lie in [1, N]");
        }
    }

    // ceil(Sd * D / 100); the epsilon keeps exact products from rounding up.
    std::size_t signal_columns() const
    {
        return static_cast<std::size_t>(
            std::ceil(info_pct * static_cast<double>(n_features) / 100.0 - 1e-9));
    }

    // floor(Sn * N * D / 100)
    std::size_t flipped_cells() const
    {
        const double cells = static_cast<double>(n_objects) * static_cast<double>(n_features);
        return static_cast<std::size_t>(std::floor(noise_pct * cells / 100.0 + 1e-9));
    }
};

struct SyntheticData {
    BinaryMatrix data;
    std::vector<std::size_t> labels;
    BinaryMatrix clean; // before noise
};

template <class Rng>
SyntheticData generate(const SyntheticSpec& spec, Rng& rng)
{
    spec.validate();
    const std::size_t n = spec.n_objects;
    const std::size_t d = spec.n_features;

    std::vector<std::size_t> labels(n);
    std::uniform_int_distribution<std::size_t> pick(0, spec.k_true - 1);
    std::vector<std::size_t> sizes(spec.k_true);
    do {
        std::fill(sizes.begin(), sizes.end(), 0);
        for (auto& l : labels) {
            l = pick(rng);
            ++sizes[l];
        }
    } while (std::find(sizes.begin(), sizes.end(), 0) != sizes.end());

    BinaryMatrix clean(n, d);
    std::vector<std::size_t> columns(d);
    std::iota(columns.begin(), columns.end(), 0);
    const std::size_t n_signal = spec.signal_columns();
    std::vector<std::size_t> chosen;
    for (std::size_t k = 0; k < spec.k_true; ++k) {
        chosen.clear();
        std::sample(columns.begin(), columns.end(), std::back_inserter(chosen), n_signal, rng);
        for (std::size_t i = 0; i < n; ++i) {
            if (labels[i] != k) {
                continue;
            }
            for (auto j : chosen) {
                clean.set(i, j, true);
            }
        }
    }

    BinaryMatrix noisy = clean;
    std::vector<std::size_t> cells(n * d);
    std::iota(cells.begin(), cells.end(), 0);
    std::vector<std::size_t> flips;
    flips.reserve(spec.flipped_cells());
    std::sample(cells.begin(), cells.end(), std::back_inserter(flips), spec.flipped_cells(), rng);
    for (auto c : flips) {
        noisy.flip(c / d, c % d);
    }
    return {std::move(noisy), std::move(labels), std::move(clean)};
}

inline SyntheticData generate(const SyntheticSpec& spec)
{
    std::mt19937_64 rng(spec.seed);
    return generate(spec, rng);
}

} // namespace binclust
