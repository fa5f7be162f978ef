#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "binclust/baselines.hpp"
#include "binclust/datagen.hpp"
#include "binclust/eval.hpp"
#include "oracles.hpp"

using namespace binclust;

namespace {

double brute_wcss(const BinaryMatrix& data, const std::vector<std::size_t>& labels)
{
    const auto rc = oracle::recount(data, labels);
    double total = 0.0;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const auto l = labels[i];
        const double size = static_cast<double>(rc.sizes.at(l));
        for (std::size_t j = 0; j < data.cols(); ++j) {
            const double diff = data(i, j) - static_cast<double>(rc.counts.at(l)[j]) / size;
            total += diff * diff;
        }
    }
    return total;
}

} // namespace

TEST(KMeans, SingleClusterCentroidIsColumnMean)
{
    std::mt19937_64 rng(1);
    const auto data = oracle::random_matrix(30, 8, 0.4, rng);
    const auto fit = kmeans_binary(data, 1, KMeansOptions{}, rng);
    const auto sums = data.column_sums();
    for (std::size_t j = 0; j < 8; ++j) {
        EXPECT_NEAR(fit.centroid(0)[j], sums[j] / 30.0, 1e-12);
    }
    EXPECT_NEAR(fit.wcss, brute_wcss(data, fit.labels), 1e-9);
}

TEST(KMeans, RecoversTwoBlocks)
{
    BinaryMatrix data(20, 10);
    std::vector<std::size_t> truth(20);
    for (std::size_t i = 0; i < 20; ++i) {
        truth[i] = i < 10 ? 0 : 1;
        for (std::size_t j = 0; j < 10; ++j) {
            data.set(i, j, (i < 10) == (j < 5));
        }
    }
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(seed);
        const auto fit = kmeans_binary(data, 2, KMeansOptions{}, rng);
        EXPECT_EQ(matched_accuracy(fit.labels, truth), 100.0);
        EXPECT_EQ(fit.wcss, 0.0);
    }
}

TEST(KMeans, ObjectiveNeverIncreasesAndMatchesLabels)
{
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const auto data = oracle::random_matrix(40, 12, 0.3, rng);
        const std::size_t k = 1 + trial % 6;
        const auto fit = kmeans_binary(data, k, KMeansOptions{1, 100}, rng);
        ASSERT_FALSE(fit.objective_trace.empty());
        for (std::size_t t = 1; t < fit.objective_trace.size(); ++t) {
            ASSERT_LE(fit.objective_trace[t], fit.objective_trace[t - 1] + 1e-9);
        }
        ASSERT_NEAR(fit.wcss, brute_wcss(data, fit.labels), 1e-9);
        ASSERT_EQ(fit.labels.size(), 40u);
        for (auto l : fit.labels) {
            ASSERT_LT(l, k);
        }
    }
}

TEST(KMeans, RejectsInvalidK)
{
    std::mt19937_64 rng(3);
    const auto data = oracle::random_matrix(5, 3, 0.5, rng);
    EXPECT_THROW(kmeans_binary(data, 0, KMeansOptions{}, rng), std::invalid_argument);
    EXPECT_THROW(kmeans_binary(data, 6, KMeansOptions{}, rng), std::invalid_argument);
}

TEST(GapStatistic, IdenticalRowsChooseOne)
{
    const auto data = BinaryMatrix::from_rows({{1, 0, 1}, {1, 0, 1}, {1, 0, 1}, {1, 0, 1}, {1, 0, 1}});
    std::mt19937_64 rng(4);
    const auto res = gap_statistic(data, 4, 5, rng);
    EXPECT_EQ(res.chosen_k, 1u);
    EXPECT_EQ(res.labels, std::vector<std::size_t>(5, 0));
}

TEST(GapStatistic, SelectsTrueKOnSeparatedData)
{
    const auto synth = generate(SyntheticSpec{100, 100, 20.0, 5.0, 5, 21});
    std::mt19937_64 rng(5);
    const auto res = gap_statistic(synth.data, 8, 5, rng);
    EXPECT_EQ(res.chosen_k, 5u);
    EXPECT_GT(matched_accuracy(res.labels, synth.labels), 95.0);
    ASSERT_EQ(res.gap_curve.size(), 8u);
    for (std::size_t k = 0; k < 8; ++k) {
        EXPECT_TRUE(std::isfinite(res.gap_curve[k]));
        EXPECT_GE(res.sk_curve[k], 0.0);
    }
}

TEST(GapStatistic, ReproducibleAndCapped)
{
    const auto synth = generate(SyntheticSpec{30, 40, 20.0, 10.0, 3, 2});
    std::mt19937_64 a(9), b(9);
    const auto r1 = gap_statistic(synth.data, 6, 3, a);
    const auto r2 = gap_statistic(synth.data, 6, 3, b);
    EXPECT_EQ(r1.chosen_k, r2.chosen_k);
    EXPECT_EQ(r1.labels, r2.labels);

    const auto tiny = BinaryMatrix::from_rows({{1, 0}, {0, 1}, {1, 1}});
    std::mt19937_64 c(1);
    EXPECT_EQ(gap_statistic(tiny, 10, 2, c).gap_curve.size(), 3u);
    EXPECT_THROW(gap_statistic(tiny, 0, 2, c), std::invalid_argument);
}

TEST(BernoulliReference, MatchesColumnMeans)
{
    BinaryMatrix data(400, 3);
    for (std::size_t i = 0; i < 400; ++i) {
        data.set(i, 0, true);
        data.set(i, 1, i % 4 == 0);
    }
    std::mt19937_64 rng(6);
    const auto ref = bernoulli_reference(data, rng);
    const auto sums = ref.column_sums();
    EXPECT_EQ(sums[0], 400u);
    EXPECT_EQ(sums[2], 0u);
    EXPECT_NEAR(sums[1] / 400.0, 0.25, 0.06);
}
