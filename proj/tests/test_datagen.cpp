#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "binclust/datagen.hpp"

using namespace binclust;

TEST(Generate, NoNoiseMeansIdenticalRowsWithinClusters)
{
    const SyntheticSpec spec{60, 40, 20.0, 0.0, 4, 3};
    const auto s = generate(spec);
    EXPECT_EQ(s.data, s.clean);
    for (std::size_t i = 0; i < 60; ++i) {
        for (std::size_t k = i + 1; k < 60; ++k) {
            if (s.labels[i] == s.labels[k]) {
                ASSERT_TRUE(std::equal(s.data.row(i).begin(), s.data.row(i).end(), s.data.row(k).begin()));
            }
        }
    }
}

TEST(Generate, SignalColumnCountPerCluster)
{
    // N = 200, D = 500, Sd = 10: 50 signal columns per cluster before noise.
    const SyntheticSpec spec{200, 500, 10.0, 20.0, 5, 11};
    EXPECT_EQ(spec.signal_columns(), 50u);
    const auto s = generate(spec);
    for (std::size_t i = 0; i < 200; ++i) {
        std::size_t ones = 0;
        for (auto v : s.clean.row(i)) {
            ones += v;
        }
        ASSERT_EQ(ones, 50u);
    }
}

TEST(Generate, ExactFlipCount)
{
    const SyntheticSpec spec{200, 500, 10.0, 20.0, 5, 12};
    const auto s = generate(spec);
    std::size_t differ = 0;
    for (std::size_t i = 0; i < 200; ++i) {
        for (std::size_t j = 0; j < 500; ++j) {
            differ += s.data(i, j) != s.clean(i, j) ? 1 : 0;
        }
    }
    EXPECT_EQ(differ, 20000u);
    EXPECT_EQ(SyntheticSpec({7, 13, 5.0, 33.0, 2, 0}).flipped_cells(), 30u); // floor(0.33 * 91)
    EXPECT_EQ(SyntheticSpec({7, 13, 5.0, 33.0, 2, 0}).signal_columns(), 1u); // ceil(0.65)
}

TEST(Generate, LabelsCoverEveryCluster)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto s = generate(SyntheticSpec{12, 10, 20.0, 5.0, 5, seed});
        const std::set<std::size_t> used(s.labels.begin(), s.labels.end());
        ASSERT_EQ(used, (std::set<std::size_t>{0, 1, 2, 3, 4}));
    }
}

TEST(Generate, ReproducibleFromSeed)
{
    const SyntheticSpec spec{100, 80, 20.0, 10.0, 5, 99};
    const auto a = generate(spec);
    const auto b = generate(spec);
    EXPECT_EQ(a.data, b.data);
    EXPECT_EQ(a.labels, b.labels);
    auto other = spec;
    other.seed = 100;
    EXPECT_NE(generate(other).data, a.data);
}

TEST(Generate, RejectsInvalidSpecs)
{
    EXPECT_THROW(generate(SyntheticSpec{10, 10, 120.0, 0.0, 2, 0}), std::invalid_argument);
    EXPECT_THROW(generate(SyntheticSpec{10, 10, 10.0, -1.0, 2, 0}), std::invalid_argument);
    EXPECT_THROW(generate(SyntheticSpec{10, 10, 10.0, 0.0, 11, 0}), std::invalid_argument);
    EXPECT_THROW(generate(SyntheticSpec{10, 10, 10.0, 0.0, 0, 0}), std::invalid_argument);
}
