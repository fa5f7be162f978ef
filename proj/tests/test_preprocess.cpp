#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "binclust/preprocess.hpp"

using namespace binclust;

namespace {

CountMatrix counts_with_column(std::size_t rows, std::size_t docs, std::uint32_t peak)
{
    CountMatrix m{rows, 1, std::vector<std::uint32_t>(rows, 0)};
    for (std::size_t i = 0; i < docs; ++i) {
        m.values[i] = i == 0 ? peak : 1;
    }
    return m;
}

} // namespace

TEST(TermFilter, Thresholds)
{
    // 11 documents, peak 2: kept
    const auto kept = term_filter(counts_with_column(20, 11, 2));
    EXPECT_EQ(kept.kept_columns, (std::vector<std::size_t>{0}));
    EXPECT_EQ(kept.data.column_sums()[0], 11u);
    // 10 documents: dropped
    EXPECT_THROW(term_filter(counts_with_column(20, 10, 5)), DataError);
    // peak 1: dropped
    EXPECT_THROW(term_filter(counts_with_column(20, 15, 1)), DataError);
}

TEST(TermFilter, KeepsOnlyQualifyingColumns)
{
    CountMatrix m{12, 3, std::vector<std::uint32_t>(36, 0)};
    for (std::size_t i = 0; i < 12; ++i) {
        m.values[i * 3 + 0] = 1;      // every doc, never twice
        m.values[i * 3 + 1] = 1 + (i == 5 ? 3 : 0);
        m.values[i * 3 + 2] = i < 3 ? 4 : 0;
    }
    const auto res = term_filter(m);
    EXPECT_EQ(res.kept_columns, (std::vector<std::size_t>{1}));
    EXPECT_EQ(res.data.cols(), 1u);
    EXPECT_EQ(res.data.count_ones(), 12u);
}

TEST(Percentile, LinearInterpolation)
{
    EXPECT_NEAR(percentile({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 20), 2.8, 1e-12);
    EXPECT_NEAR(percentile({10, 1, 7, 3}, 50), 5.0, 1e-12);
    EXPECT_EQ(percentile({4, 4, 4}, 30), 4.0);
}

TEST(PercentileBinarize, BelowAndAbove)
{
    std::vector<std::vector<double>> values;
    for (int v = 1; v <= 10; ++v) {
        values.push_back({static_cast<double>(v), 5.0});
    }
    const auto below = percentile_binarize(values, 20, ThresholdDirection::Below);
    EXPECT_NEAR(below.thresholds[0], 2.8, 1e-12);
    for (std::size_t i = 0; i < 10; ++i) {
        EXPECT_EQ(below.data(i, 0), i < 2 ? 1 : 0);
        EXPECT_EQ(below.data(i, 1), 0); // constant column
    }
    const auto above = percentile_binarize(values, 80, ThresholdDirection::Above);
    for (std::size_t i = 0; i < 10; ++i) {
        EXPECT_EQ(above.data(i, 0), i >= 8 ? 1 : 0);
    }
}

TEST(PercentileBinarize, MissingValuesFlagRows)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::vector<std::vector<double>> values{{1.0}, {nan}, {3.0}, {4.0}};
    const auto res = percentile_binarize(values, 50, ThresholdDirection::Below);
    EXPECT_EQ(res.row_has_missing, (std::vector<bool>{false, true, false, false}));
    EXPECT_EQ(res.data(1, 0), 0);
    EXPECT_EQ(res.thresholds[0], 3.0);
    EXPECT_THROW(percentile_binarize({{1.0}, {nan}, {nan}}, 50, ThresholdDirection::Below), DataError);
}

TEST(PercentileBinarize, RejectsBadPercentages)
{
    const std::vector<std::vector<double>> values{{1.0}, {2.0}};
    EXPECT_THROW(percentile_binarize(values, 0, ThresholdDirection::Below), std::invalid_argument);
    EXPECT_THROW(percentile_binarize(values, 100, ThresholdDirection::Below), std::invalid_argument);
    EXPECT_THROW(percentile_binarize(values, -5, ThresholdDirection::Above), std::invalid_argument);
}

TEST(Readers, CountsAndRealTables)
{
    std::istringstream dense("1,0,2\n0,3,0\n");
    const auto c = read_counts(dense);
    EXPECT_EQ(c.rows, 2u);
    EXPECT_EQ(c.cols, 3u);
    EXPECT_EQ(c(1, 1), 3u);

    std::istringstream triples("2 4\n0 3 5\n1 0 1\n");
    const auto t = read_counts(triples);
    EXPECT_EQ(t.rows, 2u);
    EXPECT_EQ(t.cols, 4u);
    EXPECT_EQ(t(0, 3), 5u);
    EXPECT_EQ(t(1, 0), 1u);

    std::istringstream real("a,b\n1.5,NA\n,2\n3,?\n");
    const auto r = read_real_table(real);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r[0][0], 1.5);
    EXPECT_TRUE(std::isnan(r[0][1]));
    EXPECT_TRUE(std::isnan(r[1][0]));
    EXPECT_TRUE(std::isnan(r[2][1]));
}
