#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "binclust/eval.hpp"
#include "binclust/io.hpp"
#include "binclust/sampler.hpp"
#include "oracles.hpp"

using namespace binclust;

namespace {

BinaryMatrix parse_dense(const std::string& text)
{
    std::istringstream in(text);
    return read_dense(in);
}

BinaryMatrix parse_sparse(const std::string& text)
{
    std::istringstream in(text);
    return read_sparse(in);
}

std::string error_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const DataError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(DenseFormat, ReadsExamples)
{
    EXPECT_EQ(parse_dense("0,1\n1,0\n"), BinaryMatrix::from_rows({{0, 1}, {1, 0}}));
    EXPECT_EQ(parse_dense("f1,f2\n0,1\n1,1\n"), BinaryMatrix::from_rows({{0, 1}, {1, 1}}));
}

TEST(DenseFormat, RejectsBadInput)
{
    const auto msg = error_of([] { parse_dense("0,1\n1,2\n"); });
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column 2"), std::string::npos) << msg;
    EXPECT_THROW(parse_dense("0,1\n1\n"), DataError);
    EXPECT_THROW(parse_dense(""), DataError);
    EXPECT_THROW(parse_dense("a,b\n"), DataError);
}

TEST(SparseFormat, ReadsExamples)
{
    EXPECT_EQ(parse_sparse("2 2\n0 1\n1 0\n"), BinaryMatrix::from_rows({{0, 1}, {1, 0}}));
    EXPECT_EQ(parse_sparse("3 4\n"), BinaryMatrix(3, 4));
}

TEST(SparseFormat, RejectsBadInput)
{
    EXPECT_THROW(parse_sparse("2 2\n2 0\n"), DataError);
    EXPECT_THROW(parse_sparse("2 2\n0 5\n"), DataError);
    EXPECT_THROW(parse_sparse("2 2\n0 1\n0 1\n"), DataError);
    EXPECT_THROW(parse_sparse("2\n"), DataError);
    EXPECT_THROW(parse_sparse("0 3\n"), DataError);
    EXPECT_THROW(parse_sparse("2 2\n0 x\n"), DataError);
}

TEST(Format, Detection)
{
    EXPECT_EQ(detect_format("0,1,1"), MatrixFormat::Dense);
    EXPECT_EQ(detect_format("200 500"), MatrixFormat::Sparse);
    EXPECT_EQ(detect_format("1"), MatrixFormat::Dense);
}

TEST(Labels, RoundTripAndRejection)
{
    const std::vector<std::size_t> labels{3, 0, 0, 7};
    std::stringstream s;
    write_labels(s, labels);
    EXPECT_EQ(read_labels(s), labels);
    std::istringstream bad("1\n-2\n");
    EXPECT_THROW(read_labels(bad), DataError);
}

TEST(Matrices, RandomRoundTrips)
{
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto m = oracle::random_matrix(1 + trial % 17, 1 + trial % 23, (trial % 10) / 10.0, rng);
        std::stringstream dense, sparse;
        write_dense(dense, m);
        write_sparse(sparse, m);
        ASSERT_EQ(read_dense(dense), m);
        ASSERT_EQ(read_sparse(sparse), m);
    }
}

TEST(Report, RoundTripsExactly)
{
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const auto data = oracle::random_matrix(20, 9, 0.3, rng);
        const AnnealingSchedule schedule{1.7, 0.85, 3, 12};
        ReportFile report;
        report.run = run(data, default_hyperparams(data, 0.7), schedule, 4, 1000 + trial);
        report.run.config.alpha = 0.7;
        report.feature_frequencies = cluster_feature_frequencies(report.run.assignments, data);
        std::stringstream s;
        write_report(s, report);
        const std::string first = s.str();
        const auto back = read_report(s);
        ASSERT_EQ(back, report);
        std::ostringstream again;
        write_report(again, back);
        ASSERT_EQ(again.str(), first);
    }
}

TEST(Report, RejectsInconsistentFiles)
{
    std::istringstream garbage("{ not json");
    EXPECT_THROW(read_report(garbage), DataError);
    std::istringstream missing("{\"assignments\": [0]}");
    EXPECT_THROW(read_report(missing), DataError);

    const auto data = BinaryMatrix::from_rows({{1, 0}, {0, 1}});
    ReportFile report;
    report.run = run(data, default_hyperparams(data, 1.0), AnnealingSchedule{1.0, 0.9, 2, 4}, 2, 0);
    report.feature_frequencies = cluster_feature_frequencies(report.run.assignments, data);
    auto j = report_to_json(report);
    j["score_trace"].erase(0);
    std::istringstream truncated(j.dump());
    EXPECT_THROW(read_report(truncated), DataError);
}

TEST(FrequencyCsv, HeaderAndRows)
{
    std::ostringstream out;
    write_frequency_csv(out, {{0.5, 1.0}, {0.0, 0.25}}, {2, 4}, {"x", "y"});
    EXPECT_EQ(out.str(), "cluster,size,x,y\n0,2,0.5,1\n1,4,0,0.25\n");
}
