#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "binclust/binary_matrix.hpp"
#include "binclust/error.hpp"
#include "binclust/io.hpp"

namespace binclust {

/// N x V document-term count matrix, row-major.
struct CountMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint32_t> values;

    std::uint32_t operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

struct TermFilterRule {
    std::uint32_t min_peak_count = 2; // some document uses the term at least this often
    std::size_t min_doc_freq = 11;    // and at least this many documents contain it
};

struct TermFilterResult {
    BinaryMatrix data;
    std::vector<std::size_t> kept_columns;
};

/// Keeps a term iff it occurs at least twice in some document and appears
/// in at least 11 documents; kept entries become presence indicators.
inline TermFilterResult term_filter(const CountMatrix& counts, const TermFilterRule& rule = {})
{
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < counts.cols; ++j) {
        std::size_t doc_freq = 0;
        std::uint32_t peak = 0;
        for (std::size_t i = 0; i < counts.rows; ++i) {
            const auto c = counts(i, j);
            doc_freq += c >= 1 ? 1 : 0;
            peak = std::max(peak, c);
        }
        if (peak >= rule.min_peak_count && doc_freq >= rule.min_doc_freq) {
            kept.push_back(j);
        }
    }
    if (kept.empty() || counts.rows == 0) {
        throw DataError("term filter kept no columns");
    }
    BinaryMatrix out(counts.rows, kept.size());
    for (std::size_t i = 0; i < counts.rows; ++i) {
        for (std::size_t c = 0; c < kept.size(); ++c) {
            out.set(i, c, counts(i, kept[c]) >= 1);
        }
    }
    return {std::move(out), std::move(kept)};
}

enum class ThresholdDirection { Below, Above };

/// Linear interpolation between order statistics: position (n-1) * pct/100
/// in the sorted sample.
inline double percentile(std::vector<double> sample, double pct)
{
    if (sample.empty()) {
        throw std::invalid_argument("percentile of an empty sample");
    }
    std::sort(sample.begin(), sample.end());
    const double pos = static_cast<double>(sample.size() - 1) * pct / 100.0;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sample.size() - 1);
    return sample[lo] + (pos - static_cast<double>(lo)) * (sample[hi] - sample[lo]);
}

struct PercentileResult {
    BinaryMatrix data;
    std::vector<bool> row_has_missing; // caller removes these rows
    std::vector<double> thresholds;
};

/// Per column, marks entries strictly below (or above) the column's pct-th
/// percentile. Missing values are NaN; they yield 0 and flag their row.
inline PercentileResult percentile_binarize(const std::vector<std::vector<double>>& values, double pct,
                                            ThresholdDirection direction)
{
    if (!(pct > 0.0 && pct < 100.0)) {
        throw std::invalid_argument("percentile must lie strictly between 0 and 100");
    }
    if (values.empty() || values.front().empty()) {
        throw DataError("percentile_binarize: empty input");
    }
    const std::size_t n = values.size();
    const std::size_t d = values.front().size();
    for (const auto& row : values) {
        if (row.size() != d) {
            throw DataError("percentile_binarize: ragged input");
        }
    }

    PercentileResult res{BinaryMatrix(n, d), std::vector<bool>(n, false), std::vector<double>(d)};
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<double> present;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::isnan(values[i][j])) {
                res.row_has_missing[i] = true;
            } else {
                present.push_back(values[i][j]);
            }
        }
        if (present.size() < 2) {
            throw DataError("column " + std::to_string(j) + " has fewer than 2 non-missing values");
        }
        const double t = percentile(std::move(present), pct);
        res.thresholds[j] = t;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = values[i][j];
            if (std::isnan(v)) {
                continue;
            }
            res.data.set(i, j, direction == ThresholdDirection::Below ? v < t : v > t);
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Readers for the preprocessing inputs

/// Dense CSV of non-negative integer counts (optional header), or the
/// coordinate form "N V" followed by "row col count" lines.
inline CountMatrix read_counts(std::istream& in)
{
    const auto lines = detail::read_lines(in);
    if (lines.empty()) {
        throw DataError("count matrix file is empty");
    }
    CountMatrix m;
    if (detect_format(lines.front().second) == MatrixFormat::Sparse) {
        const auto header = detail::split_ws(lines.front().second);
        m.rows = *detail::parse_number<std::size_t>(header[0]);
        m.cols = *detail::parse_number<std::size_t>(header[1]);
        m.values.assign(m.rows * m.cols, 0);
        for (std::size_t r = 1; r < lines.size(); ++r) {
            const auto& [number, text] = lines[r];
            const auto tokens = detail::split_ws(text);
            std::optional<std::size_t> i, j;
            std::optional<std::uint32_t> c;
            if (tokens.size() == 3) {
                i = detail::parse_number<std::size_t>(tokens[0]);
                j = detail::parse_number<std::size_t>(tokens[1]);
                c = detail::parse_number<std::uint32_t>(tokens[2]);
            }
            if (!i || !j || !c) {
                throw DataError("line " + std::to_string(number) + ": expected \"row col count\"");
            }
            if (*i >= m.rows || *j >= m.cols) {
                throw DataError("line " + std::to_string(number) + ": index out of range");
            }
            m.values[*i * m.cols + *j] += *c;
        }
        return m;
    }
    std::size_t first = detail::is_header_row(detail::split(lines.front().second, ',')) ? 1 : 0;
    for (std::size_t r = first; r < lines.size(); ++r) {
        const auto& [number, text] = lines[r];
        const auto tokens = detail::split(text, ',');
        if (r == first) {
            m.cols = tokens.size();
        } else if (tokens.size() != m.cols) {
            throw DataError("ragged row at line " + std::to_string(number));
        }
        for (std::size_t c = 0; c < tokens.size(); ++c) {
            const auto v = detail::parse_number<std::uint32_t>(tokens[c]);
            if (!v) {
                throw DataError("invalid count '" + std::string(tokens[c]) + "' at line " +
                                std::to_string(number) + ", column " + std::to_string(c + 1));
            }
            m.values.push_back(*v);
        }
        ++m.rows;
    }
    return m;
}

/// Dense CSV of reals; empty, "NA", "NaN" and "?" fields are missing.
inline std::vector<std::vector<double>> read_real_table(std::istream& in)
{
    const auto lines = detail::read_lines(in);
    std::vector<std::vector<double>> rows;
    const auto is_missing = [](std::string_view tok) {
        return tok.empty() || tok == "NA" || tok == "NaN" || tok == "nan" || tok == "?";
    };
    for (std::size_t r = 0; r < lines.size(); ++r) {
        const auto& [number, text] = lines[r];
        const auto tokens = detail::split(text, ',');
        if (r == 0) {
            bool header = false;
            for (auto tok : tokens) {
                header = header || (!is_missing(tok) && !detail::parse_number<double>(tok));
            }
            if (header) {
                continue;
            }
        }
        std::vector<double> row;
        for (std::size_t c = 0; c < tokens.size(); ++c) {
            if (is_missing(tokens[c])) {
                row.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            const auto v = detail::parse_number<double>(tokens[c]);
            if (!v) {
                throw DataError("invalid number '" + std::string(tokens[c]) + "' at line " +
                                std::to_string(number) + ", column " + std::to_string(c + 1));
            }
            row.push_back(*v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw DataError("ragged row at line " + std::to_string(number));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace binclust
