#pragma once

// Text formats:
//   dense   CSV, optional header row, one row per object, values 0/1
//   sparse  "N D" header, then one "row col" pair (0-based) per 1-entry
//   labels  one non-negative integer per line
//   report  JSON run record (see write_report)

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "binclust/binary_matrix.hpp"
#include "binclust/error.hpp"
#include "binclust/sampler.hpp"

namespace binclust {

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

inline std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        const auto first = line.find_first_not_of(" \t\r", pos);
        if (first == std::string_view::npos) {
            break;
        }
        const auto last = line.find_first_of(" \t\r", first);
        out.push_back(line.substr(first, last == std::string_view::npos ? last : last - first));
        pos = last == std::string_view::npos ? line.size() : last;
    }
    return out;
}

template <class T>
std::optional<T> parse_number(std::string_view tok)
{
    T value{};
    const auto* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    if (ec != std::errc() || ptr != end || tok.empty()) {
        return std::nullopt;
    }
    return value;
}

// Non-blank lines paired with their 1-based line numbers.
inline std::vector<std::pair<std::size_t, std::string>> read_lines(std::istream& in)
{
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!trim(line).empty()) {
            lines.emplace_back(number, line);
        }
    }
    return lines;
}

inline bool is_header_row(const std::vector<std::string_view>& tokens)
{
    for (auto tok : tokens) {
        if (!parse_number<double>(tok) && !tok.empty()) {
            return true;
        }
    }
    return false;
}

inline std::ifstream open_in(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path + "' for reading");
    }
    return in;
}

inline std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot open '" + path + "' for writing");
    }
    return out;
}

inline std::string format_double(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Dense CSV

inline BinaryMatrix read_dense(std::istream& in)
{
    const auto lines = detail::read_lines(in);
    std::size_t first = 0;
    if (!lines.empty() && detail::is_header_row(detail::split(lines.front().second, ','))) {
        first = 1;
    }
    if (lines.size() <= first) {
        throw DataError("dense matrix file has no data rows");
    }
    std::size_t width = 0;
    std::vector<std::uint8_t> values;
    for (std::size_t r = first; r < lines.size(); ++r) {
        const auto& [number, text] = lines[r];
        const auto tokens = detail::split(text, ',');
        if (r == first) {
            width = tokens.size();
        } else if (tokens.size() != width) {
            throw DataError("ragged row at line " + std::to_string(number) + ": " +
                            std::to_string(tokens.size()) + " values, expected " + std::to_string(width));
        }
        for (std::size_t c = 0; c < tokens.size(); ++c) {
            if (tokens[c] != "0" && tokens[c] != "1") {
                throw DataError("non-binary value '" + std::string(tokens[c]) + "' at line " +
                                std::to_string(number) + ", column " + std::to_string(c + 1));
            }
            values.push_back(tokens[c] == "1" ? 1 : 0);
        }
    }
    return BinaryMatrix(lines.size() - first, width, std::move(values));
}

inline void write_dense(std::ostream& out, const BinaryMatrix& m)
{
    std::string line;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        line.clear();
        const auto row = m.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j > 0) {
                line.push_back(',');
            }
            line.push_back(row[j] ? '1' : '0');
        }
        line.push_back('\n');
        out << line;
    }
}

// ---------------------------------------------------------------------------
// Sparse coordinates

inline BinaryMatrix read_sparse(std::istream& in)
{
    const auto lines = detail::read_lines(in);
    if (lines.empty()) {
        throw DataError("sparse matrix file is empty");
    }
    const auto header = detail::split_ws(lines.front().second);
    std::optional<std::size_t> n, d;
    if (header.size() == 2) {
        n = detail::parse_number<std::size_t>(header[0]);
        d = detail::parse_number<std::size_t>(header[1]);
    }
    if (!n || !d || *n == 0 || *d == 0) {
        throw DataError("sparse matrix header must be two positive integers \"N D\"");
    }
    BinaryMatrix m(*n, *d);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& [number, text] = lines[r];
        const auto tokens = detail::split_ws(text);
        std::optional<std::size_t> i, j;
        if (tokens.size() == 2) {
            i = detail::parse_number<std::size_t>(tokens[0]);
            j = detail::parse_number<std::size_t>(tokens[1]);
        }
        if (!i || !j) {
            throw DataError("line " + std::to_string(number) + ": expected \"row col\"");
        }
        if (*i >= *n || *j >= *d) {
            throw DataError("line " + std::to_string(number) + ": index (" + std::to_string(*i) + ", " +
                            std::to_string(*j) + ") out of range");
        }
        if (m(*i, *j) != 0) {
            throw DataError("line " + std::to_string(number) + ": duplicate entry (" +
                            std::to_string(*i) + ", " + std::to_string(*j) + ")");
        }
        m.set(*i, *j, true);
    }
    return m;
}

inline void write_sparse(std::ostream& out, const BinaryMatrix& m)
{
    out << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto row = m.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j]) {
                out << i << ' ' << j << '\n';
            }
        }
    }
}

enum class MatrixFormat { Dense, Sparse };

/// Sparse files open with a two-integer header line; anything else is dense.
inline MatrixFormat detect_format(std::string_view first_line)
{
    if (first_line.find(',') != std::string_view::npos) {
        return MatrixFormat::Dense;
    }
    const auto tokens = detail::split_ws(first_line);
    if (tokens.size() == 2 && detail::parse_number<std::size_t>(tokens[0]) &&
        detail::parse_number<std::size_t>(tokens[1])) {
        return MatrixFormat::Sparse;
    }
    return MatrixFormat::Dense;
}

inline BinaryMatrix load_dense(const std::string& path)
{
    auto in = detail::open_in(path);
    return read_dense(in);
}

inline BinaryMatrix load_sparse(const std::string& path)
{
    auto in = detail::open_in(path);
    return read_sparse(in);
}

inline BinaryMatrix load_matrix(const std::string& path)
{
    auto in = detail::open_in(path);
    std::string line;
    while (std::getline(in, line) && detail::trim(line).empty()) {
    }
    const auto format = detect_format(line);
    in.clear();
    in.seekg(0);
    return format == MatrixFormat::Sparse ? read_sparse(in) : read_dense(in);
}

inline void save_dense(const std::string& path, const BinaryMatrix& m)
{
    auto out = detail::open_out(path);
    write_dense(out, m);
}

inline void save_sparse(const std::string& path, const BinaryMatrix& m)
{
    auto out = detail::open_out(path);
    write_sparse(out, m);
}

// ---------------------------------------------------------------------------
// Labels

inline std::vector<std::size_t> read_labels(std::istream& in)
{
    std::vector<std::size_t> labels;
    for (const auto& [number, text] : detail::read_lines(in)) {
        const auto value = detail::parse_number<std::size_t>(detail::trim(text));
        if (!value) {
            throw DataError("line " + std::to_string(number) + ": expected a non-negative integer label");
        }
        labels.push_back(*value);
    }
    return labels;
}

inline void write_labels(std::ostream& out, const std::vector<std::size_t>& labels)
{
    for (auto l : labels) {
        out << l << '\n';
    }
}

inline std::vector<std::size_t> load_labels(const std::string& path)
{
    auto in = detail::open_in(path);
    return read_labels(in);
}

inline void save_labels(const std::string& path, const std::vector<std::size_t>& labels)
{
    auto out = detail::open_out(path);
    write_labels(out, labels);
}

// ---------------------------------------------------------------------------
// Frequency tables

/// Header "cluster,size,<feature names...>", then one row per cluster.
inline void write_frequency_csv(std::ostream& out, const std::vector<std::vector<double>>& freq,
                                const std::vector<std::size_t>& sizes,
                                const std::vector<std::string>& feature_names = {})
{
    const std::size_t d = freq.empty() ? feature_names.size() : freq.front().size();
    out << "cluster,size";
    for (std::size_t j = 0; j < d; ++j) {
        out << ',' << (j < feature_names.size() ? feature_names[j] : "f" + std::to_string(j));
    }
    out << '\n';
    for (std::size_t k = 0; k < freq.size(); ++k) {
        out << k << ',' << (k < sizes.size() ? sizes[k] : 0);
        for (double v : freq[k]) {
            out << ',' << detail::format_double(v);
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// JSON report

struct ReportFile {
    RunReport run;
    std::vector<std::vector<double>> feature_frequencies; // K x D
    double a_value = 1.0;

    friend bool operator==(const ReportFile&, const ReportFile&) = default;
};

// Keys are written in the documented order.
inline nlohmann::ordered_json report_to_json(const ReportFile& report)
{
    const auto& r = report.run;
    nlohmann::ordered_json j;
    j["assignments"] = r.assignments;
    j["n_clusters"] = r.n_clusters;
    j["seed"] = r.seed;
    j["hyperparams"] = {{"alpha", r.config.alpha},
                        {"a_policy", r.config.a_policy},
                        {"a_value", report.a_value},
                        {"b_policy", r.config.b_policy}};
    j["schedule"] = {{"t_init", r.config.schedule.t_init},
                     {"lambda", r.config.schedule.lambda},
                     {"block", r.config.schedule.block},
                     {"n_sweeps", r.config.schedule.n_sweeps}};
    j["k_init"] = r.config.k_init;
    j["score_trace"] = r.score_trace;
    j["k_trace"] = r.k_trace;
    j["temp_trace"] = r.temp_trace;
    j["feature_frequencies"] = report.feature_frequencies;
    return j;
}

inline void write_report(std::ostream& out, const ReportFile& report)
{
    out << report_to_json(report).dump(2) << '\n';
}

inline ReportFile read_report(std::istream& in)
{
    try {
        const auto j = nlohmann::json::parse(in);
        ReportFile report;
        auto& r = report.run;
        r.assignments = j.at("assignments").get<std::vector<std::size_t>>();
        r.n_clusters = j.at("n_clusters").get<std::size_t>();
        r.seed = j.at("seed").get<std::uint64_t>();
        const auto& h = j.at("hyperparams");
        r.config.alpha = h.at("alpha").get<double>();
        r.config.a_policy = h.at("a_policy").get<std::string>();
        report.a_value = h.at("a_value").get<double>();
        r.config.b_policy = h.at("b_policy").get<std::string>();
        const auto& s = j.at("schedule");
        r.config.schedule.t_init = s.at("t_init").get<double>();
        r.config.schedule.lambda = s.at("lambda").get<double>();
        r.config.schedule.block = s.at("block").get<std::size_t>();
        r.config.schedule.n_sweeps = s.at("n_sweeps").get<std::size_t>();
        r.config.k_init = j.at("k_init").get<std::size_t>();
        r.score_trace = j.at("score_trace").get<std::vector<double>>();
        r.k_trace = j.at("k_trace").get<std::vector<std::size_t>>();
        r.temp_trace = j.at("temp_trace").get<std::vector<double>>();
        report.feature_frequencies = j.at("feature_frequencies").get<std::vector<std::vector<double>>>();

        const std::size_t m = r.config.schedule.n_sweeps;
        if (r.score_trace.size() != m || r.k_trace.size() != m || r.temp_trace.size() != m) {
            throw DataError("report traces must have n_sweeps entries");
        }
        if (report.feature_frequencies.size() != r.n_clusters) {
            throw DataError("report feature_frequencies must have n_clusters rows");
        }
        for (auto l : r.assignments) {
            if (l >= r.n_clusters) {
                throw DataError("report assignment label out of range");
            }
        }
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed report: ") + e.what());
    }
}

inline ReportFile load_report(const std::string& path)
{
    auto in = detail::open_in(path);
    return read_report(in);
}

inline void save_report(const std::string& path, const ReportFile& report)
{
    auto out = detail::open_out(path);
    write_report(out, report);
}

} // namespace binclust
