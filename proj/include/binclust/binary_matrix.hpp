#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "binclust/error.hpp"

namespace binclust {

/// Dense N x D matrix of {0,1} observations, stored row-major.
class BinaryMatrix {
public:
    BinaryMatrix() = default;

    /// All-zero matrix. Both dimensions must be positive.
    BinaryMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), values_(rows * cols, 0)
    {
        if (rows == 0 || cols == 0) {
            throw DataError("binary matrix needs at least one row and one column");
        }
    }

    BinaryMatrix(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> values)
        : rows_(rows), cols_(cols), values_(std::move(values))
    {
        if (rows == 0 || cols == 0) {
            throw DataError("binary matrix needs at least one row and one column");
        }
        if (values_.size() != rows * cols) {
            throw DataError("binary matrix storage has " + std::to_string(values_.size()) +
                            " entries, expected " + std::to_string(rows * cols));
        }
        for (std::size_t idx = 0; idx < values_.size(); ++idx) {
            if (values_[idx] > 1) {
                throw DataError("non-binary value at row " + std::to_string(idx / cols) +
                                ", column " + std::to_string(idx % cols));
            }
        }
    }

    static BinaryMatrix from_rows(const std::vector<std::vector<int>>& rows)
    {
        if (rows.empty()) {
            throw DataError("binary matrix needs at least one row");
        }
        const std::size_t cols = rows.front().size();
        std::vector<std::uint8_t> values;
        values.reserve(rows.size() * cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) {
                throw DataError("ragged row " + std::to_string(i));
            }
            for (std::size_t j = 0; j < cols; ++j) {
                const int v = rows[i][j];
                if (v != 0 && v != 1) {
                    throw DataError("non-binary value at row " + std::to_string(i) +
                                    ", column " + std::to_string(j));
                }
                values.push_back(static_cast<std::uint8_t>(v));
            }
        }
        return BinaryMatrix(rows.size(), cols, std::move(values));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    std::uint8_t operator()(std::size_t i, std::size_t j) const noexcept
    {
        return values_[i * cols_ + j];
    }

    void set(std::size_t i, std::size_t j, bool value) noexcept
    {
        values_[i * cols_ + j] = value ? 1 : 0;
    }

    void flip(std::size_t i, std::size_t j) noexcept { values_[i * cols_ + j] ^= 1; }

    std::span<const std::uint8_t> row(std::size_t i) const noexcept
    {
        return {values_.data() + i * cols_, cols_};
    }

    std::span<const std::uint8_t> values() const noexcept { return values_; }

    std::vector<std::size_t> column_sums() const
    {
        std::vector<std::size_t> sums(cols_, 0);
        for (std::size_t i = 0; i < rows_; ++i) {
            const auto r = row(i);
            for (std::size_t j = 0; j < cols_; ++j) {
                sums[j] += r[j];
            }
        }
        return sums;
    }

    // Column indices of the 1-entries of each row.
    std::vector<std::vector<std::uint32_t>> row_supports() const
    {
        std::vector<std::vector<std::uint32_t>> support(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            const auto r = row(i);
            for (std::size_t j = 0; j < cols_; ++j) {
                if (r[j] != 0) {
                    support[i].push_back(static_cast<std::uint32_t>(j));
                }
            }
        }
        return support;
    }

    std::size_t count_ones() const noexcept
    {
        std::size_t n = 0;
        for (auto v : values_) {
            n += v;
        }
        return n;
    }

    BinaryMatrix select_rows(std::span<const std::size_t> order) const
    {
        std::vector<std::uint8_t> out;
        out.reserve(order.size() * cols_);
        for (auto i : order) {
            const auto r = row(i);
            out.insert(out.end(), r.begin(), r.end());
        }
        return BinaryMatrix(order.size(), cols_, std::move(out));
    }

    friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> values_;
};

} // namespace binclust
