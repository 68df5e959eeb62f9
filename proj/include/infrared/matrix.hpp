#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace infrared {

/// Row-major dense matrix; one row per node.
template <typename T>
class DenseMatrix {
public:
    using value_type = T;

    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<T> values() { return data_; }
    std::span<const T> values() const { return data_; }
    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    bool operator==(const DenseMatrix&) const = default;

    template <typename U>
    DenseMatrix<U> cast() const {
        DenseMatrix<U> out(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) out.data()[i] = static_cast<U>(data_[i]);
        return out;
    }

    /// Copies the listed rows, in order.
    template <typename Index>
    DenseMatrix gather_rows(std::span<const Index> rows) const {
        DenseMatrix out(rows.size(), cols_);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto src = row(static_cast<std::size_t>(rows[i]));
            std::copy(src.begin(), src.end(), out.row(i).begin());
        }
        return out;
    }

    /// Appends the rows of `other` (same column count).
    void append_rows(const DenseMatrix& other) {
        data_.insert(data_.end(), other.data_.begin(), other.data_.end());
        rows_ += other.rows_;
        if (cols_ == 0) cols_ = other.cols_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using EmbeddingMatrix = DenseMatrix<float>;

}  // namespace infrared
