#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace leaklab {

// Dense row-major matrix of doubles. Small on purpose: every consumer in this
// library streams over rows or columns, nothing needs BLAS.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    // Rows of `this` listed by `idx`, in order. Out-of-range indices throw.
    Matrix take_rows(std::span<const int> idx) const {
        Matrix out(idx.size(), cols_);
        for (std::size_t r = 0; r < idx.size(); ++r) {
            if (idx[r] < 0 || static_cast<std::size_t>(idx[r]) >= rows_)
                throw std::out_of_range("Matrix::take_rows: index out of range");
            for (std::size_t j = 0; j < cols_; ++j) out(r, j) = (*this)(static_cast<std::size_t>(idx[r]), j);
        }
        return out;
    }

    Matrix take_cols(std::span<const int> idx) const {
        Matrix out(rows_, idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j) {
            if (idx[j] < 0 || static_cast<std::size_t>(idx[j]) >= cols_)
                throw std::out_of_range("Matrix::take_cols: index out of range");
            for (std::size_t i = 0; i < rows_; ++i) out(i, j) = (*this)(i, static_cast<std::size_t>(idx[j]));
        }
        return out;
    }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline std::vector<int> take(std::span<const int> values, std::span<const int> idx) {
    std::vector<int> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(values[static_cast<std::size_t>(i)]);
    return out;
}

} // namespace leaklab
