#pragma once

#include "brane/errors.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace brane {

/// Small dense row-major matrix over an arbitrary scalar (double, Rational, ...).
/// Indices are 0-based; the combinatorial code converts from 1-based labels.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(checked_size(rows, cols), T(0)) {}
    Matrix(std::initializer_list<std::initializer_list<T>> rows)
    {
        rows_ = static_cast<int>(rows.size());
        cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
        data_.reserve(static_cast<std::size_t>(rows_ * cols_));
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != cols_) {
                throw DomainError("Matrix: ragged initializer");
            }
            for (const auto& x : row) {
                data_.push_back(x);
            }
        }
    }

    static Matrix identity(int n)
    {
        Matrix out(n, n);
        for (int i = 0; i < n; ++i) {
            out(i, i) = T(1);
        }
        return out;
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    T& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
    const T& operator()(int r, int c) const
    {
        return data_[static_cast<std::size_t>(r * cols_ + c)];
    }

    /// Entry addressed with the 1-based labels used by minor index sets.
    const T& at1(int r, int c) const { return (*this)(r - 1, c - 1); }

    Matrix transpose() const
    {
        Matrix out(cols_, rows_);
        for (int r = 0; r < rows_; ++r) {
            for (int c = 0; c < cols_; ++c) {
                out(c, r) = (*this)(r, c);
            }
        }
        return out;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_) {
            throw DomainError("Matrix product: inner dimensions differ");
        }
        Matrix out(a.rows_, b.cols_);
        for (int r = 0; r < a.rows_; ++r) {
            for (int c = 0; c < b.cols_; ++c) {
                T acc(0);
                for (int k = 0; k < a.cols_; ++k) {
                    acc += a(r, k) * b(k, c);
                }
                out(r, c) = acc;
            }
        }
        return out;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
            throw DomainError("Matrix sum: shapes differ");
        }
        Matrix out = a;
        for (std::size_t k = 0; k < out.data_.size(); ++k) {
            out.data_[k] += b.data_[k];
        }
        return out;
    }

    bool operator==(const Matrix& other) const
    {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

    const std::vector<T>& data() const noexcept { return data_; }

private:
    static std::size_t checked_size(int rows, int cols)
    {
        if (rows < 0 || cols < 0) {
            throw DomainError("Matrix: negative dimension");
        }
        return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

} // namespace brane
