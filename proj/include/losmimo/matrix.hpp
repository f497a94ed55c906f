// SPDX-License-Identifier: Apache-2.0
//
// losmimo - line-of-sight MIMO workbench for randomly oriented antenna arrays
// Copyright (C) 2026 The losmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef LOSMIMO_MATRIX_HPP
#define LOSMIMO_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace losmimo
{
    using cdouble = std::complex<double>;

    namespace detail
    {
        template <typename T>
        T conj_if_complex(const T &v)
        {
            if constexpr (std::is_same_v<T, cdouble>)
                return std::conj(v);
            else
                return v;
        }
    }

    // Small dense row-major matrix. Sized for channel matrices (n_r x 2) and
    // codewords (2 x T); no expression templates, no aliasing tricks.
    template <typename T>
    class Matrix
    {
    public:
        Matrix() = default;
        Matrix(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

        Matrix(std::initializer_list<std::initializer_list<T>> init)
        {
            rows_ = init.size();
            cols_ = rows_ ? init.begin()->size() : 0;
            data_.reserve(rows_ * cols_);
            for (const auto &row : init)
            {
                if (row.size() != cols_)
                    throw std::invalid_argument("Matrix initializer rows must have equal length.");
                data_.insert(data_.end(), row.begin(), row.end());
            }
        }

        std::size_t rows() const { return rows_; }
        std::size_t cols() const { return cols_; }
        std::size_t size() const { return data_.size(); }
        bool empty() const { return data_.empty(); }

        T &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
        const T &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

        std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
        std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

        std::vector<T> col(std::size_t c) const
        {
            std::vector<T> v(rows_);
            for (std::size_t r = 0; r < rows_; ++r)
                v[r] = (*this)(r, c);
            return v;
        }

        std::span<const T> data() const { return data_; }
        std::span<T> data() { return data_; }

        // Conjugate transpose (plain transpose for real T)
        Matrix adjoint() const
        {
            Matrix a(cols_, rows_);
            for (std::size_t r = 0; r < rows_; ++r)
                for (std::size_t c = 0; c < cols_; ++c)
                    a(c, r) = detail::conj_if_complex((*this)(r, c));
            return a;
        }

        Matrix &operator+=(const Matrix &o)
        {
            check_same_shape(o);
            for (std::size_t i = 0; i < data_.size(); ++i)
                data_[i] += o.data_[i];
            return *this;
        }
        Matrix &operator-=(const Matrix &o)
        {
            check_same_shape(o);
            for (std::size_t i = 0; i < data_.size(); ++i)
                data_[i] -= o.data_[i];
            return *this;
        }
        Matrix &operator*=(T s)
        {
            for (auto &v : data_)
                v *= s;
            return *this;
        }

        friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
        friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
        friend Matrix operator*(Matrix a, T s) { return a *= s; }
        friend Matrix operator*(T s, Matrix a) { return a *= s; }

        friend Matrix operator*(const Matrix &a, const Matrix &b)
        {
            if (a.cols_ != b.rows_)
                throw std::invalid_argument("Matrix product dimension mismatch.");
            Matrix p(a.rows_, b.cols_);
            for (std::size_t i = 0; i < a.rows_; ++i)
                for (std::size_t k = 0; k < a.cols_; ++k)
                {
                    const T aik = a(i, k);
                    for (std::size_t j = 0; j < b.cols_; ++j)
                        p(i, j) += aik * b(k, j);
                }
            return p;
        }

        friend bool operator==(const Matrix &, const Matrix &) = default;

    private:
        void check_same_shape(const Matrix &o) const
        {
            if (rows_ != o.rows_ || cols_ != o.cols_)
                throw std::invalid_argument("Matrix shape mismatch.");
        }

        std::size_t rows_ = 0, cols_ = 0;
        std::vector<T> data_;
    };

    using CMatrix = Matrix<cdouble>;
    using RMatrix = Matrix<double>;

    template <typename T>
    double frobenius_norm_sq(const Matrix<T> &m)
    {
        double s = 0.0;
        for (const auto &v : m.data())
            s += std::norm(v);
        return s;
    }

    // a^H b for equal-length complex vectors
    inline cdouble inner(std::span<const cdouble> a, std::span<const cdouble> b)
    {
        if (a.size() != b.size())
            throw std::invalid_argument("Inner product length mismatch.");
        cdouble s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += std::conj(a[i]) * b[i];
        return s;
    }

    inline double norm_sq(std::span<const cdouble> a)
    {
        double s = 0.0;
        for (const auto &v : a)
            s += std::norm(v);
        return s;
    }
}

#endif
