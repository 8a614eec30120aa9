// Copyright 2026 the affclass authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

#ifndef AFFCLASS_MATRIX_HPP
#define AFFCLASS_MATRIX_HPP

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "affclass/poly.hpp"
#include "affclass/scalar.hpp"

namespace affclass {

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Dense row-major matrix over a field K. The 0x0 matrix is a valid value
/// (empty direct summand).
template <class K>
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), e_(rows * cols, K(0)) {}
    Matrix(size_t rows, size_t cols, std::vector<K> entries)
        : rows_(rows), cols_(cols), e_(std::move(entries)) {
        if (e_.size() != rows_ * cols_)
            throw DimensionMismatch("entry count does not match shape");
    }
    /// Row-of-rows construction, mostly for tests and parsing.
    explicit Matrix(const std::vector<std::vector<K>>& rows) {
        rows_ = rows.size();
        cols_ = rows.empty() ? 0 : rows[0].size();
        e_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw DimensionMismatch("ragged rows");
            for (const auto& v : r) e_.push_back(v);
        }
    }

    static Matrix identity(size_t n) {
        Matrix m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = K(1);
        return m;
    }
    static Matrix diagonal(const std::vector<K>& d) {
        Matrix m(d.size(), d.size());
        for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    bool is_empty() const { return rows_ == 0 && cols_ == 0; }

    K& operator()(size_t r, size_t c) { return e_[r * cols_ + c]; }
    const K& operator()(size_t r, size_t c) const { return e_[r * cols_ + c]; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix operator+(const Matrix& o) const {
        check_same_shape(o);
        Matrix r = *this;
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        check_same_shape(o);
        Matrix r = *this;
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] -= o.e_[i];
        return r;
    }
    Matrix operator-() const {
        Matrix r = *this;
        for (K& v : r.e_) v = -v;
        return r;
    }
    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw DimensionMismatch("matrix product shape");
        Matrix r(rows_, o.cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t k = 0; k < cols_; ++k) {
                const K& a = (*this)(i, k);
                if (a == K(0)) continue;
                for (size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }
    Matrix operator*(const K& s) const {
        Matrix r = *this;
        for (K& v : r.e_) v = v * s;
        return r;
    }
    std::vector<K> operator*(const std::vector<K>& v) const {
        if (cols_ != v.size()) throw DimensionMismatch("matrix-vector shape");
        std::vector<K> r(rows_, K(0));
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    Matrix transposed() const {
        Matrix r(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    Matrix conj() const {
        Matrix r = *this;
        for (K& v : r.e_) v = field_traits<K>::conj(v);
        return r;
    }

    Matrix submatrix(size_t r0, size_t c0, size_t nr, size_t nc) const {
        Matrix r(nr, nc);
        for (size_t i = 0; i < nr; ++i)
            for (size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
        return r;
    }

    void set_block(size_t r0, size_t c0, const Matrix& b) {
        for (size_t i = 0; i < b.rows(); ++i)
            for (size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    bool is_zero() const {
        for (const K& v : e_)
            if (v != K(0)) return false;
        return true;
    }

  private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw DimensionMismatch("matrix shapes differ");
    }
    size_t rows_, cols_;
    std::vector<K> e_;
};

template <class K>
Matrix<K> direct_sum(const Matrix<K>& a, const Matrix<K>& b) {
    Matrix<K> r(a.rows() + b.rows(), a.cols() + b.cols());
    r.set_block(0, 0, a);
    r.set_block(a.rows(), a.cols(), b);
    return r;
}

/// f(x) = Ax + b with A square and |b| = n.
template <class K>
struct AffineOperator {
    Matrix<K> A;
    std::vector<K> b;

    AffineOperator() = default;
    AffineOperator(Matrix<K> a, std::vector<K> t) : A(std::move(a)), b(std::move(t)) {
        if (!A.is_square() || A.rows() != b.size())
            throw DimensionMismatch("affine operator shape");
    }
    size_t dim() const { return b.size(); }
    std::vector<K> operator()(const std::vector<K>& x) const {
        std::vector<K> r = A * x;
        for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
        return r;
    }
    bool operator==(const AffineOperator& o) const { return A == o.A && b == o.b; }
};

template <class K>
AffineOperator<K> direct_sum(const AffineOperator<K>& f, const AffineOperator<K>& g) {
    std::vector<K> b = f.b;
    b.insert(b.end(), g.b.begin(), g.b.end());
    return {direct_sum(f.A, g.A), std::move(b)};
}

namespace detail {

/// Row echelon reduction in place; returns pivot columns. Destroys m.
template <class K>
std::vector<size_t> row_echelon(Matrix<K>& m) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        size_t sel = row;
        while (sel < m.rows() && m(sel, col) == K(0)) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row)
            for (size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(row, j));
        K inv = K(1) / m(row, col);
        for (size_t j = col; j < m.cols(); ++j) m(row, j) = m(row, j) * inv;
        for (size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col) == K(0)) continue;
            K f = m(i, col);
            for (size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace detail

template <class K>
size_t rank(const Matrix<K>& m) {
    Matrix<K> w = m;
    return detail::row_echelon(w).size();
}

/// Exact determinant; 1 for the 0x0 matrix (empty product).
template <class K>
K determinant(const Matrix<K>& m) {
    if (!m.is_square()) throw DimensionMismatch("determinant of non-square");
    size_t n = m.rows();
    Matrix<K> w = m;
    K det(1);
    for (size_t col = 0; col < n; ++col) {
        size_t sel = col;
        while (sel < n && w(sel, col) == K(0)) ++sel;
        if (sel == n) return K(0);
        if (sel != col) {
            for (size_t j = 0; j < n; ++j) std::swap(w(sel, j), w(col, j));
            det = -det;
        }
        det = det * w(col, col);
        K inv = K(1) / w(col, col);
        for (size_t i = col + 1; i < n; ++i) {
            if (w(i, col) == K(0)) continue;
            K f = w(i, col) * inv;
            for (size_t j = col; j < n; ++j) w(i, j) -= f * w(col, j);
        }
    }
    return det;
}

/// One exact solution of Mx = c, or nullopt when inconsistent. Free
/// variables are set to zero, which makes the result deterministic.
template <class K>
std::optional<std::vector<K>> solve(const Matrix<K>& m, const std::vector<K>& c) {
    if (m.rows() != c.size()) throw DimensionMismatch("solve shape");
    Matrix<K> aug(m.rows(), m.cols() + 1);
    aug.set_block(0, 0, m);
    for (size_t i = 0; i < m.rows(); ++i) aug(i, m.cols()) = c[i];
    std::vector<size_t> pivots = detail::row_echelon(aug);
    // Inconsistent iff a pivot lands in the augmented column.
    if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
    std::vector<K> x(m.cols(), K(0));
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, m.cols());
    return x;
}

template <class K>
std::optional<Matrix<K>> inverse(const Matrix<K>& m) {
    if (!m.is_square()) throw DimensionMismatch("inverse of non-square");
    size_t n = m.rows();
    Matrix<K> aug(n, 2 * n);
    aug.set_block(0, 0, m);
    aug.set_block(0, n, Matrix<K>::identity(n));
    std::vector<size_t> pivots = detail::row_echelon(aug);
    if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1)) return std::nullopt;
    return aug.submatrix(0, n, n, n);
}

/// Basis of the kernel as matrix columns (n x nullity).
template <class K>
Matrix<K> kernel_basis(const Matrix<K>& m) {
    Matrix<K> w = m;
    std::vector<size_t> pivots = detail::row_echelon(w);
    std::vector<bool> is_pivot(m.cols(), false);
    for (size_t p : pivots) is_pivot[p] = true;
    size_t nf = m.cols() - pivots.size();
    Matrix<K> basis(m.cols(), nf);
    size_t k = 0;
    for (size_t col = 0; col < m.cols(); ++col) {
        if (is_pivot[col]) continue;
        basis(col, k) = K(1);
        for (size_t r = 0; r < pivots.size(); ++r)
            basis(pivots[r], k) = -w(r, col);
        ++k;
    }
    return basis;
}

/// Basis of the column space as matrix columns (n x rank).
template <class K>
Matrix<K> image_basis(const Matrix<K>& m) {
    Matrix<K> w = m;
    std::vector<size_t> pivots = detail::row_echelon(w);
    Matrix<K> basis(m.rows(), pivots.size());
    for (size_t k = 0; k < pivots.size(); ++k)
        for (size_t i = 0; i < m.rows(); ++i) basis(i, k) = m(i, pivots[k]);
    return basis;
}

/// Monic characteristic polynomial det(xI - M) by Faddeev-LeVerrier.
template <class K>
Poly<K> charpoly(const Matrix<K>& m) {
    if (!m.is_square()) throw DimensionMismatch("charpoly of non-square");
    size_t n = m.rows();
    std::vector<K> c(n + 1, K(0));
    c[n] = K(1);
    Matrix<K> b = Matrix<K>::identity(n);
    for (size_t k = 1; k <= n; ++k) {
        b = m * b;
        K tr(0);
        for (size_t i = 0; i < n; ++i) tr += b(i, i);
        K ck = -tr / K(static_cast<int>(k));
        c[n - k] = ck;
        for (size_t i = 0; i < n; ++i) b(i, i) += ck;
    }
    return Poly<K>(std::move(c));
}

/// p(M) by Horner evaluation.
template <class K>
Matrix<K> mat_poly_eval(const Poly<K>& p, const Matrix<K>& m) {
    if (!m.is_square()) throw DimensionMismatch("mat_poly_eval of non-square");
    size_t n = m.rows();
    Matrix<K> acc(n, n);
    for (size_t i = p.coeffs().size(); i-- > 0;) {
        acc = m * acc;
        for (size_t d = 0; d < n; ++d) acc(d, d) += p.coeffs()[i];
    }
    return acc;
}

template <class K>
Matrix<K> mat_pow(const Matrix<K>& m, size_t e) {
    Matrix<K> r = Matrix<K>::identity(m.rows());
    Matrix<K> b = m;
    for (; e; e >>= 1) {
        if (e & 1) r = r * b;
        b = b * b;
    }
    return r;
}

}  // namespace affclass

#endif  // AFFCLASS_MATRIX_HPP
