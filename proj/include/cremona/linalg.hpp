#pragma once

// Dense exact linear algebra over a field: Gaussian elimination, kernels,
// inverses. Pivoting is first-nonzero, so every result is deterministic.

#include <span>
#include <vector>

#include "cremona/errors.hpp"
#include "cremona/fields.hpp"

namespace cremona {

template <field_type F>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, F::zero()) {}

    static Matrix identity(std::size_t m) {
        Matrix r(m, m);
        for (std::size_t i = 0; i < m; ++i) r.at(i, i) = F::one();
        return r;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    F& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const F& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw error("matrix product dimension mismatch");
        Matrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const F& v = at(i, k);
                if (v.is_zero()) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, j) += v * o.at(k, j);
            }
        return r;
    }

    std::vector<F> apply(std::span<const F> v) const {
        if (v.size() != cols_) throw error("matrix-vector dimension mismatch");
        std::vector<F> r(rows_, F::zero());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r[i] += at(i, j) * v[j];
        return r;
    }

    bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<F> a_;
};

/// Reduced row echelon form in place. Returns the pivot columns in order.
template <field_type F>
std::vector<std::size_t> rref_in_place(Matrix<F>& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t piv = row;
        while (piv < m.rows() && m.at(piv, col).is_zero()) ++piv;
        if (piv == m.rows()) continue;
        if (piv != row)
            for (std::size_t j = col; j < m.cols(); ++j) std::swap(m.at(row, j), m.at(piv, j));
        F inv = m.at(row, col).inverse();
        for (std::size_t j = col; j < m.cols(); ++j) m.at(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m.at(i, col).is_zero()) continue;
            F f = m.at(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m.at(i, j) -= f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <field_type F>
std::size_t rank(Matrix<F> m) {
    return rref_in_place(m).size();
}

/// Canonical basis of the right kernel: one vector per free column, with a
/// one in the free slot. A v = 0 exactly for every basis vector.
template <field_type F>
std::vector<std::vector<F>> nullspace(Matrix<F> m) {
    const std::size_t n = m.cols();
    auto pivots = rref_in_place(m);
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<F>> basis;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<F> v(n, F::zero());
        v[free] = F::one();
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.at(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

template <field_type F>
F det(Matrix<F> m) {
    if (m.rows() != m.cols()) throw error("determinant of non-square matrix");
    F d = F::one();
    std::size_t n = m.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m.at(piv, col).is_zero()) ++piv;
        if (piv == n) return F::zero();
        if (piv != col) {
            for (std::size_t j = col; j < n; ++j) std::swap(m.at(col, j), m.at(piv, j));
            d = -d;
        }
        d *= m.at(col, col);
        F inv = m.at(col, col).inverse();
        for (std::size_t i = col + 1; i < n; ++i) {
            if (m.at(i, col).is_zero()) continue;
            F f = m.at(i, col) * inv;
            for (std::size_t j = col; j < n; ++j) m.at(i, j) -= f * m.at(col, j);
        }
    }
    return d;
}

template <field_type F>
bool is_invertible(const Matrix<F>& m) {
    return m.rows() == m.cols() && !det(m).is_zero();
}

template <field_type F>
Matrix<F> inverse(const Matrix<F>& m) {
    if (m.rows() != m.cols()) throw error("inverse of non-square matrix");
    const std::size_t n = m.rows();
    Matrix<F> aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = F::one();
    }
    auto pivots = rref_in_place(aug);
    // singular inputs leak pivots into the augmented half
    std::size_t left_pivots = 0;
    for (auto c : pivots) left_pivots += c < n;
    if (left_pivots != n) throw error("matrix is singular");
    Matrix<F> r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r.at(i, j) = aug.at(i, n + j);
    return r;
}

}  // namespace cremona
