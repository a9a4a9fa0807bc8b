#pragma once

// Small dense matrices over exact rings (rationals, polynomials) with the handful of
// operations the geometry needs: products, cofactor determinants, adjugates, exact rank
// and Sylvester-type definiteness tests.

#include "rational.hpp"

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace umbrella {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw std::invalid_argument("ragged matrix initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n, const T& one = T(1), const T& zero = T(0)) {
        Matrix m(n, n, zero);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix transpose() const {
        Matrix t(cols_, rows_, zero_like());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("matrix block out of range");
        Matrix b(nr, nc, zero_like());
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }

    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw std::out_of_range("matrix block out of range");
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product dimension mismatch");
        Matrix c(a.rows_, b.cols_, a.zero_like());
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k)
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
        return c;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) {
        a.require_same_shape(b);
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }
    friend Matrix operator-(Matrix a, const Matrix& b) {
        a.require_same_shape(b);
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }
    Matrix scaled(const T& k) const {
        Matrix r = *this;
        for (auto& v : r.data_) v = v * k;
        return r;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    bool is_symmetric() const {
        if (!square()) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if (!((*this)(i, j) == (*this)(j, i))) return false;
        return true;
    }

    /// Submatrix on the given row and column index sets.
    Matrix select(const std::vector<std::size_t>& r, const std::vector<std::size_t>& c) const {
        Matrix m(r.size(), c.size(), zero_like());
        for (std::size_t i = 0; i < r.size(); ++i)
            for (std::size_t j = 0; j < c.size(); ++j) m(i, j) = (*this)(r[i], c[j]);
        return m;
    }

    void require_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
    }

private:
    // Zero of the same "kind" as the stored entries (keeps polynomial variable counts).
    T zero_like() const {
        if (data_.empty()) return T(0);
        return data_.front() - data_.front();
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RatMatrix = Matrix<Rational>;

/// Determinant by cofactor expansion; for small matrices over any commutative ring.
template <class T>
T det_cofactor(const Matrix<T>& m) {
    if (!m.square()) throw std::invalid_argument("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) throw std::invalid_argument("determinant of an empty matrix");
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    T acc = m(0, 0) - m(0, 0);
    std::vector<std::size_t> rows(n - 1), cols;
    for (std::size_t i = 1; i < n; ++i) rows[i - 1] = i;
    for (std::size_t j = 0; j < n; ++j) {
        cols.clear();
        for (std::size_t c = 0; c < n; ++c)
            if (c != j) cols.push_back(c);
        T minor = det_cofactor(m.select(rows, cols));
        T term = m(0, j) * minor;
        if (j % 2 == 0) acc = acc + term;
        else acc = acc - term;
    }
    return acc;
}

/// Cofactor matrix: cof(i,j) = (-1)^{i+j} det(minor_ij). Equals adj(m)^t.
template <class T>
Matrix<T> cofactor_matrix(const Matrix<T>& m) {
    if (!m.square()) throw std::invalid_argument("cofactor matrix of a non-square matrix");
    const std::size_t n = m.rows();
    Matrix<T> cof = m;
    if (n == 1) throw std::invalid_argument("cofactor matrix needs n >= 2");
    std::vector<std::size_t> rows, cols;
    for (std::size_t i = 0; i < n; ++i) {
        rows.clear();
        for (std::size_t r = 0; r < n; ++r)
            if (r != i) rows.push_back(r);
        for (std::size_t j = 0; j < n; ++j) {
            cols.clear();
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) cols.push_back(c);
            T d = det_cofactor(m.select(rows, cols));
            if ((i + j) % 2 == 0) cof(i, j) = d;
            else cof(i, j) = T(-d);
        }
    }
    return cof;
}

/// Determinant over the rationals by fraction-exact Gaussian elimination.
inline Rational det(RatMatrix m) {
    if (!m.square()) throw std::invalid_argument("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    Rational d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && sgn(m(piv, c)) == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(piv, j));
            d = -d;
        }
        d *= m(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            if (sgn(m(r, c)) == 0) continue;
            const Rational f = m(r, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return d;
}

/// Exact rank by row reduction.
inline std::size_t rank(RatMatrix m) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && sgn(m(piv, c)) == 0) ++piv;
        if (piv == m.rows()) continue;
        if (piv != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(piv, j));
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            if (sgn(m(i, c)) == 0) continue;
            const Rational f = m(i, c) / m(r, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return r;
}

inline RatMatrix inverse(const RatMatrix& m) {
    const Rational d = det(m);
    if (sgn(d) == 0) throw std::domain_error("matrix is singular");
    RatMatrix adj = cofactor_matrix(m).transpose();
    return adj.scaled(Rational(1) / d);
}

/// Leading principal minors det(m[0..k,0..k]), k = 1..n.
inline std::vector<Rational> leading_minors(const RatMatrix& m) {
    if (!m.square()) throw std::invalid_argument("leading minors of a non-square matrix");
    std::vector<Rational> out;
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < m.rows(); ++k) {
        idx.push_back(k);
        out.push_back(det(m.select(idx, idx)));
    }
    return out;
}

/// Sylvester's criterion for a symmetric rational matrix.
inline bool is_positive_definite(const RatMatrix& m) {
    if (!m.is_symmetric()) return false;
    for (const auto& d : leading_minors(m))
        if (sgn(d) <= 0) return false;
    return true;
}

inline bool is_negative_definite(const RatMatrix& m) { return is_positive_definite(m.scaled(-1)); }

/// Positive semidefinite iff every principal minor is nonnegative.
inline bool is_positive_semidefinite(const RatMatrix& m) {
    if (!m.is_symmetric()) return false;
    const std::size_t n = m.rows();
    if (n > 20) throw std::invalid_argument("principal-minor test limited to n <= 20");
    std::vector<std::size_t> idx;
    for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
        idx.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ul << i)) idx.push_back(i);
        if (sgn(det(m.select(idx, idx))) < 0) return false;
    }
    return true;
}

inline std::string to_string(const RatMatrix& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s += i ? ", [" : "[";
        for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? ", " : "") + to_string(m(i, j));
        s += "]";
    }
    return s + "]";
}

}  // namespace umbrella
