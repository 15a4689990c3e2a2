#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bnck/scalar.hpp"

namespace bnck {

/// Dense row-major matrix over Scalar or CScalar.
template <class T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(size_t r, size_t c) : rows_(r), cols_(c), a_(r * c, scalar_traits<T>::zero()) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (auto& row : init) {
            if (row.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
            for (auto& v : row) a_.push_back(v);
        }
    }
    static Matrix identity(size_t n) {
        Matrix m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = scalar_traits<T>::one();
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    T& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    friend Matrix operator+(const Matrix& x, const Matrix& y) {
        x.check_same(y);
        Matrix r(x.rows_, x.cols_);
        for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] + y.a_[k];
        return r;
    }
    friend Matrix operator-(const Matrix& x, const Matrix& y) {
        x.check_same(y);
        Matrix r(x.rows_, x.cols_);
        for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] - y.a_[k];
        return r;
    }
    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        if (x.cols_ != y.rows_) throw std::invalid_argument("Matrix: product shape mismatch");
        Matrix r(x.rows_, y.cols_);
        for (size_t i = 0; i < x.rows_; ++i)
            for (size_t k = 0; k < x.cols_; ++k) {
                if (scalar_traits<T>::is_zero(x(i, k))) continue;
                for (size_t j = 0; j < y.cols_; ++j) r(i, j) += x(i, k) * y(k, j);
            }
        return r;
    }
    friend Matrix operator*(const T& s, const Matrix& x) {
        Matrix r(x.rows_, x.cols_);
        for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = s * x.a_[k];
        return r;
    }
    Matrix operator-() const { return T(Scalar(-1)) * *this; }
    friend bool operator==(const Matrix& x, const Matrix& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_) return false;
        for (size_t k = 0; k < x.a_.size(); ++k)
            if (x.a_[k] != y.a_[k]) return false;
        return true;
    }
    friend bool operator!=(const Matrix& x, const Matrix& y) { return !(x == y); }

    bool is_zero() const {
        for (auto& v : a_)
            if (!scalar_traits<T>::is_zero(v)) return false;
        return true;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    std::vector<T> apply(const std::vector<T>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("Matrix: apply shape mismatch");
        std::vector<T> r(rows_, scalar_traits<T>::zero());
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    std::vector<T> row(size_t i) const {
        return std::vector<T>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
    }
    void set_row(size_t i, const std::vector<T>& v) {
        for (size_t j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
    }
    void append_row(const std::vector<T>& v) {
        if (cols_ == 0) cols_ = v.size();
        if (v.size() != cols_) throw std::invalid_argument("Matrix: appended row shape mismatch");
        a_.insert(a_.end(), v.begin(), v.end());
        ++rows_;
    }

    /// In-place reduced row echelon form; returns the rank. Pivots are chosen
    /// by magnitude so the numeric mode stays stable; in exact mode any
    /// nonzero pivot is equivalent and the result is the canonical RREF.
    size_t rref_in_place() {
        size_t rank = 0;
        for (size_t col = 0; col < cols_ && rank < rows_; ++col) {
            size_t piv = rows_;
            double best = 0;
            for (size_t i = rank; i < rows_; ++i) {
                double m = scalar_traits<T>::mag((*this)(i, col));
                if (!scalar_traits<T>::is_zero((*this)(i, col)) && (piv == rows_ || m > best)) {
                    piv = i;
                    best = m;
                }
            }
            if (piv == rows_) continue;
            if (piv != rank)
                for (size_t j = 0; j < cols_; ++j) std::swap((*this)(piv, j), (*this)(rank, j));
            T inv = scalar_traits<T>::one() / (*this)(rank, col);
            for (size_t j = col; j < cols_; ++j) (*this)(rank, j) = inv * (*this)(rank, j);
            (*this)(rank, col) = scalar_traits<T>::one();
            for (size_t i = 0; i < rows_; ++i) {
                if (i == rank || scalar_traits<T>::is_zero((*this)(i, col))) continue;
                T f = (*this)(i, col);
                for (size_t j = col; j < cols_; ++j) (*this)(i, j) -= f * (*this)(rank, j);
                (*this)(i, col) = scalar_traits<T>::zero();
            }
            ++rank;
        }
        return rank;
    }

    T det() const {
        if (rows_ != cols_) throw std::invalid_argument("Matrix: det of non-square");
        Matrix m = *this;
        T d = scalar_traits<T>::one();
        size_t n = rows_;
        for (size_t col = 0; col < n; ++col) {
            size_t piv = n;
            double best = 0;
            for (size_t i = col; i < n; ++i) {
                double mg = scalar_traits<T>::mag(m(i, col));
                if (!scalar_traits<T>::is_zero(m(i, col)) && (piv == n || mg > best)) {
                    piv = i;
                    best = mg;
                }
            }
            if (piv == n) return scalar_traits<T>::zero();
            if (piv != col) {
                for (size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
                d = -d;
            }
            d = d * m(col, col);
            T inv = scalar_traits<T>::one() / m(col, col);
            for (size_t i = col + 1; i < n; ++i) {
                T f = inv * m(i, col);
                if (scalar_traits<T>::is_zero(f)) continue;
                for (size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
            }
        }
        return d;
    }

    Matrix inverse() const {
        if (rows_ != cols_) throw std::invalid_argument("Matrix: inverse of non-square");
        size_t n = rows_;
        Matrix aug(n, 2 * n);
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
            aug(i, n + i) = scalar_traits<T>::one();
        }
        if (aug.rref_in_place() != n) throw std::domain_error("Matrix: singular");
        Matrix r(n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) r(i, j) = aug(i, n + j);
        return r;
    }

    /// Canonical basis of the (right) kernel, one row per basis vector,
    /// echelonized.
    Matrix kernel() const {
        Matrix m = *this;
        size_t rank = m.rref_in_place();
        std::vector<size_t> pivot_col;
        std::vector<bool> is_pivot(cols_, false);
        for (size_t i = 0, col = 0; i < rank; ++i) {
            while (col < cols_ && scalar_traits<T>::is_zero(m(i, col))) ++col;
            if (col == cols_) break;
            pivot_col.push_back(col);
            is_pivot[col] = true;
        }
        Matrix basis(0, cols_);
        for (size_t free = 0; free < cols_; ++free) {
            if (is_pivot[free]) continue;
            std::vector<T> v(cols_, scalar_traits<T>::zero());
            v[free] = scalar_traits<T>::one();
            for (size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -m(i, free);
            basis.append_row(v);
        }
        basis.rref_in_place();
        return basis;
    }

    std::string str() const {
        std::string s;
        for (size_t i = 0; i < rows_; ++i) {
            s += "[";
            for (size_t j = 0; j < cols_; ++j) {
                s += str_of((*this)(i, j));
                if (j + 1 < cols_) s += ", ";
            }
            s += "]\n";
        }
        return s;
    }

private:
    static std::string str_of(const Scalar& v) { return v.str(); }
    static std::string str_of(const CScalar& v) { return v.str(); }
    void check_same(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("Matrix: shape mismatch");
    }
    size_t rows_, cols_;
    std::vector<T> a_;
};

using RMatrix = Matrix<Scalar>;
using CMatrix = Matrix<CScalar>;

inline CMatrix complexify(const RMatrix& m) {
    CMatrix r(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) r(i, j) = CScalar(m(i, j));
    return r;
}

inline std::vector<CScalar> complexify(const std::vector<Scalar>& v) {
    std::vector<CScalar> r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = CScalar(v[i]);
    return r;
}

/// rref(m) -> (canonical echelon form, rank)
template <class T>
std::pair<Matrix<T>, size_t> rref(const Matrix<T>& m) {
    Matrix<T> r = m;
    size_t rank = r.rref_in_place();
    return {r, rank};
}

/// Subspace of C^d held by its unique reduced-row-echelon basis; two
/// subspaces are equal iff their representations are identical.
class Subspace {
public:
    Subspace() : dim_(0) {}
    explicit Subspace(size_t ambient) : dim_(ambient), basis_(0, ambient) {}
    /// Rows of `span` generate the subspace.
    Subspace(size_t ambient, CMatrix span) : dim_(ambient) {
        if (span.cols() != ambient) throw std::invalid_argument("Subspace: ambient mismatch");
        size_t rank = span.rref_in_place();
        basis_ = CMatrix(rank, ambient);
        for (size_t i = 0; i < rank; ++i)
            for (size_t j = 0; j < ambient; ++j) basis_(i, j) = span(i, j);
    }

    size_t ambient() const { return dim_; }
    size_t rank() const { return basis_.rows(); }
    const CMatrix& basis() const { return basis_; }
    std::vector<CScalar> basis_vector(size_t i) const { return basis_.row(i); }

    bool contains(const std::vector<CScalar>& v) const {
        CMatrix m = basis_;
        m.append_row(v);
        return m.rref_in_place() == rank();
    }
    bool is_zero() const { return rank() == 0; }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.dim_ == b.dim_ && a.basis_ == b.basis_;
    }
    friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

    Subspace conj() const {
        CMatrix m = basis_;
        for (size_t i = 0; i < m.rows(); ++i)
            for (size_t j = 0; j < m.cols(); ++j) m(i, j) = m(i, j).conj();
        return Subspace(dim_, m);
    }

    friend Subspace sum(const Subspace& a, const Subspace& b) {
        if (a.dim_ != b.dim_) throw std::invalid_argument("Subspace: ambient mismatch");
        CMatrix m = a.basis_;
        for (size_t i = 0; i < b.rank(); ++i) m.append_row(b.basis_.row(i));
        return Subspace(a.dim_, m);
    }

    /// a cap b via the kernel of [A^T | -B^T].
    friend Subspace intersect(const Subspace& a, const Subspace& b) {
        if (a.dim_ != b.dim_) throw std::invalid_argument("Subspace: ambient dimension mismatch");
        size_t ra = a.rank(), rb = b.rank();
        if (ra == 0 || rb == 0) return Subspace(a.dim_);
        CMatrix sys(a.dim_, ra + rb);
        for (size_t j = 0; j < a.dim_; ++j) {
            for (size_t i = 0; i < ra; ++i) sys(j, i) = a.basis_(i, j);
            for (size_t i = 0; i < rb; ++i) sys(j, ra + i) = -b.basis_(i, j);
        }
        CMatrix ker = sys.kernel();
        CMatrix span(0, a.dim_);
        for (size_t k = 0; k < ker.rows(); ++k) {
            std::vector<CScalar> v(a.dim_, CScalar(Scalar(0)));
            for (size_t i = 0; i < ra; ++i)
                for (size_t j = 0; j < a.dim_; ++j) v[j] += ker(k, i) * a.basis_(i, j);
            span.append_row(v);
        }
        return Subspace(a.dim_, span);
    }

private:
    size_t dim_;
    CMatrix basis_;
};

/// Kernel of (m - lambda Id) with canonical echelon basis; the whole space
/// when lambda is an eigenvalue of a scalar matrix, empty when it is not an
/// eigenvalue at all.
inline Subspace eigenspace(const CMatrix& m, const CScalar& lambda) {
    if (m.rows() != m.cols()) throw std::invalid_argument("eigenspace: non-square matrix");
    CMatrix shifted = m;
    for (size_t i = 0; i < m.rows(); ++i) shifted(i, i) -= lambda;
    return Subspace(m.rows(), shifted.kernel());
}

inline Subspace span_of_rows(const RMatrix& rows) { return Subspace(rows.cols(), complexify(rows)); }

}  // namespace bnck
