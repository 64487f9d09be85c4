#pragma once

#include <cassert>
#include <initializer_list>
#include <optional>
#include <vector>

#include "qk/common.hpp"
#include "qk/field.hpp"

/*
 * Dense exact matrices over a field object F (GF or QQ).  Instances are
 * small (path-space dimensions), so everything is straightforward dense
 * arithmetic; all results are exact and deterministic.
 *
 * Maps act on column vectors: a matrix representing f: V -> W has
 * dim(W) rows and dim(V) columns, and composition is matrix product.
 */
namespace qk {

template <class F>
class Matrix {
public:
    using E = typename F::elem;

    Matrix() : r_(0), c_(0) {}
    Matrix(F f, int rows, int cols)
        : f_(f), r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols, f.zero()) {
        assert(rows >= 0 && cols >= 0);
    }
    Matrix(F f, int rows, int cols, std::initializer_list<std::int64_t> ints) : Matrix(f, rows, cols) {
        assert(static_cast<int>(ints.size()) == rows * cols);
        auto it = ints.begin();
        for (auto& x : a_) x = f_.from_int(*it++);
    }

    static Matrix identity(F f, int n) {
        Matrix m(f, n, n);
        for (int i = 0; i < n; ++i) m(i, i) = f.one();
        return m;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }
    const F& field() const { return f_; }

    E& operator()(int i, int j) {
        assert(0 <= i && i < r_ && 0 <= j && j < c_);
        return a_[static_cast<size_t>(i) * c_ + j];
    }
    const E& operator()(int i, int j) const {
        assert(0 <= i && i < r_ && 0 <= j && j < c_);
        return a_[static_cast<size_t>(i) * c_ + j];
    }

    bool operator==(const Matrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!f_.is_zero(x)) return false;
        return true;
    }

    Matrix transpose() const {
        Matrix t(f_, c_, r_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix operator*(const Matrix& o) const {
        if (c_ != o.r_)
            throw DimensionMismatch("matrix product " + shape() + " * " + o.shape());
        Matrix p(f_, r_, o.c_);
        for (int i = 0; i < r_; ++i)
            for (int k = 0; k < c_; ++k) {
                const E& aik = (*this)(i, k);
                if (f_.is_zero(aik)) continue;
                for (int j = 0; j < o.c_; ++j)
                    p(i, j) = f_.add(p(i, j), f_.mul(aik, o(k, j)));
            }
        return p;
    }

    Matrix operator+(const Matrix& o) const {
        if (r_ != o.r_ || c_ != o.c_)
            throw DimensionMismatch("matrix sum " + shape() + " + " + o.shape());
        Matrix s = *this;
        for (size_t t = 0; t < a_.size(); ++t) s.a_[t] = f_.add(a_[t], o.a_[t]);
        return s;
    }

    Matrix operator-(const Matrix& o) const {
        if (r_ != o.r_ || c_ != o.c_)
            throw DimensionMismatch("matrix difference " + shape() + " - " + o.shape());
        Matrix s = *this;
        for (size_t t = 0; t < a_.size(); ++t) s.a_[t] = f_.sub(a_[t], o.a_[t]);
        return s;
    }

    Matrix negate() const {
        Matrix s = *this;
        for (auto& x : s.a_) x = f_.neg(x);
        return s;
    }

    Matrix scale(const E& c) const {
        Matrix s = *this;
        for (auto& x : s.a_) x = f_.mul(c, x);
        return s;
    }

    Matrix block(int i0, int j0, int rows, int cols) const {
        assert(i0 + rows <= r_ && j0 + cols <= c_);
        Matrix b(f_, rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
        return b;
    }

    void set_block(int i0, int j0, const Matrix& b) {
        assert(i0 + b.r_ <= r_ && j0 + b.c_ <= c_);
        for (int i = 0; i < b.r_; ++i)
            for (int j = 0; j < b.c_; ++j) (*this)(i0 + i, j0 + j) = b(i, j);
    }

    std::vector<E> row(int i) const {
        std::vector<E> v(c_);
        for (int j = 0; j < c_; ++j) v[j] = (*this)(i, j);
        return v;
    }

    std::vector<E> col(int j) const {
        std::vector<E> v(r_);
        for (int i = 0; i < r_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    /* y = this * x */
    std::vector<E> apply(const std::vector<E>& x) const {
        if (static_cast<int>(x.size()) != c_)
            throw DimensionMismatch("matrix apply " + shape() + " to vector of length " +
                                    std::to_string(x.size()));
        std::vector<E> y(r_, f_.zero());
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j)
                if (!f_.is_zero((*this)(i, j))) y[i] = f_.add(y[i], f_.mul((*this)(i, j), x[j]));
        return y;
    }

    std::string shape() const { return std::to_string(r_) + "x" + std::to_string(c_); }

private:
    F f_;
    int r_, c_;
    std::vector<E> a_;
};

template <class F>
Matrix<F> hstack(const Matrix<F>& a, const Matrix<F>& b) {
    if (a.rows() != b.rows()) throw DimensionMismatch("hstack " + a.shape() + " | " + b.shape());
    Matrix<F> m(a.field(), a.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(0, a.cols(), b);
    return m;
}

template <class F>
Matrix<F> vstack(const Matrix<F>& a, const Matrix<F>& b) {
    if (a.cols() != b.cols()) throw DimensionMismatch("vstack " + a.shape() + " / " + b.shape());
    Matrix<F> m(a.field(), a.rows() + b.rows(), a.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), 0, b);
    return m;
}

/* Kronecker product in p-major order: (A (x) B)(i*Br+k, j*Bc+l) = A(i,j)*B(k,l). */
template <class F>
Matrix<F> kron(const Matrix<F>& a, const Matrix<F>& b) {
    const F& f = a.field();
    Matrix<F> m(f, a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            if (f.is_zero(a(i, j))) continue;
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    m(i * b.rows() + k, j * b.cols() + l) = f.mul(a(i, j), b(k, l));
        }
    return m;
}

template <class F>
struct RrefResult {
    Matrix<F> mat;           // unique RREF, same shape as input (zero rows kept)
    std::vector<int> pivots; // pivot column of row r, strictly increasing
    int rank = 0;
};

/* Gauss-Jordan to the unique reduced row-echelon form. */
template <class F>
RrefResult<F> rref(Matrix<F> m) {
    const F& f = m.field();
    RrefResult<F> res;
    int r = 0;
    for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
        int piv = -1;
        for (int i = r; i < m.rows(); ++i)
            if (!f.is_zero(m(i, c))) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
        const auto s = f.inv(m(r, c));
        for (int j = c; j < m.cols(); ++j) m(r, j) = f.mul(s, m(r, j));
        for (int i = 0; i < m.rows(); ++i) {
            if (i == r || f.is_zero(m(i, c))) continue;
            const auto t = m(i, c);
            for (int j = c; j < m.cols(); ++j) m(i, j) = f.sub(m(i, j), f.mul(t, m(r, j)));
        }
        res.pivots.push_back(c);
        ++r;
    }
    res.rank = r;
    res.mat = std::move(m);
    return res;
}

template <class F>
int rank(const Matrix<F>& m) {
    return rref(m).rank;
}

/* Rows spanning {x : m x = 0}, returned in canonical (RREF) form. */
template <class F>
Matrix<F> kernel_rows(const Matrix<F>& m) {
    const F& f = m.field();
    auto rr = rref(m);
    std::vector<int> free_cols;
    {
        size_t pi = 0;
        for (int c = 0; c < m.cols(); ++c) {
            if (pi < rr.pivots.size() && rr.pivots[pi] == c) { ++pi; continue; }
            free_cols.push_back(c);
        }
    }
    Matrix<F> k(f, static_cast<int>(free_cols.size()), m.cols());
    for (size_t t = 0; t < free_cols.size(); ++t) {
        const int c = free_cols[t];
        k(static_cast<int>(t), c) = f.one();
        for (int r = 0; r < rr.rank; ++r)
            k(static_cast<int>(t), rr.pivots[r]) = f.neg(rr.mat(r, c));
    }
    return rref(std::move(k)).mat.block(0, 0, static_cast<int>(free_cols.size()), m.cols());
}

/* One solution of A x = b, if any. */
template <class F>
std::optional<std::vector<typename F::elem>> solve(const Matrix<F>& a,
                                                   const std::vector<typename F::elem>& b) {
    const F& f = a.field();
    if (static_cast<int>(b.size()) != a.rows())
        throw DimensionMismatch("solve: rhs length " + std::to_string(b.size()) + " vs " + a.shape());
    Matrix<F> rhs(f, a.rows(), 1);
    for (int i = 0; i < a.rows(); ++i) rhs(i, 0) = b[i];
    auto rr = rref(hstack(a, rhs));
    std::vector<typename F::elem> x(a.cols(), f.zero());
    for (int r = 0; r < rr.rank; ++r) {
        if (rr.pivots[r] == a.cols()) return std::nullopt; // pivot in the rhs column
        x[rr.pivots[r]] = rr.mat(r, a.cols());
    }
    return x;
}

/* All columns at once: X with A X = B, if solvable. */
template <class F>
std::optional<Matrix<F>> solve_matrix(const Matrix<F>& a, const Matrix<F>& b) {
    const F& f = a.field();
    if (a.rows() != b.rows())
        throw DimensionMismatch("solve_matrix " + a.shape() + " vs rhs " + b.shape());
    auto rr = rref(hstack(a, b));
    Matrix<F> x(f, a.cols(), b.cols());
    for (int r = 0; r < rr.rank; ++r) {
        if (rr.pivots[r] >= a.cols()) return std::nullopt;
        for (int j = 0; j < b.cols(); ++j) x(rr.pivots[r], j) = rr.mat(r, a.cols() + j);
    }
    return x;
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& a) {
    if (a.rows() != a.cols()) return std::nullopt;
    auto x = solve_matrix(a, Matrix<F>::identity(a.field(), a.rows()));
    if (!x) return std::nullopt;
    if (!((a * *x) == Matrix<F>::identity(a.field(), a.rows()))) return std::nullopt;
    return x;
}

} // namespace qk
