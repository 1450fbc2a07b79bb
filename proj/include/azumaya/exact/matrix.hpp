#pragma once

// Dense row-major matrices over a field, with the exact linear algebra the
// rest of the library is built on (echelon forms, kernels, spans).

#include "azumaya/exact/rat.hpp"

#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace azumaya {

template <class F>
class Matrix {
public:
    using value_type = F;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, F(0)) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<F> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (a_.size() != rows_ * cols_)
            throw std::invalid_argument("entries: expected " + std::to_string(rows_ * cols_) +
                                        ", found " + std::to_string(a_.size()));
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
        return m;
    }
    static Matrix scalar(std::size_t n, const F& c) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = c;
        return m;
    }
    static Matrix diagonal(const std::vector<F>& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    F& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const F& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    const std::vector<F>& entries() const { return a_; }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!field_is_zero(x)) return false;
        return true;
    }
    bool is_scalar() const {
        if (!is_square()) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                if (i != j && !field_is_zero((*this)(i, j))) return false;
                if (i == j && !((*this)(i, i) == (*this)(0, 0))) return false;
            }
        return true;
    }

    Matrix operator-() const {
        Matrix r = *this;
        for (auto& x : r.a_) x = -x;
        return r;
    }
    Matrix& operator+=(const Matrix& o) {
        check_same(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
        if constexpr (requires { F::template matrix_product<Matrix>(a, b); }) return F::template matrix_product<Matrix>(a, b);
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t l = 0; l < a.cols_; ++l) {
                const F& x = a(i, l);
                if (field_is_zero(x)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += x * b(l, j);
            }
        return r;
    }
    Matrix scaled(const F& s) const {
        Matrix r = *this;
        for (auto& x : r.a_) x *= s;
        return r;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    Matrix pow(unsigned e) const {
        Matrix r = identity(rows_), b = *this;
        while (e) {
            if (e & 1u) r = r * b;
            e >>= 1u;
            if (e) b = b * b;
        }
        return r;
    }

    F trace() const {
        F s(0);
        for (std::size_t i = 0; i < rows_ && i < cols_; ++i) s += (*this)(i, i);
        return s;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    /// Entry-wise map into another field.
    template <class G, class Fn>
    Matrix<G> map(Fn&& fn) const {
        std::vector<G> v;
        v.reserve(a_.size());
        for (const auto& x : a_) v.push_back(fn(x));
        return Matrix<G>(rows_, cols_, std::move(v));
    }

    std::string str() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            os << (i ? ", [" : "[");
            for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << field_str((*this)(i, j));
            os << "]";
        }
        os << "]";
        return os.str();
    }

private:
    void check_same(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<F> a_;
};

template <class F>
using Vec = std::vector<F>;

/// Reduced row echelon form in place; returns pivot columns.
template <class F>
std::vector<std::size_t> rref(Matrix<F>& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && field_is_zero(m(p, col))) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
        F inv = F(1) / m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || field_is_zero(m(i, col))) continue;
            F f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class F>
std::size_t rank(Matrix<F> m) { return rref(m).size(); }

/// Basis of the right kernel {x : m x = 0}.
template <class F>
std::vector<Vec<F>> kernel(Matrix<F> m) {
    auto piv = rref(m);
    std::vector<bool> is_piv(m.cols(), false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<Vec<F>> out;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_piv[free]) continue;
        Vec<F> v(m.cols(), F(0));
        v[free] = F(1);
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(r, free);
        out.push_back(std::move(v));
    }
    return out;
}

template <class F>
F determinant(Matrix<F> m) {
    if (!m.is_square()) throw std::invalid_argument("determinant of non-square matrix");
    std::size_t n = m.rows();
    F det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && field_is_zero(m(p, c))) ++p;
        if (p == n) return F(0);
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        F inv = F(1) / m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (field_is_zero(m(i, c))) continue;
            F f = m(i, c) * inv;
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& m) {
    if (!m.is_square()) throw std::invalid_argument("inverse of non-square matrix");
    std::size_t n = m.rows();
    Matrix<F> aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = F(1);
    }
    auto piv = rref(aug);
    if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
    Matrix<F> r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r(i, j) = aug(i, n + j);
    return r;
}

template <class F>
Vec<F> mat_vec(const Matrix<F>& m, const Vec<F>& v) {
    Vec<F> r(m.rows(), F(0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!field_is_zero(v[j])) r[i] += m(i, j) * v[j];
    return r;
}

template <class F>
Vec<F> flatten(const Matrix<F>& m) { return m.entries(); }

/// Incrementally maintained echelon basis of a subspace of F^n. Used for
/// span-membership tests and for expressing vectors in a chosen basis.
template <class F>
class SpanBuilder {
public:
    explicit SpanBuilder(std::size_t dim) : dim_(dim) {}

    std::size_t size() const { return rows_.size(); }
    std::size_t ambient() const { return dim_; }

    /// Adds v if independent of the current span; returns true if added.
    bool add(const Vec<F>& v) {
        Vec<F> w = v;
        Vec<F> combo(rows_.size() + 1, F(0));
        reduce(w, combo);
        std::size_t p = 0;
        while (p < dim_ && field_is_zero(w[p])) ++p;
        if (p == dim_) return false;
        F inv = F(1) / w[p];
        for (auto& x : w) x *= inv;
        for (auto& x : combo) x *= inv;
        combo.back() = inv;
        // combo expresses the new echelon row in terms of original inputs
        std::size_t idx = rows_.size();
        for (auto& c : coords_) c.push_back(F(0));
        Vec<F> row_coords(idx + 1, F(0));
        for (std::size_t i = 0; i < idx; ++i) {
            if (field_is_zero(combo[i])) continue;
            for (std::size_t j = 0; j <= i; ++j) row_coords[j] -= combo[i] * coords_[i][j];
        }
        row_coords[idx] = inv;
        rows_.push_back(std::move(w));
        pivots_.push_back(p);
        coords_.push_back(std::move(row_coords));
        return true;
    }

    bool contains(const Vec<F>& v) const {
        Vec<F> w = v;
        Vec<F> combo(rows_.size() + 1, F(0));
        reduce(w, combo);
        for (const auto& x : w)
            if (!field_is_zero(x)) return false;
        return true;
    }

    /// Coefficients of v with respect to the accepted input vectors (in
    /// insertion order), or nullopt if v is outside the span.
    std::optional<Vec<F>> coordinates(const Vec<F>& v) const {
        Vec<F> w = v;
        Vec<F> combo(rows_.size() + 1, F(0));
        reduce(w, combo);
        for (const auto& x : w)
            if (!field_is_zero(x)) return std::nullopt;
        Vec<F> out(rows_.size(), F(0));
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (field_is_zero(combo[i])) continue;
            for (std::size_t j = 0; j <= i; ++j) out[j] += combo[i] * coords_[i][j];
        }
        return out;
    }

private:
    // Reduces w against the echelon rows; combo[i] receives the multiple of
    // row i that was subtracted.
    void reduce(Vec<F>& w, Vec<F>& combo) const {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            std::size_t p = pivots_[i];
            if (field_is_zero(w[p])) continue;
            F f = w[p];
            for (std::size_t j = p; j < dim_; ++j)
                if (!field_is_zero(rows_[i][j])) w[j] -= f * rows_[i][j];
            combo[i] = f;
        }
    }

    std::size_t dim_;
    std::vector<Vec<F>> rows_;
    std::vector<std::size_t> pivots_;
    // coords_[i][j]: echelon row i = sum_j coords_[i][j] * input_j
    std::vector<Vec<F>> coords_;
};

}  // namespace azumaya
