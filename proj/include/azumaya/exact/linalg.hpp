#pragma once

// Field-generic matrix algebra: characteristic and minimal polynomials,
// generated subalgebras, the trace-form radical, and joint generalized
// eigenspace splitting for commuting tuples.

#include "azumaya/exact/matrix.hpp"
#include "azumaya/exact/poly.hpp"
#include "azumaya/exact/roots.hpp"

#include <stdexcept>
#include <vector>

namespace azumaya {

/// det(lambda*I - M) by Berkowitz's division-free recurrence.
template <class F>
Poly<F> char_poly(const Matrix<F>& m) {
    if (!m.is_square()) throw std::invalid_argument("char_poly of non-square matrix");
    std::size_t n = m.rows();
    if (n == 0) return Poly<F>(F(1));
    // v holds coefficients highest degree first.
    std::vector<F> v{F(1), -m(0, 0)};
    for (std::size_t r = 1; r < n; ++r) {
        // Leading r x r block M, row R = m(r, 0..r-1), column C = m(0..r-1, r).
        std::vector<F> q(r + 2, F(0));
        q[0] = F(1);
        q[1] = -m(r, r);
        std::vector<F> w(r);  // M^k C
        for (std::size_t i = 0; i < r; ++i) w[i] = m(i, r);
        for (std::size_t k = 0; k < r; ++k) {
            F s(0);
            for (std::size_t i = 0; i < r; ++i) s += m(r, i) * w[i];
            q[k + 2] = -s;
            if (k + 1 < r) {
                std::vector<F> nw(r, F(0));
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < r; ++j) nw[i] += m(i, j) * w[j];
                w = std::move(nw);
            }
        }
        // v_new = T v with T the (r+2)x(r+1) lower Toeplitz matrix on q.
        std::vector<F> nv(r + 2, F(0));
        for (std::size_t i = 0; i < r + 2; ++i)
            for (std::size_t j = 0; j <= i && j < v.size(); ++j) nv[i] += q[i - j] * v[j];
        v = std::move(nv);
    }
    std::vector<F> low(v.rbegin(), v.rend());
    return Poly<F>(std::move(low));
}

/// p(M) by Horner's rule.
template <class F>
Matrix<F> poly_at_matrix(const Poly<F>& p, const Matrix<F>& m) {
    Matrix<F> acc(m.rows(), m.cols());
    const auto& c = p.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * m + Matrix<F>::scalar(m.rows(), c[i]);
    return acc;
}

/// Least-degree monic annihilating polynomial.
template <class F>
Poly<F> min_poly(const Matrix<F>& m) {
    if (!m.is_square()) throw std::invalid_argument("min_poly of non-square matrix");
    std::size_t n = m.rows();
    SpanBuilder<F> span(n * n);
    Matrix<F> p = Matrix<F>::identity(n);
    for (std::size_t d = 0;; ++d) {
        auto coords = span.coordinates(flatten(p));
        if (coords) {
            std::vector<F> c(d + 1, F(0));
            for (std::size_t i = 0; i < d; ++i) c[i] = -(*coords)[i];
            c[d] = F(1);
            return Poly<F>(std::move(c));
        }
        span.add(flatten(p));
        p = p * m;
    }
}

template <class F>
bool commute(const Matrix<F>& a, const Matrix<F>& b) { return a * b == b * a; }

/// Field-linear basis of the unital algebra generated by commuting square
/// matrices. The identity comes first; further elements are monomials in
/// the generators, in discovery order.
template <class F>
std::vector<Matrix<F>> algebra_closure(const std::vector<Matrix<F>>& gens, std::size_t n) {
    for (const auto& g : gens)
        if (!g.is_square() || g.rows() != n) throw std::invalid_argument("generator shape mismatch");
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j)
            if (!commute(gens[i], gens[j])) throw std::invalid_argument("generators do not commute");
    std::vector<Matrix<F>> basis{Matrix<F>::identity(n)};
    SpanBuilder<F> span(n * n);
    span.add(flatten(basis[0]));
    for (std::size_t next = 0; next < basis.size() && basis.size() < n * n; ++next) {
        for (const auto& g : gens) {
            Matrix<F> p = g * basis[next];
            if (span.add(flatten(p))) basis.push_back(std::move(p));
            if (basis.size() == n * n) break;
        }
    }
    return basis;
}

template <class F>
std::vector<Matrix<F>> algebra_closure(const std::vector<Matrix<F>>& gens) {
    if (gens.empty()) throw std::invalid_argument("algebra_closure needs at least one generator");
    return algebra_closure(gens, gens.front().rows());
}

/// Nilradical of a commutative matrix algebra given by a basis: the kernel
/// of (x, y) -> trace of multiplication by xy on the algebra itself.
template <class F>
std::vector<Matrix<F>> trace_radical(const std::vector<Matrix<F>>& basis) {
    if (basis.empty()) return {};
    std::size_t n = basis.size();
    std::size_t r = basis.front().rows();
    SpanBuilder<F> span(r * r);
    for (const auto& b : basis)
        if (!span.add(flatten(b))) throw std::invalid_argument("basis elements are linearly dependent");
    // left[i] is the matrix of multiplication by basis[i] on the algebra.
    std::vector<Matrix<F>> left(n, Matrix<F>(n, n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            auto c = span.coordinates(flatten(basis[i] * basis[j]));
            if (!c) throw std::invalid_argument("basis not multiplicatively closed up to span");
            for (std::size_t l = 0; l < n; ++l) left[i](l, j) = (*c)[l];
        }
    Matrix<F> form(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) form(i, j) = (left[i] * left[j]).trace();
    std::vector<Matrix<F>> out;
    for (const auto& v : kernel(form)) {
        Matrix<F> acc(r, r);
        for (std::size_t l = 0; l < n; ++l)
            if (!field_is_zero(v[l])) acc += basis[l].scaled(v[l]);
        out.push_back(std::move(acc));
    }
    return out;
}

/// Matrix of M restricted to the invariant subspace spanned by `basis`.
template <class F>
Matrix<F> restrict_to(const Matrix<F>& m, const std::vector<Vec<F>>& basis) {
    std::size_t d = basis.size();
    SpanBuilder<F> span(m.rows());
    for (const auto& b : basis) span.add(b);
    Matrix<F> r(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        auto c = span.coordinates(mat_vec(m, basis[j]));
        if (!c) throw std::logic_error("subspace is not invariant");
        for (std::size_t i = 0; i < d; ++i) r(i, j) = (*c)[i];
    }
    return r;
}

template <class F>
std::vector<Vec<F>> standard_basis(std::size_t n) {
    std::vector<Vec<F>> out;
    for (std::size_t i = 0; i < n; ++i) {
        Vec<F> v(n, F(0));
        v[i] = F(1);
        out.push_back(std::move(v));
    }
    return out;
}

/// A joint generalized eigenspace of a commuting tuple: one coprime factor
/// of each matrix's characteristic polynomial, and the subspace on which
/// each matrix is primary for its factor.
template <class F>
struct JointPiece {
    std::vector<Vec<F>> basis;
    std::vector<CoprimeFactor<F>> factors;  // one per matrix
};

/// Splits F^n into joint generalized eigenspaces. `factorize` maps a
/// characteristic polynomial to its coprime factors.
template <class F, class Factorize>
std::vector<JointPiece<F>> joint_decompose(const std::vector<Matrix<F>>& mats, std::size_t n,
                                           Factorize&& factorize) {
    std::vector<JointPiece<F>> pieces{{standard_basis<F>(n), {}}};
    for (const auto& m : mats) {
        std::vector<JointPiece<F>> next;
        for (auto& piece : pieces) {
            Matrix<F> r = restrict_to(m, piece.basis);
            for (auto& fac : factorize(char_poly(r))) {
                Matrix<F> q = poly_at_matrix(fac.factor, r).pow(fac.multiplicity);
                JointPiece<F> sub;
                for (const auto& c : kernel(q)) {
                    Vec<F> v(n, F(0));
                    for (std::size_t i = 0; i < c.size(); ++i)
                        if (!field_is_zero(c[i]))
                            for (std::size_t l = 0; l < n; ++l) v[l] += c[i] * piece.basis[i][l];
                    sub.basis.push_back(std::move(v));
                }
                if (sub.basis.empty()) continue;
                sub.factors = piece.factors;
                sub.factors.push_back(std::move(fac));
                next.push_back(std::move(sub));
            }
        }
        pieces = std::move(next);
    }
    return pieces;
}

/// Dimension of the unital algebra generated by the given matrices.
template <class F>
std::size_t generated_dimension(const std::vector<Matrix<F>>& gens, std::size_t n) {
    return algebra_closure(gens, n).size();
}

}  // namespace azumaya
