#pragma once

// Finitely generated modules over the local ring O_x of a place x of P^1,
// sitting inside K^n with K = Q(t). Every routine pivots on an entry of
// least valuation, so all multipliers it uses stay inside O_x.

#include "azumaya/exact/matrix.hpp"
#include "azumaya/exact/place.hpp"

#include <climits>
#include <optional>
#include <vector>

namespace azumaya {

using KVec = Vec<RatFunc>;

inline int vec_valuation(const KVec& v, const Place& p) {
    int m = INT_MAX;
    for (const auto& x : v)
        if (!x.is_zero()) m = std::min(m, valuation_at(x, p));
    return m;
}

inline bool vec_integral(const KVec& v, const Place& p) { return vec_valuation(v, p) >= 0; }

namespace detail {

struct Pivot {
    std::size_t vec, coord;
    int val;
};

inline std::optional<Pivot> least_valuation(const std::vector<KVec>& pool, const std::vector<bool>& used_coord,
                                            const Place& p) {
    std::optional<Pivot> best;
    for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t c = 0; c < pool[i].size(); ++c) {
            if (used_coord[c] || pool[i][c].is_zero()) continue;
            int v = valuation_at(pool[i][c], p);
            if (!best || v < best->val) best = Pivot{i, c, v};
        }
    return best;
}

}  // namespace detail

/// A basis of the O_x-module generated by `gens`.
inline std::vector<KVec> local_span(std::vector<KVec> gens, const Place& p) {
    std::vector<KVec> basis;
    if (gens.empty()) return basis;
    std::vector<bool> used(gens.front().size(), false);
    for (;;) {
        auto piv = detail::least_valuation(gens, used, p);
        if (!piv) break;
        KVec v = gens[piv->vec];
        gens.erase(gens.begin() + static_cast<std::ptrdiff_t>(piv->vec));
        for (auto& w : gens) {
            if (w[piv->coord].is_zero()) continue;
            RatFunc f = w[piv->coord] / v[piv->coord];
            for (std::size_t c = 0; c < w.size(); ++c)
                if (!v[c].is_zero()) w[c] -= f * v[c];
        }
        used[piv->coord] = true;
        basis.push_back(std::move(v));
    }
    return basis;
}

/// A basis of V intersected with O_x^n, for V the K-span of `gens`.
inline std::vector<KVec> saturate(std::vector<KVec> gens, const Place& p) {
    std::vector<KVec> out;
    std::vector<std::size_t> pivots;
    if (gens.empty()) return out;
    std::vector<bool> used(gens.front().size(), false);
    for (;;) {
        auto piv = detail::least_valuation(gens, used, p);
        if (!piv) break;
        KVec v = gens[piv->vec];
        gens.erase(gens.begin() + static_cast<std::ptrdiff_t>(piv->vec));
        RatFunc inv = v[piv->coord].inverse();
        for (auto& x : v) x *= inv;
        for (auto& w : gens) {
            if (w[piv->coord].is_zero()) continue;
            RatFunc f = w[piv->coord];
            for (std::size_t c = 0; c < w.size(); ++c)
                if (!v[c].is_zero()) w[c] -= f * v[c];
        }
        used[piv->coord] = true;
        out.push_back(std::move(v));
        pivots.push_back(piv->coord);
    }
    for (std::size_t j = out.size(); j-- > 0;)
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (i == j || out[i][pivots[j]].is_zero()) continue;
            RatFunc f = out[i][pivots[j]];
            for (std::size_t c = 0; c < out[i].size(); ++c)
                if (!out[j][c].is_zero()) out[i][c] -= f * out[j][c];
        }
    return out;
}

/// Whether v lies in the O_x-module with the given K-independent basis.
inline bool lattice_contains(const std::vector<KVec>& basis, const KVec& v, const Place& p) {
    if (basis.empty()) {
        for (const auto& x : v)
            if (!x.is_zero()) return false;
        return true;
    }
    SpanBuilder<RatFunc> span(basis.front().size());
    for (const auto& b : basis) span.add(b);
    auto c = span.coordinates(v);
    return c && vec_integral(*c, p);
}

/// Intersection of two O_x-modules given by bases.
inline std::vector<KVec> local_intersection(const std::vector<KVec>& a, const std::vector<KVec>& b,
                                            const Place& p) {
    if (a.empty() || b.empty()) return {};
    std::size_t n = a.front().size();
    std::size_t na = a.size(), nb = b.size();
    Matrix<RatFunc> m(n, na + nb);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < na; ++j) m(i, j) = a[j][i];
        for (std::size_t j = 0; j < nb; ++j) m(i, na + j) = -b[j][i];
    }
    std::vector<KVec> coeffs = saturate(kernel(m), p);
    std::vector<KVec> gens;
    for (const auto& c : coeffs) {
        KVec x(n, RatFunc(0));
        for (std::size_t j = 0; j < na; ++j)
            if (!c[j].is_zero())
                for (std::size_t i = 0; i < n; ++i) x[i] += c[j] * a[j][i];
        gens.push_back(std::move(x));
    }
    return local_span(std::move(gens), p);
}

}  // namespace azumaya
