#pragma once

// Root extraction over Q: squarefree decomposition, Sturm isolation of real
// roots, and exact recovery of the rational ones.

#include "azumaya/exact/poly.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace azumaya {

struct RationalRoots {
    std::vector<std::pair<Rat, unsigned>> roots;  // ascending
    QPoly residual;                               // monic, no rational roots
};

/// A coprime factor of a polynomial: either a linear factor with a known
/// root, or a rootless squarefree part of one level of the squarefree
/// decomposition ("cluster").
template <class F>
struct CoprimeFactor {
    Poly<F> factor;  // monic
    unsigned multiplicity = 1;
    std::optional<F> root;
};

namespace detail {

inline int sign_at(const QPoly& p, const Rat& x) { return p(x).sign(); }

inline std::vector<QPoly> sturm_chain(const QPoly& p) {
    std::vector<QPoly> chain{p, p.derivative()};
    while (chain.back().degree() > 0) {
        QPoly r = chain[chain.size() - 2] % chain.back();
        if (r.is_zero()) break;
        chain.push_back(-r);
    }
    return chain;
}

inline int sign_changes(const std::vector<QPoly>& chain, const Rat& x) {
    int changes = 0, last = 0;
    for (const auto& q : chain) {
        int s = sign_at(q, x);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

inline Rat cauchy_bound(const QPoly& p) {
    Rat m(0);
    for (int i = 0; i < p.degree(); ++i) {
        Rat v = (p.coeff(static_cast<std::size_t>(i)) / p.lc()).abs();
        if (v > m) m = v;
    }
    return m + Rat(1);
}

/// Fraction of smallest denominator in [a, b], a <= b.
inline Rat simplest_between(Rat a, Rat b) {
    Rat fl = Rat::floor_of(a);
    if (fl == a) return a;
    if (fl + Rat(1) <= b) return fl + Rat(1);
    Rat inner = simplest_between(Rat(1) / (b - fl), Rat(1) / (a - fl));
    return fl + Rat(1) / inner;
}

}  // namespace detail

/// Disjoint intervals (lo, hi], each holding exactly one real root of the
/// squarefree polynomial p.
inline std::vector<std::pair<Rat, Rat>> isolate_real_roots(const QPoly& p) {
    std::vector<std::pair<Rat, Rat>> out;
    if (p.degree() <= 0) return out;
    auto chain = detail::sturm_chain(p);
    Rat b = detail::cauchy_bound(p);
    std::vector<std::pair<Rat, Rat>> work{{-b, b}};
    while (!work.empty()) {
        auto [lo, hi] = work.back();
        work.pop_back();
        int n = detail::sign_changes(chain, lo) - detail::sign_changes(chain, hi);
        if (n == 0) continue;
        if (n == 1) {
            out.emplace_back(lo, hi);
            continue;
        }
        Rat mid = (lo + hi) / Rat(2);
        work.emplace_back(lo, mid);
        work.emplace_back(mid, hi);
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

/// Shrinks an isolating interval (lo, hi] of a simple root until its width
/// is at most `width`.
inline std::pair<Rat, Rat> refine_root(const QPoly& p, Rat lo, Rat hi, const Rat& width) {
    if (p(hi).is_zero()) return {hi, hi};
    int shi = detail::sign_at(p, hi);
    while (hi - lo > width) {
        Rat mid = (lo + hi) / Rat(2);
        int s = detail::sign_at(p, mid);
        if (s == 0) return {mid, mid};
        if (s == shi) hi = mid;
        else lo = mid;
    }
    return {lo, hi};
}

/// Rational roots of a squarefree polynomial, ascending.
inline std::vector<Rat> squarefree_rational_roots(const QPoly& s) {
    std::vector<Rat> roots;
    if (s.degree() <= 0) return roots;
    QPoly z = primitive_part(s);
    // A root p/q of a primitive integer polynomial has q | lc.
    Rat lc = z.lc().abs();
    Rat width = Rat(1) / (Rat(2) * lc * lc);
    for (auto [lo, hi] : isolate_real_roots(z)) {
        auto [a, b] = refine_root(z, lo, hi, width);
        Rat cand = detail::simplest_between(a, b);
        // The interval is open at a, and a neighbouring root can sit exactly there.
        if (cand == a && a != b) continue;
        if (z(cand).is_zero()) roots.push_back(cand);
    }
    return roots;
}

/// All rational roots with multiplicities, plus the rootless monic cofactor.
inline RationalRoots rational_roots(const QPoly& p) {
    if (p.is_zero()) throw std::domain_error("rational roots of zero polynomial");
    RationalRoots out;
    out.residual = QPoly(Rat(1));
    auto levels = squarefree_decomposition(p);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        QPoly rest = levels[i];
        for (const auto& r : squarefree_rational_roots(levels[i])) {
            out.roots.emplace_back(r, static_cast<unsigned>(i + 1));
            rest = rest / QPoly::linear(r);
        }
        out.residual = out.residual * rest.pow(static_cast<unsigned>(i + 1));
    }
    std::sort(out.roots.begin(), out.roots.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

/// Coprime factorization used by the joint eigenspace splitters.
inline std::vector<CoprimeFactor<Rat>> coprime_factors(const QPoly& p) {
    std::vector<CoprimeFactor<Rat>> out;
    auto levels = squarefree_decomposition(p);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        QPoly rest = levels[i];
        auto mult = static_cast<unsigned>(i + 1);
        for (const auto& r : squarefree_rational_roots(levels[i])) {
            out.push_back({QPoly::linear(r), mult, r});
            rest = rest / QPoly::linear(r);
        }
        if (rest.degree() > 0) out.push_back({rest.monic(), mult, std::nullopt});
    }
    return out;
}

enum class Irreducibility { certified, reducible, unverified };

/// Irreducibility over Q, certified only up to degree 3.
inline Irreducibility irreducibility(const QPoly& p) {
    if (p.degree() <= 0) return Irreducibility::reducible;
    if (p.degree() == 1) return Irreducibility::certified;
    if (gcd(p, p.derivative()).degree() > 0) return Irreducibility::reducible;
    if (!squarefree_rational_roots(p).empty()) return Irreducibility::reducible;
    return p.degree() <= 3 ? Irreducibility::certified : Irreducibility::unverified;
}

/// Real roots of p (any multiplicity) as doubles, for plotting.
inline std::vector<double> real_roots_approx(const QPoly& p) {
    std::vector<double> out;
    if (p.degree() <= 0) return out;
    QPoly s = primitive_part(squarefree_part(p));
    Rat w = Rat::parse("1/1000000000");
    for (auto [lo, hi] : isolate_real_roots(s)) {
        auto [a, b] = refine_root(s, lo, hi, w);
        out.push_back(((a + b) / Rat(2)).to_double());
    }
    return out;
}

}  // namespace azumaya
