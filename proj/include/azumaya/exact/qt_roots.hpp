#pragma once

// Roots in Q(t) of polynomials with rational-function coefficients. A root
// is found at a good rational specialization t0, lifted by Newton iteration
// in Q[[t - t0]], recovered by Pade approximation and verified exactly.

#include "azumaya/exact/ratfunc.hpp"
#include "azumaya/exact/roots.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace azumaya {

using QtPoly = Poly<RatFunc>;

/// Coefficients of p scaled into Q[t] with trivial common content, lowest
/// lambda-degree first.
inline std::vector<QPoly> clear_denominators(const QtPoly& p) {
    QPoly l(Rat(1));
    for (const auto& c : p.coeffs()) l = (l / gcd(l, c.den())) * c.den();
    std::vector<QPoly> out;
    QPoly content;
    for (const auto& c : p.coeffs()) {
        out.push_back(c.num() * (l / c.den()));
        content = content.is_zero() ? out.back() : gcd(content, out.back());
    }
    if (!content.is_zero() && content.degree() > 0)
        for (auto& c : out) c = c / content;
    return out;
}

/// p(t0 + x) as a polynomial in x.
inline QPoly taylor_shift(const QPoly& p, const Rat& t0) {
    QPoly base = QPoly::x() + QPoly(t0);
    QPoly acc;
    const auto& c = p.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * base + QPoly(c[i]);
    return acc;
}

inline QtPoly to_qt_poly(const QPoly& p) {
    std::vector<RatFunc> c;
    for (const auto& a : p.coeffs()) c.emplace_back(a);
    return QtPoly(std::move(c));
}

/// Specialization of p at t = a; throws on a pole.
inline QPoly specialize(const QtPoly& p, const Rat& a) {
    std::vector<Rat> c;
    for (const auto& f : p.coeffs()) c.push_back(f(a));
    return QPoly(std::move(c));
}

namespace detail {

using Series = std::vector<Rat>;  // truncated power series, fixed length

inline Series series_mul(const Series& a, const Series& b) {
    std::size_t n = a.size();
    Series out(n, Rat(0));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; i + j < n; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

inline Series series_inv(const Series& a) {
    std::size_t n = a.size();
    Series out(n, Rat(0));
    out[0] = a[0].inverse();
    for (std::size_t i = 1; i < n; ++i) {
        Rat s(0);
        for (std::size_t j = 1; j <= i; ++j) s += a[j] * out[i - j];
        out[i] = -s * out[0];
    }
    return out;
}

inline Series to_series(const QPoly& p, std::size_t n) {
    Series s(n, Rat(0));
    for (std::size_t i = 0; i < n && i < p.coeffs().size(); ++i) s[i] = p.coeffs()[i];
    return s;
}

/// Candidate sequence 0, 1, -1, 2, -2, ...
inline Rat nth_sample(int i) { return Rat((i + 1) / 2 * (i % 2 ? 1 : -1)); }

}  // namespace detail

/// Roots in Q(t) of a polynomial that is squarefree over Q(t).
inline std::vector<RatFunc> qt_rational_roots(const QtPoly& p) {
    std::vector<RatFunc> roots;
    if (p.degree() <= 0) return roots;
    if (p.degree() == 1) {
        roots.push_back(-p.coeff(0) / p.coeff(1));
        return roots;
    }
    auto b = clear_denominators(p);
    int dt = 0;
    for (const auto& c : b) dt = std::max(dt, c.degree());
    const auto n = static_cast<std::size_t>(2 * dt + 2);

    Rat t0;
    QPoly s0;
    for (int i = 0;; ++i) {
        if (i > 4096) throw std::runtime_error("no squarefree specialization found");
        t0 = detail::nth_sample(i);
        if (b.back()(t0).is_zero()) continue;
        std::vector<Rat> c;
        for (const auto& q : b) c.push_back(q(t0));
        s0 = QPoly(std::move(c));
        if (gcd(s0, s0.derivative()).degree() == 0) break;
    }

    std::vector<detail::Series> shifted;
    for (const auto& q : b) shifted.push_back(detail::to_series(taylor_shift(q, t0), n));

    for (const Rat& r0 : squarefree_rational_roots(s0)) {
        detail::Series lam(n, Rat(0));
        lam[0] = r0;
        for (std::size_t prec = 1; prec < n;) {
            prec = std::min(2 * prec, n);
            detail::Series f(n, Rat(0)), fp(n, Rat(0));
            for (std::size_t i = shifted.size(); i-- > 0;) {
                fp = detail::series_mul(fp, lam);
                for (std::size_t j = 0; j < n; ++j) fp[j] += f[j];
                f = detail::series_mul(f, lam);
                for (std::size_t j = 0; j < n; ++j) f[j] += shifted[i][j];
            }
            auto step = detail::series_mul(f, detail::series_inv(fp));
            for (std::size_t j = 0; j < prec; ++j) lam[j] -= step[j];
        }
        // Pade: truncated extended Euclid on (x^n, lam).
        QPoly r_prev = QPoly::monomial(Rat(1), static_cast<unsigned>(n));
        QPoly r_cur(lam);
        QPoly u_prev, u_cur(Rat(1));
        while (!r_cur.is_zero() && r_cur.degree() > dt) {
            auto [q, r] = r_prev.divmod(r_cur);
            QPoly u_next = u_prev - q * u_cur;
            r_prev = std::move(r_cur);
            r_cur = std::move(r);
            u_prev = std::move(u_cur);
            u_cur = std::move(u_next);
        }
        if (u_cur.is_zero() || u_cur.coeff(0).is_zero()) continue;
        RatFunc cand(taylor_shift(r_cur, -t0), taylor_shift(u_cur, -t0));
        RatFunc val;
        for (std::size_t i = p.coeffs().size(); i-- > 0;) val = val * cand + p.coeffs()[i];
        if (val.is_zero()) roots.push_back(cand);
    }
    return roots;
}

/// Coprime factorization over Q(t): linear factors for Q(t)-rational roots
/// and the rootless remainder of each squarefree level.
inline std::vector<CoprimeFactor<RatFunc>> coprime_factors(const QtPoly& p) {
    std::vector<CoprimeFactor<RatFunc>> out;
    auto levels = squarefree_decomposition(p);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        QtPoly rest = levels[i];
        auto mult = static_cast<unsigned>(i + 1);
        for (const auto& r : qt_rational_roots(levels[i])) {
            out.push_back({QtPoly::linear(r), mult, r});
            rest = rest / QtPoly::linear(r);
        }
        if (rest.degree() > 0) out.push_back({rest.monic(), mult, std::nullopt});
    }
    return out;
}

}  // namespace azumaya
