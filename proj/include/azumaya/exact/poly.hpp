#pragma once

// Dense univariate polynomials over a commutative ring F (a field for the
// Euclidean operations). Coefficients are stored lowest degree first; the
// zero polynomial is the empty sequence.

#include "azumaya/exact/rat.hpp"

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace azumaya {

template <class F>
class Poly {
public:
    using coeff_type = F;

    Poly() = default;
    explicit Poly(int c) : Poly(F(c)) {}
    explicit Poly(F c) {
        if (!field_is_zero(c)) c_.push_back(std::move(c));
    }
    explicit Poly(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }

    /// The monomial c * x^e.
    static Poly monomial(F c, std::size_t e) {
        if (field_is_zero(c)) return Poly();
        std::vector<F> v(e + 1, F(0));
        v[e] = std::move(c);
        return Poly(std::move(v));
    }
    static Poly x() { return monomial(F(1), 1); }
    /// x - a
    static Poly linear(const F& a) { return Poly(std::vector<F>{-a, F(1)}); }

    bool is_zero() const { return c_.empty(); }
    /// Degree; -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<F>& coeffs() const { return c_; }
    F coeff(std::size_t i) const { return i < c_.size() ? c_[i] : F(0); }
    const F& lc() const {
        if (c_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
        return c_.back();
    }
    bool is_constant() const { return c_.size() <= 1; }

    Poly operator-() const {
        Poly r = *this;
        for (auto& a : r.c_) a = -a;
        return r;
    }
    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), F(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), F(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<F> r(a.c_.size() + b.c_.size() - 1, F(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (field_is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return Poly(std::move(r));
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly scaled(const F& s) const {
        if (field_is_zero(s)) return Poly();
        Poly r = *this;
        for (auto& a : r.c_) a *= s;
        r.trim();
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    /// Horner evaluation at any value type V that F embeds into via `embed`.
    template <class V, class Embed>
    V eval_with(const V& x, const V& zero, Embed&& embed) const {
        V acc = zero;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + embed(c_[i]);
        return acc;
    }
    F operator()(const F& x) const {
        F acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<F> r(c_.size() - 1, F(0));
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * F(static_cast<int>(i));
        return Poly(std::move(r));
    }

    Poly pow(unsigned e) const {
        Poly r(F(1)), b = *this;
        while (e) {
            if (e & 1u) r = r * b;
            e >>= 1u;
            if (e) b = b * b;
        }
        return r;
    }

    /// Euclidean division (F a field). Returns {quotient, remainder}.
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        if (d.is_zero()) throw std::domain_error("division by zero polynomial");
        Poly r = *this;
        if (r.degree() < d.degree()) return {Poly(), r};
        std::vector<F> q(static_cast<std::size_t>(r.degree() - d.degree() + 1), F(0));
        F inv_lc = F(1) / d.lc();
        while (!r.is_zero() && r.degree() >= d.degree()) {
            std::size_t shift = static_cast<std::size_t>(r.degree() - d.degree());
            F f = r.lc() * inv_lc;
            q[shift] = f;
            for (std::size_t i = 0; i < d.c_.size(); ++i) r.c_[i + shift] -= f * d.c_[i];
            r.c_.pop_back();
            r.trim();
        }
        return {Poly(std::move(q)), r};
    }
    friend Poly operator/(const Poly& a, const Poly& b) { return a.divmod(b).first; }
    friend Poly operator%(const Poly& a, const Poly& b) { return a.divmod(b).second; }
    bool divides(const Poly& a) const { return (a % *this).is_zero(); }

    Poly monic() const {
        if (is_zero()) return *this;
        return scaled(F(1) / lc());
    }

    /// Polynomial in x as a string, e.g. "3/2*t^2 - t + 1".
    std::string str(const std::string& var = "x") const {
        if (c_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (field_is_zero(c_[i])) continue;
            std::string cs = term_coeff(c_[i]);
            bool neg = !cs.empty() && cs[0] == '-' && is_simple(cs.substr(1));
            if (neg) cs = cs.substr(1);
            if (!is_simple(cs)) cs = "(" + cs + ")";
            if (first) os << (neg ? "-" : "");
            else os << (neg ? " - " : " + ");
            first = false;
            if (i == 0) {
                os << cs;
                continue;
            }
            if (cs != "1") os << cs << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        return os.str();
    }

private:
    void trim() {
        while (!c_.empty() && field_is_zero(c_.back())) c_.pop_back();
    }
    static std::string term_coeff(const F& a) { return field_str(a); }
    static bool is_simple(const std::string& s) {
        return s.find_first_of(" +*^()") == std::string::npos &&
               s.find('-') == std::string::npos;
    }

    std::vector<F> c_;
};

template <class F>
bool is_zero(const Poly<F>& p) { return p.is_zero(); }
template <class F>
std::string to_string(const Poly<F>& p) { return p.str("x"); }

/// Monic gcd over a field.
template <class F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
    while (!b.is_zero()) {
        Poly<F> r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

namespace detail {

using ZCoeffs = std::vector<mpz_class>;  // lowest degree first, no trailing zeros

inline void ztrim(ZCoeffs& c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

inline ZCoeffs to_primitive_z(const Poly<Rat>& p) {
    mpz_class l = 1;
    for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.raw().get_den_mpz_t());
    ZCoeffs out;
    mpz_class g = 0;
    for (const auto& c : p.coeffs()) {
        out.push_back(c.raw().get_num() * (l / c.raw().get_den()));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out.back().get_mpz_t());
    }
    for (auto& x : out) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return out;
}

inline void zprimitive(ZCoeffs& c) {
    ztrim(c);
    mpz_class g = 0;
    for (const auto& x : c) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g == 1) return;
    }
    if (g > 1)
        for (auto& x : c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

/// Degree of gcd(a, b) mod a prime not dividing either leading coefficient;
/// -1 when the prime is unlucky for these inputs.
inline int gcd_degree_mod(const ZCoeffs& a, const ZCoeffs& b, unsigned long p) {
    using u64 = unsigned long long;
    auto reduce = [p](const ZCoeffs& c) {
        std::vector<u64> out;
        for (const auto& x : c) out.push_back(mpz_fdiv_ui(x.get_mpz_t(), p));
        return out;
    };
    auto x = reduce(a), y = reduce(b);
    if (x.back() == 0 || y.back() == 0) return -1;
    auto trim = [](std::vector<u64>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    };
    auto inv = [p](u64 v) {
        u64 r = 1, e = p - 2;
        for (v %= p; e; e >>= 1, v = v * v % p)
            if (e & 1) r = r * v % p;
        return r;
    };
    if (x.size() < y.size()) std::swap(x, y);
    while (!y.empty()) {
        u64 il = inv(y.back());
        while (x.size() >= y.size()) {
            u64 f = x.back() * il % p;
            std::size_t shift = x.size() - y.size();
            for (std::size_t i = 0; i < y.size(); ++i) x[i + shift] = (x[i + shift] + (p - f) * y[i]) % p;
            x.pop_back();
            trim(x);
        }
        std::swap(x, y);
    }
    return static_cast<int>(x.size()) - 1;
}

}  // namespace detail

/// Monic gcd over Q. Coprime inputs are detected modulo a word-size prime;
/// otherwise a primitive remainder sequence over Z avoids the coefficient
/// growth of Euclid over Q.
inline Poly<Rat> gcd(Poly<Rat> a, Poly<Rat> b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.degree() == 0 || b.degree() == 0) return Poly<Rat>(Rat(1));
    auto x = detail::to_primitive_z(a), y = detail::to_primitive_z(b);
    for (unsigned long p : {2147483647UL, 2147483629UL}) {
        int d = detail::gcd_degree_mod(x, y, p);
        if (d == 0) return Poly<Rat>(Rat(1));
        if (d > 0) break;
    }
    if (x.size() < y.size()) std::swap(x, y);
    while (!y.empty()) {
        std::size_t dy = y.size() - 1;
        mpz_class ly = y.back();
        while (x.size() > dy) {
            mpz_class lead = x.back();
            std::size_t shift = x.size() - 1 - dy;
            for (auto& c : x) c *= ly;
            for (std::size_t j = 0; j <= dy; ++j) x[j + shift] -= lead * y[j];
            detail::ztrim(x);
        }
        detail::zprimitive(x);
        std::swap(x, y);
    }
    std::vector<Rat> c;
    for (const auto& v : x) c.emplace_back(mpq_class(v));
    return Poly<Rat>(std::move(c)).monic();
}

/// Extended gcd: returns {g, s, u} with s*a + u*b = g, g monic.
template <class F>
std::tuple<Poly<F>, Poly<F>, Poly<F>> ext_gcd(const Poly<F>& a, const Poly<F>& b) {
    Poly<F> r0 = a, r1 = b, s0(F(1)), s1, u0, u1(F(1));
    while (!r1.is_zero()) {
        auto [q, r] = r0.divmod(r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        Poly<F> s2 = s0 - q * s1, u2 = u0 - q * u1;
        s0 = std::move(s1); s1 = std::move(s2);
        u0 = std::move(u1); u1 = std::move(u2);
    }
    if (r0.is_zero()) return {r0, s0, u0};
    F inv = F(1) / r0.lc();
    return {r0.scaled(inv), s0.scaled(inv), u0.scaled(inv)};
}

/// Yun's squarefree decomposition (characteristic 0): returns monic s_1, s_2, ...
/// with p = lc * prod s_i^i, the s_i squarefree and pairwise coprime.
/// Entry i-1 holds s_i; trailing trivial factors are dropped.
template <class F>
std::vector<Poly<F>> squarefree_decomposition(const Poly<F>& p) {
    if (p.is_zero()) throw std::domain_error("squarefree decomposition of zero");
    std::vector<Poly<F>> out;
    Poly<F> f = p.monic();
    if (f.degree() <= 0) return out;
    Poly<F> fp = f.derivative();
    Poly<F> a = gcd(f, fp);
    Poly<F> b = f / a;
    Poly<F> c = fp / a;
    Poly<F> d = c - b.derivative();
    while (b.degree() > 0) {
        Poly<F> g = gcd(b, d);
        out.push_back(g);
        b = b / g;
        c = d / g;
        d = c - b.derivative();
    }
    while (!out.empty() && out.back().degree() <= 0) out.pop_back();
    return out;
}

template <class F>
Poly<F> squarefree_part(const Poly<F>& p) {
    Poly<F> r(F(1));
    for (const auto& s : squarefree_decomposition(p)) r = r * s;
    return r;
}

using QPoly = Poly<Rat>;

/// Integer content-free scaling of a rational polynomial (positive leading coefficient).
inline QPoly primitive_part(const QPoly& p) {
    if (p.is_zero()) return p;
    mpz_class l = 1, g = 0;
    for (const auto& c : p.coeffs()) {
        mpz_class d = c.den();
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    }
    for (const auto& c : p.coeffs()) {
        mpz_class n = (c * Rat(l)).num();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    }
    Rat s = Rat(l) / Rat(g);
    if (p.lc().sign() < 0) s = -s;
    return p.scaled(s);
}

}  // namespace azumaya
