#pragma once

// Rational functions in one variable over Q, kept reduced with a monic
// denominator.

#include "azumaya/exact/poly.hpp"

#include <stdexcept>
#include <string>

namespace azumaya {

class RatFunc {
public:
    RatFunc() : den_(Rat(1)) {}
    RatFunc(int c) : num_(Rat(c)), den_(Rat(1)) {}  // NOLINT
    RatFunc(const Rat& c) : num_(c), den_(Rat(1)) {}  // NOLINT
    explicit RatFunc(QPoly p) : num_(std::move(p)), den_(Rat(1)) {}
    RatFunc(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    static RatFunc var() { return RatFunc(QPoly::x()); }

    const QPoly& num() const { return num_; }
    const QPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
    /// The constant value; requires is_constant().
    Rat constant() const {
        if (!is_constant()) throw std::logic_error("rational function is not constant");
        return num_.coeff(0);
    }

    /// Dense product hook for Matrix<RatFunc>: each factor is cleared to a
    /// polynomial matrix over one common denominator, so only the entries of
    /// the result are reduced.
    template <class M>
    static M matrix_product(const M& a, const M& b) {
        auto clear = [](const M& m, QPoly& l) {
            l = QPoly(Rat(1));
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j) l = (l / gcd(l, m(i, j).den_)) * m(i, j).den_;
            std::vector<QPoly> out;
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j)
                    out.push_back(m(i, j).is_zero() ? QPoly() : m(i, j).num_ * (l / m(i, j).den_));
            return out;
        };
        QPoly la, lb;
        auto pa = clear(a, la), pb = clear(b, lb);
        QPoly den = la * lb;
        std::size_t n = a.rows(), k = a.cols(), m = b.cols();
        M r(n, m);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                QPoly acc;
                for (std::size_t l = 0; l < k; ++l)
                    if (!pa[i * k + l].is_zero() && !pb[l * m + j].is_zero()) acc += pa[i * k + l] * pb[l * m + j];
                if (!acc.is_zero()) r(i, j) = RatFunc(std::move(acc), den);
            }
        return r;
    }

    RatFunc operator-() const { return RatFunc(-num_, den_, Reduced{}); }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
        QPoly g = gcd(a.den_, b.den_);
        if (g.degree() == 0)
            return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_, Reduced{});
        QPoly bd = b.den_ / g;
        return RatFunc(a.num_ * bd + b.num_ * (a.den_ / g), a.den_ * bd);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero() || b.is_zero()) return RatFunc();
        if (a.is_polynomial() && b.is_polynomial()) return RatFunc(a.num_ * b.num_);
        QPoly g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
        return RatFunc((a.num_ / g1) * (b.num_ / g2), (a.den_ / g2) * (b.den_ / g1), Reduced{});
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw std::domain_error("division by zero polynomial");
        return a * RatFunc(b.den_, b.num_);
    }
    RatFunc inverse() const { return RatFunc(1) / *this; }

    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    /// Value at a rational point; throws if the point is a pole.
    Rat operator()(const Rat& x) const {
        Rat d = den_(x);
        if (d.is_zero()) throw std::domain_error("pole at evaluation point");
        return num_(x) / d;
    }

    std::string str(const std::string& var = "t") const {
        if (den_.degree() == 0) return num_.str(var);
        std::string n = num_.str(var), d = den_.str(var);
        auto terms = [](const QPoly& p) {
            std::size_t c = 0;
            for (const auto& x : p.coeffs()) c += x.is_zero() ? 0 : 1;
            return c;
        };
        if (terms(num_) > 1) n = "(" + n + ")";
        if (terms(den_) > 1 || den_.lc() != Rat(1)) d = "(" + d + ")";
        return n + "/" + d;
    }

private:
    struct Reduced {};
    RatFunc(QPoly num, QPoly den, Reduced) : num_(std::move(num)), den_(std::move(den)) {
        fix_monic();
    }
    void normalize() {
        if (den_.is_zero()) throw std::domain_error("division by zero polynomial");
        if (num_.is_zero()) {
            den_ = QPoly(Rat(1));
            return;
        }
        QPoly g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
        fix_monic();
    }
    void fix_monic() {
        if (num_.is_zero()) {
            den_ = QPoly(Rat(1));
            return;
        }
        Rat l = den_.lc();
        if (!l.is_one()) {
            Rat inv = l.inverse();
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    QPoly num_;
    QPoly den_;
};

inline bool is_zero(const RatFunc& f) { return f.is_zero(); }
inline std::string to_string(const RatFunc& f) { return f.str("t"); }

/// Reduced form of num/den with monic denominator.
inline RatFunc ratfunc_normalize(const QPoly& num, const QPoly& den) { return RatFunc(num, den); }

namespace detail {

using QtCoeffs = std::vector<QPoly>;  // lowest lambda-degree first, no trailing zeros

inline void trim(QtCoeffs& c) {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

/// Divides out the content in Q[t] and scales the leading coefficient monic.
inline void make_primitive(QtCoeffs& c) {
    trim(c);
    if (c.empty()) return;
    QPoly g;
    for (const auto& x : c)
        if (!x.is_zero()) g = g.is_zero() ? x : gcd(g, x);
    Rat s = Rat(1) / (c.back() / g).lc();
    for (auto& x : c)
        if (!x.is_zero()) x = (x / g).scaled(s);
}

inline QtCoeffs clear_to_primitive(const Poly<RatFunc>& p) {
    QPoly l(Rat(1));
    for (const auto& c : p.coeffs()) l = (l / gcd(l, c.den())) * c.den();
    QtCoeffs out;
    for (const auto& c : p.coeffs()) out.push_back(c.num() * (l / c.den()));
    make_primitive(out);
    return out;
}

inline QtCoeffs pseudo_remainder(QtCoeffs a, const QtCoeffs& b) {
    std::size_t db = b.size() - 1;
    const QPoly& lb = b.back();
    while (a.size() > db) {
        QPoly lead = a.back();
        std::size_t shift = a.size() - 1 - db;
        for (auto& x : a) x = x * lb;
        for (std::size_t j = 0; j <= db; ++j) a[j + shift] -= lead * b[j];
        trim(a);
    }
    return a;
}

}  // namespace detail

/// Monic gcd in Q(t)[l] by a primitive remainder sequence over Q[t], which
/// keeps coefficient degrees from growing the way field Euclid does.
inline Poly<RatFunc> gcd(Poly<RatFunc> a, Poly<RatFunc> b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    auto x = detail::clear_to_primitive(a), y = detail::clear_to_primitive(b);
    if (x.size() < y.size()) std::swap(x, y);
    while (!y.empty()) {
        auto r = detail::pseudo_remainder(x, y);
        detail::make_primitive(r);
        x = std::move(y);
        y = std::move(r);
    }
    if (x.size() == 1) return Poly<RatFunc>(RatFunc(Rat(1)));
    std::vector<RatFunc> c;
    for (const auto& q : x) c.emplace_back(q);
    return Poly<RatFunc>(std::move(c)).monic();
}

}  // namespace azumaya
