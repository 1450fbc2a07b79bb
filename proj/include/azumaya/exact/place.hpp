#pragma once

// Closed points of P^1 over Q and the discrete valuations they define.

#include "azumaya/exact/ratfunc.hpp"
#include "azumaya/exact/roots.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace azumaya {

class Place {
public:
    enum class Kind { finite, infinity, irreducible };

    static Place finite(const Rat& a) { return Place(Kind::finite, a, QPoly()); }
    static Place infinity() { return Place(Kind::infinity, Rat(0), QPoly()); }
    /// A degree >= 2 place given by a monic irreducible polynomial. Degrees
    /// above 3 are accepted without certification; see `certified()`.
    static Place irreducible(const QPoly& p) {
        if (p.degree() < 2) throw std::invalid_argument("irreducible place needs degree >= 2");
        QPoly m = p.monic();
        auto verdict = azumaya::irreducibility(m);
        if (verdict == Irreducibility::reducible)
            throw std::invalid_argument("place polynomial " + m.str("t") + " is reducible over Q");
        Place out(Kind::irreducible, Rat(0), m);
        out.certified_ = verdict == Irreducibility::certified;
        return out;
    }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::finite; }
    bool is_infinity() const { return kind_ == Kind::infinity; }
    bool is_rational() const { return kind_ != Kind::irreducible; }
    const Rat& coordinate() const { return coord_; }
    const QPoly& polynomial() const { return poly_; }
    bool certified() const { return certified_; }
    int degree() const { return kind_ == Kind::irreducible ? poly_.degree() : 1; }

    friend bool operator==(const Place& a, const Place& b) {
        return a.kind_ == b.kind_ && a.coord_ == b.coord_ && a.poly_ == b.poly_;
    }
    /// Finite places by coordinate, then infinity, then irreducible ones.
    friend bool operator<(const Place& a, const Place& b) {
        if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
        if (a.kind_ == Kind::finite) return a.coord_ < b.coord_;
        if (a.kind_ == Kind::irreducible) return a.poly_.str("t") < b.poly_.str("t");
        return false;
    }

    std::string str() const {
        switch (kind_) {
            case Kind::finite: return "t=" + coord_.str();
            case Kind::infinity: return "inf";
            default: return poly_.str("t");
        }
    }

private:
    Place(Kind k, Rat c, QPoly p) : kind_(k), coord_(std::move(c)), poly_(std::move(p)) {}
    Kind kind_;
    Rat coord_;
    QPoly poly_;
    bool certified_ = true;
};

/// Order of vanishing of a nonzero polynomial at a finite or irreducible place.
inline int poly_valuation(QPoly f, const Place& p) {
    if (f.is_zero()) throw std::domain_error("valuation of zero");
    if (p.is_infinity()) return -f.degree();
    QPoly u = p.is_finite() ? QPoly::linear(p.coordinate()) : p.polynomial();
    int v = 0;
    for (;;) {
        auto [q, r] = f.divmod(u);
        if (!r.is_zero()) return v;
        f = std::move(q);
        ++v;
    }
}

inline int valuation_at(const RatFunc& f, const Place& p) {
    if (f.is_zero()) throw std::domain_error("valuation of zero");
    if (p.is_infinity()) return f.den().degree() - f.num().degree();
    return poly_valuation(f.num(), p) - poly_valuation(f.den(), p);
}

inline bool regular_at(const RatFunc& f, const Place& p) { return f.is_zero() || valuation_at(f, p) >= 0; }

/// Value at a rational place; requires regularity there.
inline Rat value_at(const RatFunc& f, const Place& p) {
    if (p.kind() == Place::Kind::irreducible)
        throw std::invalid_argument("value at non-rational place");
    if (f.is_zero()) return Rat(0);
    if (p.is_finite()) return f(p.coordinate());
    int dn = f.num().degree(), dd = f.den().degree();
    if (dn > dd) throw std::domain_error("pole at evaluation point");
    if (dn < dd) return Rat(0);
    return f.num().lc() / f.den().lc();
}

/// f expressed in the coordinate of an infinity chart: f(1/u).
inline RatFunc invert_variable(const RatFunc& f) {
    auto rev = [](const QPoly& p, int deg) {
        std::vector<Rat> c(static_cast<std::size_t>(deg + 1), Rat(0));
        for (int i = 0; i <= p.degree(); ++i) c[static_cast<std::size_t>(deg - i)] = p.coeff(static_cast<std::size_t>(i));
        return QPoly(std::move(c));
    };
    if (f.is_zero()) return f;
    int d = std::max(f.num().degree(), f.den().degree());
    return RatFunc(rev(f.num(), d), rev(f.den(), d));
}

}  // namespace azumaya
