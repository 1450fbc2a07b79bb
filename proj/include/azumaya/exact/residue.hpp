#pragma once

// Residue fields Q[t]/(p) of irreducible places. An element built from an
// integer carries no modulus and adopts its partner's modulus on first
// contact, which lets field-generic code write F(0) and F(1).

#include "azumaya/exact/place.hpp"

#include <memory>
#include <stdexcept>
#include <string>

namespace azumaya {

/// Thrown when an inverse is requested modulo a polynomial that turns out
/// to be reducible; `factor` is a proper factor of the modulus.
struct ZeroDivisorFound : std::runtime_error {
    explicit ZeroDivisorFound(QPoly f) : std::runtime_error("modulus is reducible"), factor(std::move(f)) {}
    QPoly factor;
};

class Residue {
public:
    Residue() = default;
    Residue(int c) : v_(Rat(c)) {}  // NOLINT
    Residue(const Rat& c) : v_(c) {}  // NOLINT
    Residue(QPoly v, std::shared_ptr<const QPoly> mod) : mod_(std::move(mod)) { v_ = reduce(std::move(v)); }

    const QPoly& value() const { return v_; }
    const std::shared_ptr<const QPoly>& modulus() const { return mod_; }
    bool is_zero() const { return v_.is_zero(); }

    Residue operator-() const { return Residue(-v_, mod_, Raw{}); }
    Residue& operator+=(const Residue& o) { return *this = *this + o; }
    Residue& operator-=(const Residue& o) { return *this = *this - o; }
    Residue& operator*=(const Residue& o) { return *this = *this * o; }
    Residue& operator/=(const Residue& o) { return *this = *this / o; }

    friend Residue operator+(const Residue& a, const Residue& b) { return Residue(a.v_ + b.v_, common(a, b), Raw{}); }
    friend Residue operator-(const Residue& a, const Residue& b) { return Residue(a.v_ - b.v_, common(a, b), Raw{}); }
    friend Residue operator*(const Residue& a, const Residue& b) { return Residue(a.v_ * b.v_, common(a, b)); }
    friend Residue operator/(const Residue& a, const Residue& b) { return a * b.inverse(common(a, b)); }
    friend bool operator==(const Residue& a, const Residue& b) { return a.v_ == b.v_; }

    Residue inverse() const { return inverse(mod_); }

private:
    struct Raw {};
    Residue(QPoly v, std::shared_ptr<const QPoly> mod, Raw) : v_(std::move(v)), mod_(std::move(mod)) {}

    static std::shared_ptr<const QPoly> common(const Residue& a, const Residue& b) { return a.mod_ ? a.mod_ : b.mod_; }
    QPoly reduce(QPoly v) const { return mod_ ? v % *mod_ : v; }

    Residue inverse(const std::shared_ptr<const QPoly>& mod) const {
        if (v_.is_zero()) throw std::domain_error("division by zero");
        if (!mod || v_.degree() == 0) return Residue(QPoly(v_.coeff(0).inverse()), mod, Raw{});
        auto [g, s, u] = ext_gcd(v_, *mod);
        if (g.degree() > 0) throw ZeroDivisorFound(g);
        return Residue(s, mod);
    }

    QPoly v_;
    std::shared_ptr<const QPoly> mod_;
};

inline bool is_zero(const Residue& r) { return r.is_zero(); }
inline std::string to_string(const Residue& r) { return r.value().str("t"); }

/// Image of f in the residue field of p; requires f regular at p.
inline Residue residue_of(const RatFunc& f, const std::shared_ptr<const QPoly>& mod) {
    Residue n(f.num(), mod), d(f.den(), mod);
    return n / d;
}

}  // namespace azumaya
