#pragma once

// Arbitrary-precision rationals. Thin value wrapper over GMP's mpq_class so
// that expression templates never leak into generic code.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace azumaya {

class Rat {
public:
    Rat() = default;
    Rat(long v) : q_(v) {}  // NOLINT: implicit from integers is intended
    Rat(int v) : q_(static_cast<long>(v)) {}
    Rat(long num, long den) {
        if (den == 0) throw std::domain_error("division by zero");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }
    explicit Rat(const mpz_class& z) : q_(z) {}
    Rat(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw std::domain_error("division by zero");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }
    explicit Rat(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    /// Parses "p", "-p" or "p/q" (decimal integers only).
    static Rat parse(std::string_view s) {
        std::string str(s);
        if (str.empty()) throw std::invalid_argument("empty rational literal");
        mpq_class q;
        if (q.set_str(str, 10) != 0) throw std::invalid_argument("bad rational literal '" + str + "'");
        if (q.get_den() == 0) throw std::domain_error("division by zero");
        q.canonicalize();
        return Rat(q);
    }

    const mpq_class& raw() const { return q_; }
    mpz_class num() const { return q_.get_num(); }
    mpz_class den() const { return q_.get_den(); }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }
    double to_double() const { return q_.get_d(); }

    Rat operator-() const { return Rat(mpq_class(-q_)); }
    Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
    Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
    Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.is_zero()) throw std::domain_error("division by zero");
        q_ /= o.q_;
        return *this;
    }
    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    Rat inverse() const { return Rat(1) / *this; }
    Rat abs() const { return sign() < 0 ? -*this : *this; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    /// "p" for integers, "p/q" otherwise.
    std::string str() const { return q_.get_str(10); }
    friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

    static Rat floor_of(const Rat& r) {
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), r.q_.get_num_mpz_t(), r.q_.get_den_mpz_t());
        return Rat(f);
    }

private:
    mpq_class q_{0};
};

// Field-generic hooks; every coefficient field provides these.
inline Rat field_zero(const Rat&) { return Rat(0); }
inline Rat field_one(const Rat&) { return Rat(1); }
inline bool is_zero(const Rat& r) { return r.is_zero(); }
inline std::string to_string(const Rat& r) { return r.str(); }

// Dispatch through argument-dependent lookup, so member functions named
// is_zero or to_string inside class templates do not hide the field hooks.
template <class F>
bool field_is_zero(const F& x) { return is_zero(x); }
template <class F>
std::string field_str(const F& x) { return to_string(x); }

}  // namespace azumaya
