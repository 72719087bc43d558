#pragma once

#include <cmath>
#include <cstdint>
#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace windice {

// Exact rational scalar. Construction and evaluation of dice stay exact in
// this mode; every comparison against the feasibility tolerance becomes an
// exact comparison against zero.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}
    Rational(long n) : v_(static_cast<long int>(n)) {}
    Rational(long long n) : v_(std::to_string(n)) {}
    Rational(long num, long den) : v_(num, den) { v_.canonicalize(); }
    explicit Rational(const mpq_class& q) : v_(q) {}

    // Exact binary expansion of the double; no decimal rounding involved.
    static Rational from_double(double d) {
        if (!std::isfinite(d)) throw std::invalid_argument("non-finite value in rational mode");
        return Rational(mpq_class(d));
    }
    // Parses "p/q" or an integer literal.
    static Rational parse(const std::string& s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
        q.canonicalize();
        return Rational(q);
    }

    double to_double() const { return v_.get_d(); }
    std::string str() const { return v_.get_str(); }
    const mpq_class& raw() const { return v_; }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.v_ == 0) throw std::domain_error("rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

private:
    mpq_class v_;
};

inline Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }
inline Rational pow_int(Rational base, int e) {
    Rational out(1);
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}
inline double pow_int(double base, int e) { return std::pow(base, e); }
using std::abs;

// Per-scalar policy: the feasibility tolerance and conversions. Double mode
// compares slacks against eps; rational mode compares exactly.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double feas_eps() { return 1e-9; }
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_double(double d) { return d; }
    static double to_double(double d) { return d; }
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational feas_eps() { return Rational(0); }
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_double(double d) { return Rational::from_double(d); }
    static double to_double(const Rational& r) { return r.to_double(); }
};

template <class S>
double as_double(const S& s) { return scalar_traits<S>::to_double(s); }

}  // namespace windice
