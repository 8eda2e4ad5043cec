#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace starq {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

/// Exact complex scalar a + b*i with rational a, b.  All coefficient
/// arithmetic in the library bottoms out here; there is no floating point
/// anywhere.
struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(long n) : re(n) {}
    GaussianRational(int n) : re(n) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static GaussianRational i() { return GaussianRational(Rational(0), Rational(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_one() const { return re == 1 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussianRational operator-() const { return {-re, -im}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }

    GaussianRational inverse() const {
        if (is_zero()) throw std::domain_error("GaussianRational: division by zero");
        Rational n = re * re + im * im;
        return {re / n, -im / n};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        return a * b.inverse();
    }
    GaussianRational& operator/=(const GaussianRational& b) { return *this = *this * b.inverse(); }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
    friend bool operator<(const GaussianRational& a, const GaussianRational& b) {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    }

    /// Prints `3/2` for real values and `(a,b)` for a + b*i, matching the
    /// literal syntax accepted by the parsers.
    std::string str() const {
        std::ostringstream os;
        if (im == 0) {
            os << re;
        } else {
            os << '(' << re << ',' << im << ')';
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const GaussianRational& g) { return os << g.str(); }
};

}  // namespace starq
