#pragma once

// Point (non-rigorous) complex arithmetic over double or BigFloat.

#include <cmath>
#include <string>

#include "certroots/bigfloat.hpp"

namespace certroots {

template <class R>
R make_real(double v, Precision prec);
template <>
inline double make_real<double>(double v, Precision) {
    return v;
}
template <>
inline BigFloat make_real<BigFloat>(double v, Precision prec) {
    return BigFloat(v, prec);
}

template <class R>
R make_real(const Rational& q, Precision prec);
template <>
inline double make_real<double>(const Rational& q, Precision) {
    return BigFloat(q, kDoublePrecision).to_double();
}
template <>
inline BigFloat make_real<BigFloat>(const Rational& q, Precision prec) {
    return BigFloat(q, prec);
}

inline double to_double(double x) { return x; }
inline double to_double(const BigFloat& x) { return x.to_double(); }

inline Precision precision_of(double) { return kDoublePrecision; }
inline Precision precision_of(const BigFloat& x) { return x.precision(); }

/// Re-rounds a value into another real representation.
template <class To>
To convert_real(const BigFloat& x, Precision prec);
template <>
inline double convert_real<double>(const BigFloat& x, Precision) {
    return x.to_double();
}
template <>
inline BigFloat convert_real<BigFloat>(const BigFloat& x, Precision prec) {
    return x.rounded(prec);
}
template <class To>
To convert_real(double x, Precision prec) {
    return make_real<To>(x, prec);
}

inline double hypot_nearest(double a, double b) { return std::hypot(a, b); }
inline BigFloat hypot_nearest(const BigFloat& a, const BigFloat& b) { return hypot(a, b); }

template <class R>
struct Complex {
    R re;
    R im;

    Complex() = default;
    Complex(R r, R i) : re(std::move(r)), im(std::move(i)) {}

    static Complex zero(Precision prec) { return {make_real<R>(0.0, prec), make_real<R>(0.0, prec)}; }
    static Complex from_doubles(double r, double i, Precision prec) {
        return {make_real<R>(r, prec), make_real<R>(i, prec)};
    }

    Precision precision() const { return precision_of(re); }

    Complex conj() const { return {re, -im}; }
    R norm() const { return re * re + im * im; }
    R abs() const { return hypot_nearest(re, im); }

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator*(const Complex& a, const R& s) { return {a.re * s, a.im * s}; }
    friend Complex operator/(const Complex& a, const Complex& b) {
        // Smith's algorithm keeps intermediate magnitudes bounded.
        using std::abs;
        using certroots::abs;
        if (abs(b.re) >= abs(b.im)) {
            const R t = b.im / b.re;
            const R d = b.re + b.im * t;
            return {(a.re + a.im * t) / d, (a.im - a.re * t) / d};
        }
        const R t = b.re / b.im;
        const R d = b.re * t + b.im;
        return {(a.re * t + a.im) / d, (a.im * t - a.re) / d};
    }
    Complex& operator+=(const Complex& b) { return *this = *this + b; }
    Complex& operator-=(const Complex& b) { return *this = *this - b; }
};

using ComplexDouble = Complex<double>;
using ComplexBig = Complex<BigFloat>;

template <class To, class From>
Complex<To> convert_complex(const Complex<From>& z, Precision prec) {
    return {convert_real<To>(z.re, prec), convert_real<To>(z.im, prec)};
}

}  // namespace certroots
