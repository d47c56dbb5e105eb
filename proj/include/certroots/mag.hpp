#pragma once

// Non-negative magnitude bounds with directed rounding.
//
// Radii and certified bounds are "mags": an upper (or lower) bound on some
// exact non-negative real. For the hardware path a mag is a double whose
// directed rounding is derived from error-free transformations, so exact
// results stay exact. For the multiprecision path a mag is a 64-bit BigFloat
// computed with MPFR's directed rounding modes.

#include <cmath>
#include <limits>

#include "certroots/bigfloat.hpp"

namespace certroots {

inline constexpr Precision kMagPrecision{64};

template <class R>
struct mag_type;
template <>
struct mag_type<double> {
    using type = double;
};
template <>
struct mag_type<BigFloat> {
    using type = BigFloat;
};
template <class R>
using mag_t = typename mag_type<R>::type;

namespace mag {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kTiny = 0x1p-1074;
// Below this magnitude the fma residual of a product may itself be rounded.
inline constexpr double kUnderflowGuard = 0x1p-960;

inline double next_up(double x) { return std::nextafter(x, kInf); }
inline double next_down(double x) { return std::nextafter(x, -kInf); }

// --- double ---------------------------------------------------------------

inline double add_up(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) return s;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return e > 0 ? next_up(s) : s;
}
inline double add_down(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) return s;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return e < 0 ? next_down(s) : s;
}
inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double sub_up(double a, double b) { return add_up(a, -b); }

inline double mul_up(double a, double b) {
    const double p = a * b;
    if (!std::isfinite(p)) return p;
    if (std::abs(p) < kUnderflowGuard) {
        if (a == 0 || b == 0) return 0.0;
        return next_up(p);
    }
    return std::fma(a, b, -p) > 0 ? next_up(p) : p;
}
inline double mul_down(double a, double b) {
    const double p = a * b;
    if (!std::isfinite(p)) return p;
    if (std::abs(p) < kUnderflowGuard) {
        if (a == 0 || b == 0) return 0.0;
        return next_down(p);
    }
    return std::fma(a, b, -p) < 0 ? next_down(p) : p;
}
/// a / b rounded up, for a >= 0, b >= 0.
inline double div_up(double a, double b) {
    if (b == 0) return a == 0 ? std::numeric_limits<double>::quiet_NaN() : kInf;
    const double q = a / b;
    if (!std::isfinite(q) || !std::isfinite(b)) return q;
    if (std::abs(q) < kUnderflowGuard || std::abs(a) < kUnderflowGuard) return a == 0 ? 0.0 : next_up(q);
    return std::fma(-q, b, a) > 0 ? next_up(q) : q;
}
inline double div_down(double a, double b) {
    if (b == 0) return a == 0 ? std::numeric_limits<double>::quiet_NaN() : kInf;
    const double q = a / b;
    if (!std::isfinite(q) || !std::isfinite(b)) return q;
    if (std::abs(q) < kUnderflowGuard || std::abs(a) < kUnderflowGuard) return a == 0 ? 0.0 : next_down(q);
    return std::fma(-q, b, a) < 0 ? next_down(q) : q;
}
inline double sqrt_up(double x) {
    const double s = std::sqrt(x);
    if (!std::isfinite(s) || s == 0) return s;
    return std::fma(-s, s, x) > 0 ? next_up(s) : s;
}
inline double sqrt_down(double x) {
    const double s = std::sqrt(x);
    if (!std::isfinite(s) || s == 0) return s;
    return std::fma(-s, s, x) < 0 ? next_down(s) : s;
}
inline double hypot_up(double x, double y) {
    x = std::abs(x);
    y = std::abs(y);
    if (std::isnan(x) || std::isnan(y)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(x) || std::isinf(y)) return std::numeric_limits<double>::infinity();
    if (y == 0) return x;
    if (x == 0) return y;
    const double big = std::max(x, y);
    if (big > 0x1p500 || big < 0x1p-500) {
        // Rescale by a power of two so the squares neither overflow nor
        // underflow; scaling is exact.
        const int e = std::ilogb(big);
        const double r = std::ldexp(hypot_up(std::ldexp(x, -e), std::ldexp(y, -e)), e) * (1 + 0x1p-50);
        return r < kUnderflowGuard ? next_up(r) : r;
    }
    return sqrt_up(add_up(mul_up(x, x), mul_up(y, y)));
}
inline double hypot_down(double x, double y) {
    x = std::abs(x);
    y = std::abs(y);
    if (std::isnan(x) || std::isnan(y)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(x) || std::isinf(y)) return std::numeric_limits<double>::infinity();
    if (y == 0) return x;
    if (x == 0) return y;
    const double big = std::max(x, y);
    if (big > 0x1p500 || big < 0x1p-500) {
        const int e = std::ilogb(big);
        const double r = std::ldexp(hypot_down(std::ldexp(x, -e), std::ldexp(y, -e)), e) * (1 - 0x1p-50);
        return r < kUnderflowGuard ? next_down(r) : r;
    }
    return sqrt_down(add_down(mul_down(x, x), mul_down(y, y)));
}
/// Upper bound on x^(1/k) for x >= 0. libm pow is not correctly rounded, so
/// the result is inflated by a relative margin that dominates its error for
/// |log x| up to ~745 (the full double range).
inline double root_up(double x, unsigned k) {
    if (x == 0 || k == 1 || !std::isfinite(x)) return x;
    const double r = std::pow(x, 1.0 / k);
    return next_up(r * (1 + 0x1p-40));
}
inline double root_down(double x, unsigned k) {
    if (x == 0 || k == 1 || !std::isfinite(x)) return x;
    const double r = std::pow(x, 1.0 / k);
    return next_down(r * (1 - 0x1p-40));
}
inline double abs_up(double x) { return std::abs(x); }
inline double abs_down(double x) { return std::abs(x); }
inline bool is_finite(double x) { return std::isfinite(x); }
inline double to_double_up(double x) { return x; }

// --- BigFloat -------------------------------------------------------------

inline BigFloat make_mag(double v) { return BigFloat(v, kMagPrecision); }

inline BigFloat add_up(const BigFloat& a, const BigFloat& b) {
    BigFloat out(kMagPrecision);
    mpfr_add(out.get(), a.get(), b.get(), MPFR_RNDU);
    return out;
}
inline BigFloat add_down(const BigFloat& a, const BigFloat& b) {
    BigFloat out(kMagPrecision);
    mpfr_add(out.get(), a.get(), b.get(), MPFR_RNDD);
    return out;
}
inline BigFloat sub_down(const BigFloat& a, const BigFloat& b) {
    BigFloat out(kMagPrecision);
    mpfr_sub(out.get(), a.get(), b.get(), MPFR_RNDD);
    return out;
}
inline BigFloat sub_up(const BigFloat& a, const BigFloat& b) {
    BigFloat out(kMagPrecision);
    mpfr_sub(out.get(), a.get(), b.get(), MPFR_RNDU);
    return out;
}
inline BigFloat mul_up(const BigFloat& a, const BigFloat& b) {
    BigFloat out(kMagPrecision);
    mpfr_mul(out.get(), a.get(), b.get(), MPFR_RNDU);
    return out;
}
inline BigFloat mul_down(const BigFloat& a, const BigFloat& b) {
    BigFloat out(kMagPrecision);
    mpfr_mul(out.get(), a.get(), b.get(), MPFR_RNDD);
    return out;
}
inline BigFloat div_up(const BigFloat& a, const BigFloat& b) {
    BigFloat out(kMagPrecision);
    mpfr_div(out.get(), a.get(), b.get(), MPFR_RNDU);
    return out;
}
inline BigFloat div_down(const BigFloat& a, const BigFloat& b) {
    BigFloat out(kMagPrecision);
    mpfr_div(out.get(), a.get(), b.get(), MPFR_RNDD);
    return out;
}
inline BigFloat sqrt_up(const BigFloat& x) {
    BigFloat out(kMagPrecision);
    mpfr_sqrt(out.get(), x.get(), MPFR_RNDU);
    return out;
}
inline BigFloat hypot_up(const BigFloat& x, const BigFloat& y) {
    BigFloat out(kMagPrecision);
    mpfr_hypot(out.get(), x.get(), y.get(), MPFR_RNDU);
    return out;
}
inline BigFloat hypot_down(const BigFloat& x, const BigFloat& y) {
    BigFloat out(kMagPrecision);
    mpfr_hypot(out.get(), x.get(), y.get(), MPFR_RNDD);
    return out;
}
inline BigFloat root_up(const BigFloat& x, unsigned k) {
    BigFloat out(kMagPrecision);
    mpfr_rootn_ui(out.get(), x.get(), k, MPFR_RNDU);
    return out;
}
inline BigFloat root_down(const BigFloat& x, unsigned k) {
    BigFloat out(kMagPrecision);
    mpfr_rootn_ui(out.get(), x.get(), k, MPFR_RNDD);
    return out;
}
inline BigFloat abs_up(const BigFloat& x) {
    BigFloat out(kMagPrecision);
    mpfr_abs(out.get(), x.get(), MPFR_RNDU);
    return out;
}
inline BigFloat abs_down(const BigFloat& x) {
    BigFloat out(kMagPrecision);
    mpfr_abs(out.get(), x.get(), MPFR_RNDD);
    return out;
}
inline bool is_finite(const BigFloat& x) { return x.is_finite(); }
inline double to_double_up(const BigFloat& x) { return x.to_double(Round::up); }

// --- generic --------------------------------------------------------------

template <class M>
M zero();
template <>
inline double zero<double>() {
    return 0.0;
}
template <>
inline BigFloat zero<BigFloat>() {
    return BigFloat(kMagPrecision);
}

template <class M>
M infinity();
template <>
inline double infinity<double>() {
    return kInf;
}
template <>
inline BigFloat infinity<BigFloat>() {
    return BigFloat::infinity(kMagPrecision);
}

/// Mag holding an exact small integer (or an upper bound of a double).
template <class M>
M from_double_up(double v);
template <>
inline double from_double_up<double>(double v) {
    return v;
}
template <>
inline BigFloat from_double_up<BigFloat>(double v) {
    BigFloat out(kMagPrecision);
    mpfr_set_d(out.get(), v, MPFR_RNDU);
    return out;
}

/// Upper bound on a BigFloat magnitude as a mag of type M.
template <class M>
M from_bigfloat_up(const BigFloat& v);
template <>
inline double from_bigfloat_up<double>(const BigFloat& v) {
    return std::abs(v.to_double(v.sign() >= 0 ? Round::up : Round::down));
}
template <>
inline BigFloat from_bigfloat_up<BigFloat>(const BigFloat& v) {
    return abs_up(v);
}

template <class M>
M max(const M& a, const M& b) {
    return a < b ? b : a;
}
template <class M>
M min(const M& a, const M& b) {
    return b < a ? b : a;
}

/// Exact conversion of a mag to a 64-bit BigFloat (double mags fit exactly).
inline BigFloat to_bigfloat(double m) { return BigFloat(m, kMagPrecision); }
inline BigFloat to_bigfloat(const BigFloat& m) { return m.rounded(kMagPrecision, Round::up); }

}  // namespace mag
}  // namespace certroots
