#pragma once

// Midpoint-radius complex balls.
//
// A ComplexBall<R> encloses the set {z : |z - mid| <= rad}. Every operation
// returns a ball containing the exact image of all points of its inputs: the
// midpoint is computed with round-to-nearest and the rounding error is added
// to the radius, which is itself accumulated with upward rounding.

#include <cmath>
#include <ostream>
#include <utility>

#include "certroots/complex.hpp"
#include "certroots/mag.hpp"

namespace certroots {

template <class R>
struct Rounded {
    R value;
    mag_t<R> error;  // upper bound on |exact - value|
};

// --- error-tracked scalar operations ----------------------------------------

inline Rounded<double> add_err(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) return {s, mag::kInf};
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return {s, std::abs(e)};
}
inline Rounded<double> sub_err(double a, double b) { return add_err(a, -b); }
inline Rounded<double> mul_err(double a, double b) {
    const double p = a * b;
    if (!std::isfinite(p)) return {p, mag::kInf};
    double e = std::abs(std::fma(a, b, -p));
    if (std::abs(p) < mag::kUnderflowGuard && a != 0 && b != 0) e = mag::add_up(e, mag::kTiny);
    return {p, e};
}

namespace detail {
/// Upper bound on half an ulp of v at its precision, i.e. |v| * 2^-p.
inline BigFloat half_ulp_bound(const BigFloat& v) {
    BigFloat m = mag::abs_up(v);
    mpfr_mul_2si(m.get(), m.get(), -static_cast<long>(v.precision().bits), MPFR_RNDU);
    return m;
}
template <class Fn>
Rounded<BigFloat> tracked(const BigFloat& a, const BigFloat& b, Fn fn) {
    BigFloat out(detail::wider(a, b));
    const int t = fn(out.get(), a.get(), b.get(), MPFR_RNDN);
    BigFloat err = t == 0 ? mag::zero<BigFloat>() : half_ulp_bound(out);
    return {std::move(out), std::move(err)};
}
}  // namespace detail

inline Rounded<BigFloat> add_err(const BigFloat& a, const BigFloat& b) { return detail::tracked(a, b, mpfr_add); }
inline Rounded<BigFloat> sub_err(const BigFloat& a, const BigFloat& b) { return detail::tracked(a, b, mpfr_sub); }
inline Rounded<BigFloat> mul_err(const BigFloat& a, const BigFloat& b) { return detail::tracked(a, b, mpfr_mul); }

inline bool is_zero_real(double x) { return x == 0; }
inline bool is_zero_real(const BigFloat& x) { return x.is_zero(); }
inline bool is_finite_real(double x) { return std::isfinite(x); }
inline bool is_finite_real(const BigFloat& x) { return x.is_finite(); }

/// Unit roundoff 2^-p of a value's precision, as a mag.
inline double unit_roundoff(double) { return 0x1p-53; }
inline BigFloat unit_roundoff(const BigFloat& x) {
    BigFloat u(1.0, kMagPrecision);
    mpfr_mul_2si(u.get(), u.get(), -static_cast<long>(x.precision().bits), MPFR_RNDU);
    return u;
}

/// Upper bound on |x - y| where y is x re-rounded to another representation.
inline double conversion_error_to_double(const BigFloat& x, double y) {
    if (!std::isfinite(y)) return mag::kInf;
    const Precision p{x.precision().bits + 64};
    BigFloat d(p);
    BigFloat yy(y, kDoublePrecision);
    mpfr_sub(d.get(), x.get(), yy.get(), MPFR_RNDA);
    return std::abs(d.to_double(d.sign() >= 0 ? Round::up : Round::down));
}
inline BigFloat conversion_error(const BigFloat& x, const BigFloat& y) {
    const Precision p{std::max(x.precision().bits, y.precision().bits) + 64};
    BigFloat d(p);
    mpfr_sub(d.get(), x.get(), y.get(), MPFR_RNDA);
    return mag::abs_up(d);
}

template <class R>
class ComplexBall {
   public:
    using real_type = R;
    using mag_type = mag_t<R>;

    ComplexBall() : re_(make_real<R>(0.0, kDoublePrecision)), im_(re_), rad_(mag::zero<mag_type>()) {}
    ComplexBall(R re, R im, mag_type rad) : re_(std::move(re)), im_(std::move(im)), rad_(std::move(rad)) {}

    static ComplexBall exact(R re, R im) { return {std::move(re), std::move(im), mag::zero<mag_type>()}; }
    static ComplexBall exact(const Complex<R>& z) { return exact(z.re, z.im); }
    static ComplexBall real(double v, Precision prec) {
        return exact(make_real<R>(v, prec), make_real<R>(0.0, prec));
    }
    static ComplexBall whole(Precision prec) {
        return {make_real<R>(0.0, prec), make_real<R>(0.0, prec), mag::infinity<mag_type>()};
    }

    /// Ball enclosing an exact rational at working precision prec.
    static ComplexBall from_rational(const Rational& q, Precision prec);

    /// Ball enclosing an exact complex point held at any precision.
    static ComplexBall from_point(const Complex<BigFloat>& z, Precision prec);

    const R& re() const { return re_; }
    const R& im() const { return im_; }
    const mag_type& rad() const { return rad_; }
    Complex<R> mid() const { return {re_, im_}; }
    Precision precision() const { return precision_of(re_); }

    bool is_finite() const { return is_finite_real(re_) && is_finite_real(im_) && mag::is_finite(rad_); }
    bool is_exact() const { return rad_ == mag::zero<mag_type>(); }
    bool is_real() const { return is_zero_real(im_); }

    mag_type abs_upper() const { return mag::add_up(mag::hypot_up(re_, im_), rad_); }
    mag_type abs_lower() const {
        mag_type l = mag::sub_down(mag::hypot_down(re_, im_), rad_);
        return l < mag::zero<mag_type>() ? mag::zero<mag_type>() : l;
    }
    /// True when 0 may belong to the ball.
    bool contains_zero() const { return !(abs_lower() > mag::zero<mag_type>()); }

    /// Rigorous containment test of an exact point.
    bool contains(const Complex<R>& z) const {
        const auto dr = sub_err(z.re, re_);
        const auto di = sub_err(z.im, im_);
        const mag_type dist = mag::add_up(mag::hypot_up(dr.value, di.value), mag::add_up(dr.error, di.error));
        return dist <= rad_;
    }
    /// Rigorous inclusion of another ball.
    bool contains(const ComplexBall& other) const {
        if (!other.is_finite()) return false;
        const auto dr = sub_err(other.re_, re_);
        const auto di = sub_err(other.im_, im_);
        const mag_type dist = mag::add_up(mag::hypot_up(dr.value, di.value), mag::add_up(dr.error, di.error));
        return mag::add_up(dist, other.rad_) <= rad_;
    }

    ComplexBall conj() const { return {re_, -im_, rad_}; }
    ComplexBall with_radius(mag_type r) const { return {re_, im_, std::move(r)}; }
    ComplexBall inflated(const mag_type& extra) const { return {re_, im_, mag::add_up(rad_, extra)}; }

    friend ComplexBall operator+(const ComplexBall& a, const ComplexBall& b) {
        auto r = add_err(a.re_, b.re_);
        auto i = add_err(a.im_, b.im_);
        mag_type rad = mag::add_up(mag::add_up(a.rad_, b.rad_), mag::add_up(r.error, i.error));
        return {std::move(r.value), std::move(i.value), std::move(rad)};
    }
    friend ComplexBall operator-(const ComplexBall& a, const ComplexBall& b) {
        auto r = sub_err(a.re_, b.re_);
        auto i = sub_err(a.im_, b.im_);
        mag_type rad = mag::add_up(mag::add_up(a.rad_, b.rad_), mag::add_up(r.error, i.error));
        return {std::move(r.value), std::move(i.value), std::move(rad)};
    }
    friend ComplexBall operator-(const ComplexBall& a) { return {-a.re_, -a.im_, a.rad_}; }

    friend ComplexBall operator*(const ComplexBall& a, const ComplexBall& b) {
        mag_type err;
        R re, im;
        if (a.is_real() && b.is_real()) {
            auto p = mul_err(a.re_, b.re_);
            re = std::move(p.value);
            im = make_real<R>(0.0, precision_of(re));
            err = std::move(p.error);
        } else {
            auto p1 = mul_err(a.re_, b.re_);
            auto p2 = mul_err(a.im_, b.im_);
            auto p3 = mul_err(a.re_, b.im_);
            auto p4 = mul_err(a.im_, b.re_);
            auto s1 = sub_err(p1.value, p2.value);
            auto s2 = add_err(p3.value, p4.value);
            err = mag::add_up(mag::add_up(mag::add_up(p1.error, p2.error), mag::add_up(p3.error, p4.error)),
                              mag::add_up(s1.error, s2.error));
            re = std::move(s1.value);
            im = std::move(s2.value);
        }
        if (!(a.is_exact() && b.is_exact())) {
            // |(a+da)(b+db) - ab| <= |a| rb + |b| ra + ra rb
            const mag_type am = mag::hypot_up(a.re_, a.im_);
            const mag_type bm = mag::hypot_up(b.re_, b.im_);
            const mag_type prop =
                mag::add_up(mag::add_up(mag::mul_up(am, b.rad_), mag::mul_up(bm, a.rad_)), mag::mul_up(a.rad_, b.rad_));
            err = mag::add_up(err, prop);
        }
        return {std::move(re), std::move(im), std::move(err)};
    }

    /// Ball containing 1/z for every z in this ball; the whole plane when the
    /// ball may contain zero or the midpoint cannot be inverted safely.
    ComplexBall reciprocal() const;

    friend ComplexBall operator/(const ComplexBall& a, const ComplexBall& b) { return a * b.reciprocal(); }

    ComplexBall& operator+=(const ComplexBall& b) { return *this = *this + b; }
    ComplexBall& operator-=(const ComplexBall& b) { return *this = *this - b; }
    ComplexBall& operator*=(const ComplexBall& b) { return *this = *this * b; }

    friend std::ostream& operator<<(std::ostream& os, const ComplexBall& z) {
        return os << "(" << to_double(z.re_) << " + " << to_double(z.im_) << "i) +/- " << mag::to_double_up(z.rad_);
    }

   private:
    R re_;
    R im_;
    mag_type rad_;
};

using DoubleBall = ComplexBall<double>;
using BigBall = ComplexBall<BigFloat>;

// --- out-of-class definitions -------------------------------------------------

template <>
inline DoubleBall DoubleBall::from_rational(const Rational& q, Precision) {
    BigFloat hi(q, Precision{128});
    const double mid = hi.to_double();
    if (!std::isfinite(mid)) return whole(kDoublePrecision);
    if (Rational(mid) == q) return exact(mid, 0.0);
    // |q - mid| <= ulp(mid); bound the ulp by |mid| 2^-52 plus the subnormal step.
    const double rad = mag::add_up(mag::mul_up(std::abs(mid), 0x1p-52), mag::kTiny);
    return {mid, 0.0, rad};
}
template <>
inline BigBall BigBall::from_rational(const Rational& q, Precision prec) {
    BigFloat mid(q, prec);
    BigFloat rad = mid.was_rounded() ? detail::half_ulp_bound(mid) : mag::zero<BigFloat>();
    return {std::move(mid), BigFloat(prec), std::move(rad)};
}

template <>
inline DoubleBall DoubleBall::from_point(const Complex<BigFloat>& z, Precision) {
    const double re = z.re.to_double();
    const double im = z.im.to_double();
    if (!std::isfinite(re) || !std::isfinite(im)) return whole(kDoublePrecision);
    const double er = conversion_error_to_double(z.re, re);
    const double ei = conversion_error_to_double(z.im, im);
    return {re, im, mag::add_up(er, ei)};
}
template <>
inline BigBall BigBall::from_point(const Complex<BigFloat>& z, Precision prec) {
    if (z.re.precision().bits <= prec.bits && z.im.precision().bits <= prec.bits) {
        return exact(z.re.rounded(prec), z.im.rounded(prec));
    }
    BigFloat re = z.re.rounded(prec);
    BigFloat im = z.im.rounded(prec);
    BigFloat rad = mag::add_up(conversion_error(z.re, re), conversion_error(z.im, im));
    return {std::move(re), std::move(im), std::move(rad)};
}

template <>
inline DoubleBall DoubleBall::reciprocal() const {
    const double lower = mag::sub_down(mag::hypot_down(re_, im_), rad_);
    if (!(lower > 0) || !is_finite()) return whole(kDoublePrecision);
    double qr, qi, err;
    if (im_ == 0) {
        qr = 1.0 / re_;
        qi = 0.0;
        if (!std::isfinite(qr) || std::abs(qr) < mag::kUnderflowGuard || std::abs(re_) < mag::kUnderflowGuard)
            return whole(kDoublePrecision);
        err = mag::div_up(std::abs(std::fma(-qr, re_, 1.0)), std::abs(re_));
    } else {
        const double d = re_ * re_ + im_ * im_;
        if (!std::isnormal(d) || d < 0x1p-900 || d > 0x1p900) return whole(kDoublePrecision);
        qr = re_ / d;
        qi = -im_ / d;
        err = mag::mul_up(0x1p-51, mag::add_up(std::abs(qr), std::abs(qi)));
    }
    if (rad_ > 0) {
        // |1/(m+e) - 1/m| <= r / (|m| (|m| - r))
        const double m = mag::hypot_down(re_, im_);
        err = mag::add_up(err, mag::div_up(rad_, mag::mul_down(m, lower)));
    }
    return {qr, qi, err};
}
template <>
inline BigBall BigBall::reciprocal() const {
    const Precision prec = precision();
    const BigFloat lower = mag::sub_down(mag::hypot_down(re_, im_), rad_);
    if (!(lower > mag::zero<BigFloat>()) || !is_finite()) return whole(prec);
    BigFloat qr(prec), qi(prec);
    BigFloat err = mag::zero<BigFloat>();
    if (im_.is_zero()) {
        const int t = mpfr_ui_div(qr.get(), 1, re_.get(), MPFR_RNDN);
        if (t != 0) err = detail::half_ulp_bound(qr);
    } else {
        BigFloat d(Precision{prec.bits + 8});
        BigFloat t2(Precision{prec.bits + 8});
        mpfr_sqr(d.get(), re_.get(), MPFR_RNDN);
        mpfr_sqr(t2.get(), im_.get(), MPFR_RNDN);
        mpfr_add(d.get(), d.get(), t2.get(), MPFR_RNDN);
        mpfr_div(qr.get(), re_.get(), d.get(), MPFR_RNDN);
        mpfr_div(qi.get(), im_.get(), d.get(), MPFR_RNDN);
        mpfr_neg(qi.get(), qi.get(), MPFR_RNDN);
        // Three roundings at p+8 bits plus one at p bits, per component.
        BigFloat u = unit_roundoff(qr);
        err = mag::mul_up(mag::mul_up(u, mag::make_mag(2.0)), mag::add_up(mag::abs_up(qr), mag::abs_up(qi)));
    }
    if (rad_ > mag::zero<BigFloat>()) {
        const BigFloat m = mag::hypot_down(re_, im_);
        err = mag::add_up(err, mag::div_up(rad_, mag::mul_down(m, lower)));
    }
    return {std::move(qr), std::move(qi), std::move(err)};
}

/// Disjointness of two closed disks, decided rigorously.
template <class R>
bool disjoint(const ComplexBall<R>& a, const ComplexBall<R>& b) {
    const auto d = a.with_radius(mag::zero<mag_t<R>>()) - b.with_radius(mag::zero<mag_t<R>>());
    return d.abs_lower() > mag::add_up(a.rad(), b.rad());
}

}  // namespace certroots
