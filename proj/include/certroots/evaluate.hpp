#pragma once

// Polynomial evaluation in ball arithmetic (rigorous) and point arithmetic
// (fast, used by the iterative solvers).

#include <cmath>
#include <vector>

#include "certroots/ball.hpp"
#include "certroots/polynomial.hpp"

namespace certroots {

/// Coefficients of a Polynomial enclosed in balls at a working precision.
template <class R>
class BallPolynomial {
   public:
    using ball_type = ComplexBall<R>;

    BallPolynomial(const Polynomial& f, Precision prec) : prec_(R_is_double() ? kDoublePrecision : prec) {
        coeffs_.reserve(f.coeffs().size());
        for (const Rational& a : f.coeffs()) coeffs_.push_back(ball_type::from_rational(a, prec_));
    }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    Precision precision() const { return prec_; }
    const std::vector<ball_type>& coeffs() const { return coeffs_; }
    bool is_finite() const {
        for (const auto& c : coeffs_)
            if (!c.is_finite()) return false;
        return true;
    }

   private:
    static constexpr bool R_is_double() { return std::is_same_v<R, double>; }

    Precision prec_;
    std::vector<ball_type> coeffs_;
};

/// Horner evaluation; the result contains f(z) for every z in x.
template <class R>
ComplexBall<R> evaluate(const BallPolynomial<R>& f, const ComplexBall<R>& x) {
    const auto& c = f.coeffs();
    if (c.empty()) return ComplexBall<R>::real(0.0, f.precision());
    ComplexBall<R> acc = c.back();
    for (size_t i = c.size() - 1; i-- > 0;) acc = acc * x + c[i];
    return acc;
}

template <class R>
ComplexBall<R> evaluate(const Polynomial& f, const ComplexBall<R>& x) {
    return evaluate(BallPolynomial<R>(f, x.precision()), x);
}

template <class R>
struct ValueAndDerivative {
    ComplexBall<R> value;
    ComplexBall<R> derivative;
};

template <class R>
ValueAndDerivative<R> evaluate_with_derivative(const BallPolynomial<R>& f, const ComplexBall<R>& x) {
    const auto& c = f.coeffs();
    const Precision p = f.precision();
    if (c.empty()) return {ComplexBall<R>::real(0.0, p), ComplexBall<R>::real(0.0, p)};
    ComplexBall<R> acc = c.back();
    ComplexBall<R> der = ComplexBall<R>::real(0.0, p);
    for (size_t i = c.size() - 1; i-- > 0;) {
        der = der * x + acc;
        acc = acc * x + c[i];
    }
    return {std::move(acc), std::move(der)};
}

/// Enclosures of f^(k)(c)/k!, k = 0..N, by repeated synthetic division.
template <class R>
std::vector<ComplexBall<R>> taylor_shift(const BallPolynomial<R>& f, const ComplexBall<R>& c) {
    std::vector<ComplexBall<R>> b = f.coeffs();
    const size_t n = b.size();
    for (size_t k = 0; k + 1 < n; ++k) {
        for (size_t j = n - 1; j-- > k;) b[j] = b[j] + c * b[j + 1];
    }
    return b;
}

// --- point arithmetic ---------------------------------------------------------------

/// Coefficients rounded to R for the iterative solvers, with their moduli
/// for running error estimates.
template <class R>
class PointPolynomial {
   public:
    PointPolynomial(const Polynomial& f, Precision prec) : prec_(prec) {
        for (const Rational& a : f.coeffs()) {
            coeffs_.push_back(make_real<R>(a, prec));
            using std::abs;
            using certroots::abs;
            moduli_.push_back(abs(coeffs_.back()));
        }
    }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    Precision precision() const { return prec_; }
    const std::vector<R>& coeffs() const { return coeffs_; }
    const std::vector<R>& moduli() const { return moduli_; }

   private:
    Precision prec_;
    std::vector<R> coeffs_;
    std::vector<R> moduli_;
};

template <class R>
R unit_roundoff_real(Precision prec) {
    return make_real<R>(std::ldexp(1.0, -static_cast<int>(std::min(prec.bits, 1000u))), prec);
}

template <class R>
struct NewtonRatio {
    Complex<R> ratio;       // f(x) / f'(x)
    bool derivative_zero;   // f'(x) == 0 in point arithmetic
    bool in_noise;          // |f(x)| is below its rounding-error estimate
};

/// f(x)/f'(x) with a running error test. For |x| > 1 the reversed
/// polynomial is evaluated at 1/x so that no power of x overflows.
template <class R>
NewtonRatio<R> newton_ratio(const PointPolynomial<R>& f, const Complex<R>& x) {
    const auto& a = f.coeffs();
    const auto& m = f.moduli();
    const int n = f.degree();
    const Precision prec = f.precision();
    const R zero = make_real<R>(0.0, prec);
    const R one = make_real<R>(1.0, prec);
    const R ax = x.abs();
    const R u = unit_roundoff_real<R>(prec);
    const R slack = make_real<R>(4.0 * (n + 1), prec);

    if (!(ax > one)) {
        Complex<R> p{a[n], zero};
        Complex<R> d{zero, zero};
        R s = m[n];
        for (int i = n - 1; i >= 0; --i) {
            d = d * x + p;
            p = p * x + Complex<R>{a[i], zero};
            s = s * ax + m[i];
        }
        const bool noise = !(p.abs() > slack * u * s);
        const bool dzero = is_zero_real(d.re) && is_zero_real(d.im);
        return {dzero ? p : p / d, dzero, noise};
    }
    // g(y) = y^N f(1/y) = sum a_i y^{N-i}, y = 1/x;  f/f' = 1 / (y (N - y g'/g)).
    const Complex<R> y = Complex<R>{one, zero} / x;
    const R ay = one / ax;
    Complex<R> g{a[0], zero};
    Complex<R> dg{zero, zero};
    R s = m[0];
    for (int i = 1; i <= n; ++i) {
        dg = dg * y + g;
        g = g * y + Complex<R>{a[i], zero};
        s = s * ay + m[i];
    }
    const bool noise = !(g.abs() > slack * u * s);
    if (is_zero_real(g.re) && is_zero_real(g.im)) return {Complex<R>{zero, zero}, false, true};
    const Complex<R> nn{make_real<R>(static_cast<double>(n), prec), zero};
    const Complex<R> denom = y * (nn - y * (dg / g));
    const bool dzero = is_zero_real(denom.re) && is_zero_real(denom.im);
    return {dzero ? g : Complex<R>{one, zero} / denom, dzero, noise};
}

/// One Newton iteration in point arithmetic: x - f(x)/f'(x), or x itself
/// when f'(x) == 0.
template <class R>
Complex<R> newton_step(const PointPolynomial<R>& f, const Complex<R>& x) {
    const auto r = newton_ratio(f, x);
    if (r.derivative_zero) return x;
    return x - r.ratio;
}

enum class NewtonOutcome { moved, fixed_point };

struct CertifiedNewtonStep {
    ComplexBig point;
    NewtonOutcome outcome;
};

/// Newton step whose branch is decided rigorously. The midpoint of the
/// enclosure of x - f(x)/f'(x) is returned. Throws PrecisionError when the
/// f' enclosure contains zero but is not exactly zero.
template <class R>
CertifiedNewtonStep newton_step_rigorous(const BallPolynomial<R>& f, const ComplexBig& x) {
    const Precision prec = f.precision();
    const auto xb = ComplexBall<R>::from_point(x, prec);
    const auto vd = evaluate_with_derivative(f, xb);
    if (!vd.value.is_finite() || !vd.derivative.is_finite())
        throw PrecisionError("polynomial evaluation overflowed at this precision");
    if (vd.derivative.contains_zero()) {
        if (vd.derivative.is_exact() && is_zero_real(vd.derivative.re()) && is_zero_real(vd.derivative.im()))
            return {x, NewtonOutcome::fixed_point};
        throw PrecisionError("derivative enclosure contains zero");
    }
    const auto step = xb - vd.value / vd.derivative;
    if (!step.is_finite()) throw PrecisionError("Newton step enclosure is unbounded");
    const Precision out_prec = std::is_same_v<R, double> ? kDoublePrecision : std::max(prec, x.precision());
    ComplexBig next{BigFloat(0.0, out_prec), BigFloat(0.0, out_prec)};
    if constexpr (std::is_same_v<R, double>) {
        next.re = BigFloat(step.re(), out_prec);
        next.im = BigFloat(step.im(), out_prec);
    } else {
        next.re = step.re().rounded(out_prec);
        next.im = step.im().rounded(out_prec);
    }
    return {std::move(next), NewtonOutcome::moved};
}

}  // namespace certroots
