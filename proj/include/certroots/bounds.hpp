#pragma once

// Rigorous Newton-correction and gamma bounds at a single point, with
// precision escalation. Shared by both certifiers.

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "certroots/evaluate.hpp"

namespace certroots {

/// Ball coefficients of one polynomial, cached per precision. Not
/// thread-safe; give every worker its own Evaluator.
class Evaluator {
   public:
    explicit Evaluator(Polynomial f) : f_(std::move(f)), hw_(f_, kDoublePrecision) {}

    const Polynomial& poly() const { return f_; }
    int degree() const { return f_.degree(); }
    const BallPolynomial<double>& hardware() const { return hw_; }
    const BallPolynomial<BigFloat>& at(unsigned bits) {
        auto it = big_.find(bits);
        if (it == big_.end()) it = big_.emplace(bits, std::make_unique<BallPolynomial<BigFloat>>(f_, Precision{bits})).first;
        return *it->second;
    }

   private:
    Polynomial f_;
    BallPolynomial<double> hw_;
    std::map<unsigned, std::unique_ptr<BallPolynomial<BigFloat>>> big_;
};

struct NewtonBound {
    BigFloat beta;           // upper bound on |f(x) / f'(x)|
    BigFloat fprime_lower;   // lower bound on |f'(x)|
    unsigned precision_bits = 53;
    bool rounding_limited = false;  // the f(x) enclosure is mostly rounding error
};

/// Working precisions tried for a point held at `point_bits`: hardware first
/// when the point fits a double, then MPFR from max(256, point_bits) doubling
/// up to `max_bits`.
inline std::vector<unsigned> precision_ladder(unsigned point_bits, unsigned max_bits = 1024) {
    std::vector<unsigned> out;
    if (point_bits <= 53) out.push_back(53);
    for (unsigned p = std::max(256u, point_bits); p <= std::max(max_bits, point_bits); p *= 2) out.push_back(p);
    return out;
}

inline unsigned point_bits(const ComplexBig& x) { return std::max(x.re.precision().bits, x.im.precision().bits); }

namespace detail {

template <class R>
std::optional<NewtonBound> newton_bound_with(const BallPolynomial<R>& f, const ComplexBig& x) {
    const auto xb = ComplexBall<R>::from_point(x, f.precision());
    const auto vd = evaluate_with_derivative(f, xb);
    if (!vd.value.is_finite() || !vd.derivative.is_finite()) return std::nullopt;
    const auto dl = vd.derivative.abs_lower();
    if (!(dl > mag::zero<mag_t<R>>())) return std::nullopt;
    const auto fu = vd.value.abs_upper();
    const auto beta = mag::div_up(fu, dl);
    if (!mag::is_finite(beta)) return std::nullopt;
    const auto mid = mag::hypot_down(vd.value.re(), vd.value.im());
    const bool limited = !(mid > mag::mul_up(vd.value.rad(), mag::from_double_up<mag_t<R>>(2.0)));
    return NewtonBound{mag::to_bigfloat(beta), mag::to_bigfloat(dl), f.precision().bits, limited};
}

template <class R>
std::optional<BigFloat> gamma_with(const BallPolynomial<R>& f, const ComplexBig& x) {
    const int n = f.degree();
    if (n < 2) return mag::zero<BigFloat>();
    const auto xb = ComplexBall<R>::from_point(x, f.precision());
    const auto t = taylor_shift(f, xb);
    const auto t1 = t[1].abs_lower();
    if (!(t1 > mag::zero<mag_t<R>>())) return std::nullopt;
    auto best = mag::zero<mag_t<R>>();
    for (int k = 2; k <= n; ++k) {
        const auto ratio = mag::div_up(t[static_cast<size_t>(k)].abs_upper(), t1);
        if (!mag::is_finite(ratio)) return std::nullopt;
        const auto term = mag::root_up(ratio, static_cast<unsigned>(k - 1));
        if (best < term) best = term;
    }
    return mag::to_bigfloat(best);
}

}  // namespace detail

/// Newton bound at one working precision; nullopt when the enclosure is not
/// finite or |f'| cannot be separated from zero.
inline std::optional<NewtonBound> newton_bound_at(Evaluator& ev, const ComplexBig& x, unsigned bits) {
    if (bits <= 53) return detail::newton_bound_with(ev.hardware(), x);
    return detail::newton_bound_with(ev.at(bits), x);
}

inline std::optional<BigFloat> gamma_at(Evaluator& ev, const ComplexBig& x, unsigned bits) {
    if (bits <= 53) return detail::gamma_with(ev.hardware(), x);
    return detail::gamma_with(ev.at(bits), x);
}

/// Escalates precision until the bound exists and either meets `want` or is
/// no longer limited by rounding. Throws PrecisionError when no precision
/// up to max_bits separates f'(x) from zero.
inline NewtonBound newton_bound(Evaluator& ev, const ComplexBig& x, const BigFloat* want = nullptr,
                                unsigned max_bits = 1024) {
    std::optional<NewtonBound> last;
    for (unsigned bits : precision_ladder(point_bits(x), max_bits)) {
        auto nb = newton_bound_at(ev, x, bits);
        if (!nb) continue;
        last = std::move(nb);
        if (!want || !last->rounding_limited || last->beta <= *want) break;
    }
    if (!last) throw PrecisionError("derivative indistinguishable from zero");
    return std::move(*last);
}

/// Rigorous upper bound on beta(f, x) = |f(x) / f'(x)|.
inline BigFloat beta(const Polynomial& f, const ComplexBig& x) {
    Evaluator ev(f);
    return newton_bound(ev, x).beta;
}

/// Rigorous upper bound on gamma(f, x), from one Taylor shift.
inline BigFloat gamma(Evaluator& ev, const ComplexBig& x, unsigned max_bits = 1024) {
    for (unsigned bits : precision_ladder(point_bits(x), max_bits)) {
        if (auto g = gamma_at(ev, x, bits)) return std::move(*g);
    }
    throw PrecisionError("derivative indistinguishable from zero");
}
inline BigFloat gamma(const Polynomial& f, const ComplexBig& x) {
    Evaluator ev(f);
    return gamma(ev, x);
}

inline ComplexBig make_point(double re, double im, Precision prec = kDoublePrecision) {
    return {BigFloat(re, prec), BigFloat(im, prec)};
}

}  // namespace certroots
