#pragma once

// Aberth-Ehrlich simultaneous iteration with a per-root precision ladder.
//
// Iteration runs in point arithmetic. A root stops when its estimated Newton
// radius N*beta drops below target * |x|. A root whose residual sinks into
// rounding noise before that is carried (warm start) to the next precision
// level; roots that already met the target stay frozen.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "certroots/companion.hpp"
#include "certroots/evaluate.hpp"

namespace certroots {

struct RootApproximation {
    ComplexBig point;
    double beta = std::numeric_limits<double>::infinity();  // point estimate of |f/f'|
    unsigned precision_bits = 53;
    bool converged = false;
};

struct SolveResult {
    std::vector<RootApproximation> approximations;
    unsigned precision_used = 53;
    int iterations = 0;
    bool converged = false;
};

struct SolveOptions {
    double target_relative_radius = 1e-16;
    int max_sweeps_first_level = 500;
    int max_sweeps_per_level = 60;
    unsigned max_precision_bits = 4096;
};

/// Precision ladder 53 -> 113 -> 256 -> doubling.
inline unsigned next_precision(unsigned bits) {
    if (bits < 113) return 113;
    if (bits < 256) return 256;
    return bits * 2;
}

/// Starting points from the upper convex hull of (i, log|a_i|): every hull
/// edge (i, j) contributes j - i points on a circle of radius
/// (|a_i| / |a_j|)^(1/(j-i)), angles equispaced with an irrational offset.
inline std::vector<ComplexDouble> initial_points(const Polynomial& f) {
    const int n = f.degree();
    if (n < 1) throw InputError("initial points need degree >= 1");
    // log|a_i| from mpq via mpfr keeps huge or tiny coefficients finite.
    std::vector<int> idx;
    std::vector<double> lg;
    for (int i = 0; i <= n; ++i) {
        if (f.coeff(i) == 0) continue;
        idx.push_back(i);
        lg.push_back(log(abs(BigFloat(f.coeff(i), Precision{64}))).to_double());
    }
    std::vector<size_t> hull;
    for (size_t k = 0; k < idx.size(); ++k) {
        while (hull.size() >= 2) {
            const size_t a = hull[hull.size() - 2], b = hull.back();
            const double cross =
                (idx[b] - idx[a]) * (lg[k] - lg[a]) - (lg[b] - lg[a]) * static_cast<double>(idx[k] - idx[a]);
            if (cross >= 0) hull.pop_back();
            else break;
        }
        hull.push_back(k);
    }
    constexpr double kOffset = 0.7;
    const double two_pi = 2 * std::numbers::pi;
    std::vector<ComplexDouble> pts;
    pts.reserve(static_cast<size_t>(n));
    // Roots at zero (a_0 = ... = a_{i0-1} = 0): small circle below the smallest hull radius.
    const int i0 = idx.front();
    double smallest = std::numeric_limits<double>::infinity();
    for (size_t e = 0; e + 1 < hull.size(); ++e) {
        const size_t a = hull[e], b = hull[e + 1];
        smallest = std::min(smallest, std::exp((lg[a] - lg[b]) / (idx[b] - idx[a])));
    }
    for (int k = 0; k < i0; ++k) {
        const double r = (std::isfinite(smallest) ? smallest : 1.0) * 1e-3;
        const double th = two_pi * k / i0 + kOffset;
        pts.push_back({r * std::cos(th), r * std::sin(th)});
    }
    for (size_t e = 0; e + 1 < hull.size(); ++e) {
        const size_t a = hull[e], b = hull[e + 1];
        const int m = idx[b] - idx[a];
        double r = std::exp((lg[a] - lg[b]) / m);
        r = std::clamp(r, 1e-280, 1e280);
        for (int k = 0; k < m; ++k) {
            const double th = two_pi * k / m + two_pi * idx[a] / n + kOffset;
            pts.push_back({r * std::cos(th), r * std::sin(th)});
        }
    }
    return pts;
}

namespace detail {

enum class RootState { active, done, stalled };

inline unsigned point_bits_of(const ComplexBig& z) { return std::max(z.re.precision().bits, z.im.precision().bits); }

/// One precision level of Aberth sweeps over the roots flagged active.
/// Returns the number of sweeps used.
template <class R>
int aberth_level(const Polynomial& f, Precision prec, std::vector<ComplexBig>& points, std::vector<RootState>& state,
                 std::vector<double>& betas, double target, int max_sweeps) {
    const int n = f.degree();
    const PointPolynomial<R> fp(f, prec);
    std::vector<Complex<R>> x;
    x.reserve(points.size());
    for (const auto& p : points) x.push_back(convert_complex<R>(p, prec));
    std::vector<int> noisy(points.size(), 0);
    std::vector<char> was_active(points.size());
    for (size_t i = 0; i < points.size(); ++i) was_active[i] = state[i] == RootState::active;
    const R zero = make_real<R>(0.0, prec);
    const R one = make_real<R>(1.0, prec);
    const double nd = static_cast<double>(n);
    const double floor = target * 0x1p-900;

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        bool any = false;
        for (size_t i = 0; i < x.size(); ++i) {
            if (state[i] != RootState::active) continue;
            const auto nr = newton_ratio(fp, x[i]);
            const double beta = to_double(nr.ratio.abs());
            const double ax = to_double(x[i].abs());
            if (!nr.derivative_zero) betas[i] = beta;
            if (!nr.derivative_zero && (nd * beta <= target * ax || beta <= floor || beta == 0)) {
                state[i] = RootState::done;
                continue;
            }
            if (nr.in_noise && ++noisy[i] >= 2) {
                state[i] = RootState::stalled;
                continue;
            }
            any = true;
            Complex<R> s{zero, zero};
            for (size_t j = 0; j < x.size(); ++j) {
                if (j == i) continue;
                const Complex<R> d = x[i] - x[j];
                if (is_zero_real(d.re) && is_zero_real(d.im)) continue;
                s += Complex<R>{one, zero} / d;
            }
            Complex<R> corr;
            if (nr.derivative_zero) {
                if (is_zero_real(s.re) && is_zero_real(s.im)) continue;
                corr = Complex<R>{-one, zero} / s;
            } else {
                const Complex<R> denom = Complex<R>{one, zero} - nr.ratio * s;
                corr = (is_zero_real(denom.re) && is_zero_real(denom.im)) ? nr.ratio : nr.ratio / denom;
            }
            const Complex<R> next = x[i] - corr;
            if (is_finite_real(next.re) && is_finite_real(next.im)) x[i] = next;
        }
        if (!any) break;
    }
    for (size_t i = 0; i < x.size(); ++i) {
        if (!was_active[i]) continue;
        if (prec.is_hardware()) {
            points[i] = {BigFloat(to_double(x[i].re), kDoublePrecision), BigFloat(to_double(x[i].im), kDoublePrecision)};
        } else if constexpr (std::is_same_v<R, BigFloat>) {
            points[i] = {x[i].re, x[i].im};
        }
    }
    return sweep;
}

}  // namespace detail

namespace detail {

/// Precision ladder driver. Roots with `active` unset are held fixed and
/// keep their own precision; the others iterate from `start_bits` upward.
inline SolveResult aberth_run(const Polynomial& f, const SolveOptions& opt, std::vector<ComplexBig> points,
                              const std::vector<char>& active, unsigned start_bits) {
    const size_t n = points.size();
    std::vector<RootState> state(n);
    for (size_t i = 0; i < n; ++i) state[i] = active[i] ? RootState::active : RootState::done;
    std::vector<double> betas(n, std::numeric_limits<double>::infinity());
    std::vector<unsigned> bits(n, 0);  // level at which each root finished
    for (size_t i = 0; i < n; ++i)
        if (!active[i]) bits[i] = point_bits_of(points[i]);

    SolveResult out;
    unsigned prec_bits = start_bits;
    int sweeps = start_bits <= 53 ? opt.max_sweeps_first_level : opt.max_sweeps_per_level;
    for (;;) {
        const Precision prec{prec_bits};
        if (prec.is_hardware())
            out.iterations += aberth_level<double>(f, prec, points, state, betas, opt.target_relative_radius, sweeps);
        else
            out.iterations += aberth_level<BigFloat>(f, prec, points, state, betas, opt.target_relative_radius, sweeps);
        out.precision_used = prec_bits;
        bool pending = false;
        for (size_t i = 0; i < n; ++i) {
            if (state[i] == RootState::done) {
                if (bits[i] == 0) bits[i] = prec_bits;
                continue;
            }
            pending = true;
            state[i] = RootState::active;
        }
        if (!pending) break;
        const unsigned next = next_precision(prec_bits);
        if (next > opt.max_precision_bits) break;
        prec_bits = next;
        sweeps = opt.max_sweeps_per_level;
    }
    out.converged = true;
    out.approximations.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        const bool ok = state[i] == RootState::done;
        out.converged = out.converged && ok;
        out.approximations.push_back({points[i], betas[i], bits[i] == 0 ? prec_bits : bits[i], ok});
    }
    return out;
}

}  // namespace detail

/// Aberth iteration from Newton-polygon starting points (or from `start`),
/// escalating precision per root until every Newton radius estimate meets
/// the target or the precision budget is spent.
inline SolveResult aberth_solve(const Polynomial& f, const SolveOptions& opt = {},
                                const std::vector<ComplexBig>* start = nullptr) {
    const int n = f.degree();
    if (n < 1) throw InputError("solve needs degree >= 1");
    std::vector<ComplexBig> points;
    if (start) {
        if (static_cast<int>(start->size()) != n) throw InputError("warm start must supply N points");
        points = *start;
    } else {
        for (const auto& z : initial_points(f))
            points.push_back({BigFloat(z.re, kDoublePrecision), BigFloat(z.im, kDoublePrecision)});
    }
    return detail::aberth_run(f, opt, std::move(points), std::vector<char>(static_cast<size_t>(n), 1), 53);
}

/// Continues the iteration for the roots flagged in `which` only, starting at
/// `start_bits`; the other points stay fixed.
inline SolveResult aberth_refine(const Polynomial& f, const std::vector<ComplexBig>& points,
                                 const std::vector<char>& which, const SolveOptions& opt, unsigned start_bits) {
    if (static_cast<int>(points.size()) != f.degree()) throw InputError("refinement needs N points");
    return detail::aberth_run(f, opt, points, which, start_bits);
}

/// Eigenvalues of the companion matrix as a SolveResult at double precision.
inline SolveResult solve_qr(const Polynomial& f) {
    const auto eig = companion_eigenvalues(f);
    SolveResult out;
    out.precision_used = 53;
    out.converged = true;
    const PointPolynomial<double> fp(f, kDoublePrecision);
    for (const auto& z : eig) {
        const auto nr = newton_ratio(fp, ComplexDouble{z.real(), z.imag()});
        const double beta = nr.derivative_zero ? std::numeric_limits<double>::infinity() : nr.ratio.abs();
        out.approximations.push_back(
            {{BigFloat(z.real(), kDoublePrecision), BigFloat(z.imag(), kDoublePrecision)}, beta, 53, true});
    }
    return out;
}

}  // namespace certroots
