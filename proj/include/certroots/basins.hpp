#pragma once

// Certifiable regions on a rectangular grid: which grid points are proved
// approximate roots, and of which root.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "certroots/experiments.hpp"

namespace certroots {

enum class BasinMethod { alpha, tilli };

inline BasinMethod parse_basin_method(const std::string& s) {
    if (s == "alpha") return BasinMethod::alpha;
    if (s == "tilli") return BasinMethod::tilli;
    throw InputError("unknown basin method '" + s + "' (expected alpha or tilli)");
}
inline const char* to_string(BasinMethod m) { return m == BasinMethod::alpha ? "alpha" : "tilli"; }

struct GridSpec {
    double re_lo = 0, re_hi = 11;
    double im_lo = -1, im_hi = 1;
    int nx = 100, ny = 50;
    BasinMethod method = BasinMethod::alpha;

    void validate() const {
        if (nx < 2 || ny < 2) throw InputError("grid resolution must be at least 2 x 2");
        if (!(re_lo < re_hi) || !(im_lo < im_hi)) throw InputError("grid ranges must satisfy lo < hi");
    }
    /// Lattice point (i, k), endpoints included.
    double re(int i) const { return re_lo + (re_hi - re_lo) * i / (nx - 1); }
    double im(int k) const { return im_lo + (im_hi - im_lo) * k / (ny - 1); }
};

struct BasinCell {
    double re = 0, im = 0;
    bool certified = false;
    std::optional<size_t> root;
};

struct BasinGrid {
    GridSpec spec;
    std::vector<CertifiedRoot> roots;
    std::vector<BasinCell> cells;     // row-major in k (imaginary), then i
    std::vector<size_t> per_root;     // certified cells associated with each root
};

namespace detail {

/// Double enclosure of a certified root disk: centre rounded to nearest and
/// the conversion error folded into the radius.
struct Enclosure {
    double re, im, rad;
};

inline Enclosure enclosure_of(const CertifiedRoot& r) {
    const double cr = r.point.re.to_double(), ci = r.point.im.to_double();
    const BigFloat er = diff_abs_upper(r.point.re, BigFloat(cr, kMagPrecision));
    const BigFloat ei = diff_abs_upper(r.point.im, BigFloat(ci, kMagPrecision));
    const BigFloat rad = mag::add_up(r.radius, mag::add_up(er, ei));
    return {cr, ci, rad.to_double(Round::up)};
}

inline double abs_diff_up(double a, double b) { return std::max(mag::sub_up(a, b), mag::sub_up(b, a)); }
inline double abs_diff_down(double a, double b) { return std::max({mag::sub_down(a, b), mag::sub_down(b, a), 0.0}); }

inline double dist_up(double re, double im, const Enclosure& e) {
    return mag::add_up(mag::hypot_up(abs_diff_up(re, e.re), abs_diff_up(im, e.im)), e.rad);
}
inline double dist_down(double re, double im, const Enclosure& e) {
    return std::max(0.0, mag::sub_down(mag::hypot_down(abs_diff_down(re, e.re), abs_diff_down(im, e.im)), e.rad));
}

/// Every root whose enclosure may meet the disk B(x, r).
inline std::vector<size_t> roots_meeting(double re, double im, double r, const std::vector<Enclosure>& enc) {
    std::vector<size_t> out;
    for (size_t j = 0; j < enc.size(); ++j)
        if (dist_down(re, im, enc[j]) <= r) out.push_back(j);
    return out;
}

/// Tilli isolation against certified enclosures: some root is 3(N-1) times
/// closer than every other root, in rigorous upper/lower distance bounds.
inline std::optional<size_t> tilli_cell(double re, double im, const std::vector<Enclosure>& enc) {
    const size_t n = enc.size();
    if (n < 2) return n == 1 ? std::optional<size_t>(0) : std::nullopt;
    size_t best = 0;
    double best_up = mag::kInf;
    for (size_t j = 0; j < n; ++j) {
        const double u = dist_up(re, im, enc[j]);
        if (u < best_up) best_up = u, best = j;
    }
    const double lhs = mag::mul_up(3.0 * static_cast<double>(n - 1), best_up);
    for (size_t j = 0; j < n; ++j)
        if (j != best && !(lhs <= dist_down(re, im, enc[j]))) return std::nullopt;
    return best;
}

/// Alpha test at the grid point; the associated root is the unique
/// enclosure meeting B(y, 2 beta(y)) along the Newton iterates y of x.
inline BasinCell alpha_cell(Evaluator& ev, double re, double im, const std::vector<Enclosure>& enc, int max_polish) {
    BasinCell cell{re, im, false, std::nullopt};
    ComplexBig y = make_point(re, im);
    auto cert = alpha_certify(ev, y);
    cell.certified = cert.certified;
    if (!cert.certified) return cell;
    const PointPolynomial<double> pp(ev.poly(), kDoublePrecision);
    for (int it = 0; it <= max_polish; ++it) {
        const auto hits = roots_meeting(y.re.to_double(), y.im.to_double(), cert.radius.to_double(Round::up), enc);
        if (hits.size() == 1) {
            cell.root = hits[0];
            return cell;
        }
        if (it == max_polish) break;
        const auto step = newton_step(pp, Complex<double>{y.re.to_double(), y.im.to_double()});
        if (!std::isfinite(step.re) || !std::isfinite(step.im)) break;
        y = make_point(step.re, step.im);
        cert = alpha_certify(ev, y);
        if (!cert.certified) break;
    }
    return cell;
}

}  // namespace detail

/// Certifies all roots first (the enclosures must be isolating), then tests
/// every grid point. Throws UncertifiedError when the roots cannot be
/// certified.
inline BasinGrid basin_grid(const Polynomial& f, const GridSpec& spec, unsigned workers = 1, int max_polish = 40) {
    spec.validate();
    BasinGrid g;
    g.spec = spec;
    CountOptions co;
    co.target_relative_radius = 1e-15;
    auto cr = count_real_certified(f, co);
    if (!cr.fully_certified) throw UncertifiedError("roots could not be certified: " + cr.failure);
    g.roots = std::move(cr.roots);
    std::vector<detail::Enclosure> enc;
    for (const auto& r : g.roots) enc.push_back(detail::enclosure_of(r));
    const size_t total = static_cast<size_t>(spec.nx) * static_cast<size_t>(spec.ny);
    g.cells = parallel_map<BasinCell>(total, workers, [&](size_t idx) {
        const int i = static_cast<int>(idx % static_cast<size_t>(spec.nx));
        const int k = static_cast<int>(idx / static_cast<size_t>(spec.nx));
        const double re = spec.re(i), im = spec.im(k);
        if (spec.method == BasinMethod::tilli) {
            BasinCell c{re, im, false, std::nullopt};
            c.root = detail::tilli_cell(re, im, enc);
            c.certified = c.root.has_value();
            return c;
        }
        // Evaluators cache per-precision state and are not shared across threads.
        Evaluator ev(f);
        return detail::alpha_cell(ev, re, im, enc, max_polish);
    });
    g.per_root.assign(g.roots.size(), 0);
    for (const auto& c : g.cells)
        if (c.certified && c.root) ++g.per_root[*c.root];
    return g;
}

/// Relative standard deviation (sample std over mean) of a list of counts.
inline double relative_std(const std::vector<size_t>& counts) {
    std::vector<double> v(counts.begin(), counts.end());
    const auto [m, var] = mean_variance(v);
    return m > 0 ? std::sqrt(var) / m : std::numeric_limits<double>::infinity();
}

}  // namespace certroots
