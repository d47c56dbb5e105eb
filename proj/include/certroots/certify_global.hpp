#pragma once

// Global certification from a full set of N approximations.

#include <optional>
#include <string>
#include <vector>

#include "certroots/bounds.hpp"
#include "certroots/certify_alpha.hpp"
#include "certroots/geometry.hpp"

namespace certroots {

enum class DiskKind { newton, gerschgorin };

inline const char* to_string(DiskKind k) { return k == DiskKind::newton ? "newton" : "gerschgorin"; }

struct RealInterval {
    BigFloat lo;
    BigFloat hi;
};

struct InclusionDisk {
    ComplexBig center;
    BigFloat radius{kMagPrecision};  // upper bound
    DiskKind kind = DiskKind::newton;
    size_t index = 0;
    size_t component_id = 0;
    RealVerdict real = RealVerdict::undecided;
    std::optional<RealInterval> real_interval;
};

/// B(x, N beta): contains at least one root of f.
inline InclusionDisk newton_radius(Evaluator& ev, const ComplexBig& x, size_t index = 0) {
    const auto nb = newton_bound(ev, x);
    InclusionDisk d;
    d.center = x;
    d.radius = mag::mul_up(nb.beta, mag::make_mag(static_cast<double>(ev.degree())));
    d.kind = DiskKind::newton;
    d.index = index;
    return d;
}
inline InclusionDisk newton_radius(const Polynomial& f, const ComplexBig& x) {
    Evaluator ev(f);
    return newton_radius(ev, x);
}

struct SecularWeights {
    std::vector<ComplexBig> points;
    std::vector<BigBall> w;  // enclosures of w_i
};

namespace detail {

/// A double ball times 2^exp, so long products neither overflow nor underflow.
struct ScaledBall {
    DoubleBall b = DoubleBall::real(1.0, kDoublePrecision);
    long exp = 0;

    void normalize() {
        const double m = std::max({std::abs(b.re()), std::abs(b.im()), b.rad()});
        if (m == 0 || !std::isfinite(m)) return;
        const int e = std::ilogb(m);
        if (e > -200 && e < 200) return;
        auto scale = [&](double v, double& err) {
            const double s = std::ldexp(v, -e);
            if (std::ldexp(s, e) != v) err = mag::add_up(err, 0x1p-1074);
            return s;
        };
        double err = 0;
        const double re = scale(b.re(), err);
        const double im = scale(b.im(), err);
        double rad = b.rad() == 0 ? 0.0 : std::max(std::ldexp(b.rad(), -e), 0x1p-1074);
        if (std::ldexp(rad, e) < b.rad()) rad = mag::next_up(rad);
        b = DoubleBall(re, im, mag::add_up(rad, err));
        exp += e;
    }

    BigBall to_big(Precision prec) const {
        BigFloat re(b.re(), prec), im(b.im(), prec), rad(b.rad(), kMagPrecision);
        mpfr_mul_2si(re.get(), re.get(), exp, MPFR_RNDN);
        mpfr_mul_2si(im.get(), im.get(), exp, MPFR_RNDN);
        mpfr_mul_2si(rad.get(), rad.get(), exp, MPFR_RNDU);
        return {std::move(re), std::move(im), std::move(rad)};
    }
};

/// Secular weight of point i in ball arithmetic at a given precision.
inline BigBall secular_weight_big(Evaluator& ev, const std::vector<ComplexBig>& pts, size_t i, unsigned bits) {
    const Precision prec{bits};
    const auto& fb = ev.at(bits);
    const auto xi = BigBall::from_point(pts[i], prec);
    BigBall prod = BigBall::real(1.0, prec);
    for (size_t j = 0; j < pts.size(); ++j) {
        if (j == i) continue;
        prod = prod * (xi - BigBall::from_point(pts[j], prec));
    }
    const auto lead = fb.coeffs().back();
    const auto fx = evaluate(fb, xi);
    return -(fx / (lead * prod));
}

}  // namespace detail

/// w_i = -f(x_i) / (a_N prod_{j != i} (x_i - x_j)), the weights of the
/// secular companion matrix of the monic form of f.
inline SecularWeights secular_weights(Evaluator& ev, const std::vector<ComplexBig>& pts) {
    const size_t n = pts.size();
    if (static_cast<int>(n) != ev.degree()) throw InputError("secular weights need exactly N points");
    SecularWeights sw;
    sw.points = pts;
    sw.w.reserve(n);
    const auto& hw = ev.hardware();
    std::vector<DoubleBall> xs;
    bool fast = true;
    for (const auto& p : pts) {
        xs.push_back(DoubleBall::from_point(p, kDoublePrecision));
        fast = fast && xs.back().is_finite();
    }
    const DoubleBall lead = hw.coeffs().back();
    for (size_t i = 0; i < n; ++i) {
        std::optional<BigBall> w;
        if (fast && lead.is_finite()) {
            detail::ScaledBall prod;
            for (size_t j = 0; j < n && prod.b.is_finite(); ++j) {
                if (j == i) continue;
                prod.b = prod.b * (xs[i] - xs[j]);
                prod.normalize();
            }
            prod.b = prod.b * lead;
            prod.normalize();
            const auto fx = evaluate(hw, xs[i]);
            if (prod.b.is_finite() && !prod.b.contains_zero() && fx.is_finite()) {
                detail::ScaledBall q;
                q.b = -(fx / prod.b);
                q.exp = -prod.exp;
                if (q.b.is_finite()) w = q.to_big(Precision{64});
            }
        }
        for (unsigned bits = std::max(256u, point_bits(pts[i])); !w && bits <= 4096; bits *= 2) {
            auto b = detail::secular_weight_big(ev, pts, i, bits);
            if (b.is_finite()) w = std::move(b);
        }
        if (!w) throw PrecisionError("points are not distinguishable; secular weights undefined");
        sw.w.push_back(std::move(*w));
    }
    return sw;
}
inline SecularWeights secular_weights(const Polynomial& f, const std::vector<ComplexBig>& pts) {
    Evaluator ev(f);
    return secular_weights(ev, pts);
}

struct ClusterReport {
    std::vector<std::vector<size_t>> components;  // disk indices; a k-disk component holds exactly k roots
};

struct GerschgorinResult {
    std::vector<InclusionDisk> disks;
    ClusterReport clusters;
};

/// Disks B(x_i, N |w_i|) and the connected components of their union.
inline GerschgorinResult gerschgorin_disks(const SecularWeights& sw) {
    const size_t n = sw.points.size();
    GerschgorinResult out;
    std::vector<double> radii;
    const BigFloat nn = mag::make_mag(static_cast<double>(n));
    for (size_t i = 0; i < n; ++i) {
        InclusionDisk d;
        d.center = sw.points[i];
        d.radius = mag::mul_up(sw.w[i].abs_upper(), nn);
        d.kind = DiskKind::gerschgorin;
        d.index = i;
        radii.push_back(d.radius.to_double(Round::up));
        out.disks.push_back(std::move(d));
    }
    const DiskCloud cloud(sw.points, radii);
    const auto comp = cloud.components();
    size_t count = 0;
    for (auto c : comp) count = std::max(count, c + 1);
    out.clusters.components.assign(count, {});
    for (size_t i = 0; i < n; ++i) {
        out.disks[i].component_id = comp[i];
        out.clusters.components[comp[i]].push_back(i);
    }
    return out;
}

/// Newton-radius bounds beta_i (upper) for all points.
inline std::vector<BigFloat> newton_betas(Evaluator& ev, const std::vector<ComplexBig>& pts) {
    std::vector<BigFloat> b;
    b.reserve(pts.size());
    for (const auto& x : pts) b.push_back(newton_bound(ev, x).beta);
    return b;
}

inline std::vector<double> to_doubles_up(const std::vector<BigFloat>& v, double scale = 1.0) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(mag::mul_up(x.to_double(Round::up), scale));
    return out;
}

struct TilliResult {
    bool applicable = true;  // N >= 4
    bool certified = false;
    std::optional<std::pair<size_t, size_t>> failing_pair;
};

/// |x_i - x_j| > N (3N - 1) (beta_i + beta_j) for all i != j certifies every
/// x_i as an approximate root with pairwise distinct associated roots.
inline TilliResult tilli_certify(const std::vector<ComplexBig>& pts, const std::vector<BigFloat>& betas) {
    const size_t n = pts.size();
    TilliResult r;
    if (n < 4) {
        r.applicable = false;
        return r;
    }
    const DiskCloud cloud(pts, to_doubles_up(betas));
    const double nd = static_cast<double>(n);
    const auto bad = cloud.first_unseparated(nd * (3 * nd - 1));
    r.certified = bad.first == n;
    if (!r.certified) r.failing_pair = bad;
    return r;
}

struct RealClassification {
    std::vector<RealVerdict> verdicts;
    std::vector<std::optional<RealInterval>> intervals;
    std::vector<std::optional<size_t>> partner;  // conjugate partner of nonreal roots
    bool disks_disjoint = false;
    size_t undecided() const {
        size_t u = 0;
        for (auto v : verdicts) u += v == RealVerdict::undecided;
        return u;
    }
    size_t real_count() const {
        size_t c = 0;
        for (auto v : verdicts) c += v == RealVerdict::real;
        return c;
    }
};

/// Reality test over the Newton disks D_i = B(x_i, N beta_i). A root is real
/// when (1) |Im x_i| <= N beta_i, (2) conj(D_i) is box-separated from every
/// D_j, j != i, and (3) all disks are pairwise disjoint, so each holds
/// exactly one root; its root lies in [Re x_i - N beta_i, Re x_i + N beta_i].
/// A root is nonreal when D_i misses the real axis, (3) holds, and exactly
/// one conjugate partner disk is found.
inline RealClassification classify_real_global(const std::vector<ComplexBig>& pts, const std::vector<BigFloat>& betas) {
    const size_t n = pts.size();
    RealClassification rc;
    rc.verdicts.assign(n, RealVerdict::undecided);
    rc.intervals.assign(n, std::nullopt);
    rc.partner.assign(n, std::nullopt);
    const double nd = static_cast<double>(n);
    const DiskCloud cloud(pts, to_doubles_up(betas, nd));
    bool disjoint = true;
    std::vector<std::vector<size_t>> clash(n);
    cloud.for_near_pairs(1.0, [&](size_t i, size_t j) {
        if (!cloud.separated(i, j)) disjoint = false;
        if (!cloud.conj_box_separated(i, j)) {
            clash[i].push_back(j);
            clash[j].push_back(i);
        }
    });
    rc.disks_disjoint = disjoint;
    if (!disjoint) return rc;
    for (size_t i = 0; i < n; ++i) {
        if (cloud.imag_within(i) && clash[i].empty()) {
            rc.verdicts[i] = RealVerdict::real;
            const BigFloat& re = pts[i].re;
            const Precision p{re.precision().bits + 64};
            const BigFloat r = mag::to_bigfloat(cloud.radius(i));
            RealInterval iv{BigFloat(p), BigFloat(p)};
            mpfr_sub(iv.lo.get(), re.get(), r.get(), MPFR_RNDD);
            mpfr_add(iv.hi.get(), re.get(), r.get(), MPFR_RNDU);
            rc.intervals[i] = std::move(iv);
        } else if (cloud.imag_exceeds(i) && clash[i].size() == 1) {
            rc.verdicts[i] = RealVerdict::nonreal;
            rc.partner[i] = clash[i].front();
        }
    }
    return rc;
}

/// 6N over a certified lower bound of the minimal root separation, from
/// disks that each hold exactly one root. Undefined (nullopt) when the
/// separation bound is not positive.
inline std::optional<BigFloat> gamma_M(const std::vector<ComplexBig>& pts, const std::vector<double>& radii) {
    const size_t n = pts.size();
    if (n < 2) return std::nullopt;
    const DiskCloud cloud(pts, radii);
    const BigFloat gap = cloud.min_gap_lower();
    if (!(gap > mag::zero<BigFloat>())) return std::nullopt;
    return mag::div_up(mag::make_mag(6.0 * static_cast<double>(n)), gap);
}

/// Full global certificate of a point set.
struct GlobalReport {
    std::vector<BigFloat> betas;
    std::vector<InclusionDisk> disks;  // Newton disks with verdicts
    TilliResult tilli;
    RealClassification real;
    std::optional<GerschgorinResult> gerschgorin;
};

inline GlobalReport certify_global_all(Evaluator& ev, const std::vector<ComplexBig>& pts, bool with_gerschgorin) {
    GlobalReport rep;
    rep.betas = newton_betas(ev, pts);
    rep.tilli = tilli_certify(pts, rep.betas);
    rep.real = classify_real_global(pts, rep.betas);
    const BigFloat nn = mag::make_mag(static_cast<double>(pts.size()));
    const auto radii = to_doubles_up(rep.betas, static_cast<double>(pts.size()));
    const auto comp = DiskCloud(pts, radii).components();
    for (size_t i = 0; i < pts.size(); ++i) {
        InclusionDisk d;
        d.center = pts[i];
        d.radius = mag::mul_up(rep.betas[i], nn);
        d.kind = DiskKind::newton;
        d.index = i;
        d.component_id = comp[i];
        d.real = rep.real.verdicts[i];
        d.real_interval = rep.real.intervals[i];
        rep.disks.push_back(std::move(d));
    }
    if (with_gerschgorin) rep.gerschgorin = gerschgorin_disks(secular_weights(ev, pts));
    return rep;
}

}  // namespace certroots
