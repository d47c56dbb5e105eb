#pragma once

// Smale alpha-theory certification of single points, pairwise distinctness,
// and the conjugate-disk reality test.

#include <string>
#include <vector>

#include "certroots/bounds.hpp"
#include "certroots/geometry.hpp"

namespace certroots {

enum class RealVerdict { real, nonreal, undecided };

inline const char* to_string(RealVerdict v) {
    switch (v) {
        case RealVerdict::real:
            return "real";
        case RealVerdict::nonreal:
            return "nonreal";
        default:
            return "undecided";
    }
}

struct AlphaCertificate {
    ComplexBig point;
    BigFloat alpha{kMagPrecision};  // upper bounds
    BigFloat beta{kMagPrecision};
    BigFloat gamma{kMagPrecision};
    BigFloat radius{kMagPrecision};  // 2 * beta, an upper bound on |point - associated root|
    bool certified = false;
    RealVerdict real = RealVerdict::undecided;
    unsigned precision_bits = 53;
    std::string reason;
};

/// Lower enclosure of (13 - 3 sqrt(17)) / 4 = 0.1576...
inline BigFloat alpha_threshold_lower() {
    BigFloat s(kMagPrecision);
    mpfr_sqrt_ui(s.get(), 17, MPFR_RNDU);
    mpfr_mul_ui(s.get(), s.get(), 3, MPFR_RNDU);
    BigFloat t(kMagPrecision);
    mpfr_ui_sub(t.get(), 13, s.get(), MPFR_RNDD);
    mpfr_div_ui(t.get(), t.get(), 4, MPFR_RNDD);
    return t;
}

/// alpha = beta * gamma with certification iff alpha_upper < threshold_lower.
/// Precision escalates while the test fails and the f(x) enclosure is
/// dominated by rounding.
inline AlphaCertificate alpha_certify(Evaluator& ev, const ComplexBig& x, unsigned max_bits = 1024) {
    AlphaCertificate c;
    c.point = x;
    static const BigFloat threshold = alpha_threshold_lower();
    bool have = false;
    for (unsigned bits : precision_ladder(point_bits(x), max_bits)) {
        auto nb = newton_bound_at(ev, x, bits);
        if (!nb) {
            c.reason = "derivative indistinguishable from zero";
            continue;
        }
        auto g = gamma_at(ev, x, bits);
        if (!g) continue;
        c.beta = nb->beta;
        c.gamma = *g;
        c.alpha = mag::mul_up(c.beta, c.gamma);
        c.radius = mag::mul_up(c.beta, mag::make_mag(2.0));
        c.precision_bits = bits;
        c.certified = c.alpha < threshold;
        c.reason = c.certified ? "" : "alpha above threshold";
        have = true;
        if (c.certified || !nb->rounding_limited) break;
    }
    if (!have) {
        c.beta = c.gamma = c.alpha = c.radius = mag::infinity<BigFloat>();
        if (c.reason.empty()) c.reason = "derivative indistinguishable from zero";
    }
    return c;
}

inline AlphaCertificate alpha_certify(const Polynomial& f, const ComplexBig& x) {
    Evaluator ev(f);
    return alpha_certify(ev, x);
}

/// |x1 - x2| > 2 (beta1 + beta2): the associated roots differ.
inline bool distinct_pair(const AlphaCertificate& a, const AlphaCertificate& b) {
    if (!a.certified || !b.certified) return false;
    const BigFloat d = mag::hypot_down(detail::diff_abs_lower(a.point.re, b.point.re),
                                       detail::diff_abs_lower(a.point.im, b.point.im));
    return d > mag::add_up(a.radius, b.radius);
}

struct DistinctnessReport {
    bool all_distinct = false;
    size_t certified_count = 0;
    std::vector<std::pair<size_t, size_t>> failing_pairs;  // at most a handful, for diagnostics
    std::vector<size_t> uncertified;
};

inline std::vector<double> radii_up(const std::vector<AlphaCertificate>& certs) {
    std::vector<double> r;
    r.reserve(certs.size());
    for (const auto& c : certs) r.push_back(c.radius.to_double(Round::up));
    return r;
}

inline std::vector<ComplexBig> points_of(const std::vector<AlphaCertificate>& certs) {
    std::vector<ComplexBig> p;
    p.reserve(certs.size());
    for (const auto& c : certs) p.push_back(c.point);
    return p;
}

/// All pairs of certified points pass distinct_pair. With N certificates for
/// a degree-N polynomial this accounts for every root.
inline DistinctnessReport certify_all_distinct(const std::vector<AlphaCertificate>& certs) {
    DistinctnessReport rep;
    for (size_t i = 0; i < certs.size(); ++i) {
        if (certs[i].certified) ++rep.certified_count;
        else rep.uncertified.push_back(i);
    }
    const auto pts = points_of(certs);
    const DiskCloud cloud(pts, radii_up(certs));
    cloud.for_near_pairs(1.0, [&](size_t i, size_t j) {
        if (!cloud.separated(i, j, 1.0) && rep.failing_pairs.size() < 16) rep.failing_pairs.emplace_back(std::min(i, j), std::max(i, j));
    });
    rep.all_distinct = rep.uncertified.empty() && rep.failing_pairs.empty();
    return rep;
}

/// Root i is real iff conj(D_i) misses every D_j, j != i, where
/// D = B(x, 2 beta): the conjugate of its root must then be itself. It is
/// nonreal iff D_i misses the real axis. Requires all_distinct.
inline void classify_real_alpha(std::vector<AlphaCertificate>& certs) {
    const auto pts = points_of(certs);
    const DiskCloud cloud(pts, radii_up(certs));
    const size_t n = certs.size();
    std::vector<char> conj_clash(n, 0);
    cloud.for_near_pairs(1.0, [&](size_t i, size_t j) {
        if (!cloud.conj_separated(i, j, 1.0)) conj_clash[i] = conj_clash[j] = 1;
    });
    for (size_t i = 0; i < n; ++i) {
        if (!certs[i].certified) {
            certs[i].real = RealVerdict::undecided;
        } else if (cloud.imag_exceeds(i, 1.0)) {
            certs[i].real = RealVerdict::nonreal;
        } else if (!conj_clash[i]) {
            certs[i].real = RealVerdict::real;
        } else {
            certs[i].real = RealVerdict::undecided;
        }
    }
}

/// Certificates for a full point set; distinctness and reality included.
struct AlphaReport {
    std::vector<AlphaCertificate> certificates;
    DistinctnessReport distinct;
};

inline AlphaReport certify_alpha_all(Evaluator& ev, const std::vector<ComplexBig>& points) {
    AlphaReport rep;
    rep.certificates.reserve(points.size());
    for (const auto& x : points) rep.certificates.push_back(alpha_certify(ev, x));
    rep.distinct = certify_all_distinct(rep.certificates);
    if (rep.distinct.all_distinct) classify_real_alpha(rep.certificates);
    return rep;
}

}  // namespace certroots
