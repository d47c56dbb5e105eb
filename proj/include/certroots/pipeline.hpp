#pragma once

// solve -> certify -> classify, with refinement rounds for roots that fail.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "certroots/aberth.hpp"
#include "certroots/certify_alpha.hpp"
#include "certroots/certify_global.hpp"

namespace certroots {

struct CountOptions {
    double target_relative_radius = 1e-12;
    int max_rounds = 3;
    bool compute_gamma = false;     // mean alpha-theory gamma at the roots (O(N^2) per root)
    bool alpha_crosscheck = false;  // also run the alpha certifier and compare verdicts
};

struct CertifiedRoot {
    ComplexBig point;
    BigFloat radius{kMagPrecision};  // Newton radius N beta
    RealVerdict verdict = RealVerdict::undecided;
    std::optional<RealInterval> interval;
};

struct CountResult {
    bool fully_certified = false;
    std::vector<CertifiedRoot> roots;
    size_t real_count = 0;
    size_t positive_count = 0;
    size_t negative_count = 0;
    size_t zero_count = 0;  // real roots whose interval is {0}
    int rounds = 0;
    unsigned max_precision_bits = 53;
    std::optional<double> gamma_M;
    std::optional<double> gamma_mean;
    std::optional<bool> alpha_agrees;
    std::string failure;
};

namespace detail {

enum class Sign { positive, negative, zero, unknown };

inline Sign interval_sign(const RealInterval& iv) {
    if (iv.lo.sign() > 0) return Sign::positive;
    if (iv.hi.sign() < 0) return Sign::negative;
    if (iv.lo.is_zero() && iv.hi.is_zero()) return Sign::zero;
    return Sign::unknown;
}

}  // namespace detail

/// Certified count of the real roots of a real polynomial. Roots that fail
/// the Tilli test or stay undecided are re-iterated with a tighter target at
/// higher precision, up to max_rounds times; after that the record is
/// partial.
inline CountResult count_real_certified(const Polynomial& f, const CountOptions& opt = {}) {
    const size_t n = static_cast<size_t>(f.degree());
    if (f.degree() < 1) throw InputError("count-real needs degree >= 1");
    CountResult res;
    SolveOptions so;
    so.target_relative_radius = opt.target_relative_radius;
    auto solved = aberth_solve(f, so);
    std::vector<ComplexBig> pts;
    for (auto& a : solved.approximations) pts.push_back(a.point);

    Evaluator ev(f);
    std::vector<BigFloat> betas;
    RealClassification rc;
    for (int round = 0;; ++round) {
        res.rounds = round;
        std::vector<char> redo(n, 0);
        betas.clear();
        for (size_t i = 0; i < n; ++i) {
            try {
                betas.push_back(newton_bound(ev, pts[i]).beta);
            } catch (const PrecisionError&) {
                betas.push_back(mag::infinity<BigFloat>());
                redo[i] = 1;
            }
        }
        bool ok = true;
        if (n >= 4) {
            const DiskCloud cloud(pts, to_doubles_up(betas));
            const double nd = static_cast<double>(n);
            cloud.for_near_pairs(nd * (3 * nd - 1), [&](size_t i, size_t j) {
                if (!cloud.separated(i, j, nd * (3 * nd - 1))) {
                    redo[i] = redo[j] = 1;
                    ok = false;
                }
            });
        } else {
            // Below degree 4 the isolation corollary does not apply; alpha
            // certification and pairwise distinctness stand in for it.
            std::vector<AlphaCertificate> certs;
            for (const auto& x : pts) certs.push_back(alpha_certify(ev, x));
            const auto d = certify_all_distinct(certs);
            for (auto i : d.uncertified) redo[i] = 1;
            for (auto [i, j] : d.failing_pairs) redo[i] = redo[j] = 1;
            ok = d.all_distinct;
        }
        rc = classify_real_global(pts, betas);
        for (size_t i = 0; i < n; ++i) {
            if (rc.verdicts[i] == RealVerdict::undecided) {
                redo[i] = 1;
                ok = false;
            } else if (rc.intervals[i] && detail::interval_sign(*rc.intervals[i]) == detail::Sign::unknown) {
                redo[i] = 1;
                ok = false;
            }
        }
        if (ok && n < 4) ok = rc.undecided() == 0;
        if (ok) {
            res.fully_certified = true;
            break;
        }
        if (round >= opt.max_rounds) break;
        // If the disks overlap anywhere every verdict is withheld; refine all
        // roots involved in a failing pair, or everything when none is known.
        bool any = false;
        for (auto r : redo) any = any || r;
        if (!any) std::fill(redo.begin(), redo.end(), 1);
        SolveOptions ro;
        ro.target_relative_radius = opt.target_relative_radius * std::pow(1e-8, round + 1);
        ro.max_precision_bits = 8192;
        const unsigned start = round == 0 ? 113u : 256u << (round - 1);
        auto refined = aberth_refine(f, pts, redo, ro, start);
        for (size_t i = 0; i < n; ++i) pts[i] = refined.approximations[i].point;
    }

    res.roots.resize(n);
    for (size_t i = 0; i < n; ++i) {
        auto& r = res.roots[i];
        r.point = pts[i];
        r.radius = mag::mul_up(betas[i], mag::make_mag(static_cast<double>(n)));
        r.verdict = rc.verdicts[i];
        r.interval = rc.intervals[i];
        res.max_precision_bits = std::max(res.max_precision_bits, point_bits(pts[i]));
        if (r.verdict == RealVerdict::real) {
            ++res.real_count;
            switch (detail::interval_sign(*r.interval)) {
                case detail::Sign::positive:
                    ++res.positive_count;
                    break;
                case detail::Sign::negative:
                    ++res.negative_count;
                    break;
                case detail::Sign::zero:
                    ++res.zero_count;
                    break;
                default:
                    break;
            }
        }
    }
    if (!res.fully_certified) res.failure = "roots left uncertified or undecided after refinement";
    if (res.fully_certified && n >= 2) {
        // Each Newton disk holds exactly one root, so they are certified
        // enclosures for the separation bound.
        if (auto g = gamma_M(pts, to_doubles_up(betas, static_cast<double>(n)))) res.gamma_M = g->to_double(Round::up);
    }
    if (opt.compute_gamma) {
        double sum = 0;
        for (const auto& x : pts) sum += gamma(ev, x).to_double(Round::up);
        res.gamma_mean = sum / static_cast<double>(n);
    }
    if (opt.alpha_crosscheck && res.fully_certified) {
        const auto ar = certify_alpha_all(ev, pts);
        bool agree = ar.distinct.all_distinct;
        for (size_t i = 0; agree && i < n; ++i) {
            const auto a = ar.certificates[i].real;
            agree = a == RealVerdict::undecided || a == rc.verdicts[i];
        }
        res.alpha_agrees = agree;
    }
    return res;
}

}  // namespace certroots
