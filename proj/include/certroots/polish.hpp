#pragma once

// Newton polishing of a single approximation until it is alpha-certified.

#include "certroots/certify_alpha.hpp"

namespace certroots {

/// Cauchy bound 1 + max |a_i / a_N| on the moduli of all roots.
inline BigFloat root_bound(const Polynomial& f) {
    BigFloat best = mag::zero<BigFloat>();
    const BigFloat lead = mag::abs_down(BigFloat(f.leading(), kMagPrecision, Round::down));
    for (int i = 0; i < f.degree(); ++i) {
        BigFloat a = mag::abs_up(BigFloat(abs(f.coeff(i)), kMagPrecision, Round::up));
        a = mag::div_up(a, lead);
        if (best < a) best = a;
    }
    return mag::add_up(best, mag::make_mag(1.0));
}

struct PolishResult {
    ComplexBig point;
    int iterations = 0;
    bool certified = false;
    bool diverged = false;
    bool stalled = false;  // f'(x) = 0 or indeterminate at every precision tried
};

/// Repeated Newton steps at `bits` precision until the alpha test passes or
/// max_iters is reached. Divergence (|x| beyond twice the root bound) stops
/// the iteration and is flagged.
inline PolishResult polish(Evaluator& ev, ComplexBig x, int max_iters, unsigned bits = 53) {
    PolishResult r;
    const BigFloat limit = mag::mul_up(root_bound(ev.poly()), mag::make_mag(2.0));
    for (;; ++r.iterations) {
        if (alpha_certify(ev, x).certified) {
            r.certified = true;
            break;
        }
        if (r.iterations >= max_iters) break;
        try {
            const auto step = bits <= 53 ? newton_step_rigorous(ev.hardware(), x) : newton_step_rigorous(ev.at(bits), x);
            if (step.outcome == NewtonOutcome::fixed_point) {
                r.stalled = true;
                break;
            }
            x = step.point;
        } catch (const PrecisionError&) {
            if (bits >= 4096) {
                r.stalled = true;
                break;
            }
            bits = bits <= 53 ? 256 : bits * 2;
            continue;
        }
        if (mag::hypot_down(x.re, x.im) > limit) {
            r.diverged = true;
            break;
        }
    }
    r.point = std::move(x);
    return r;
}

inline PolishResult polish(const Polynomial& f, const ComplexBig& x, int max_iters, unsigned bits = 53) {
    Evaluator ev(f);
    return polish(ev, x, max_iters, bits);
}

}  // namespace certroots
