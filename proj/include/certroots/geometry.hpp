#pragma once

// Rigorous pairwise predicates over a cloud of disks with exact centers.
//
// Centers are arbitrary-precision points; radii are double upper bounds. A
// predicate returns true only when the inequality is proven. Each test first
// runs in double with the center conversion error folded in, and falls back
// to MPFR only when the double test is inconclusive and the centers were not
// representable exactly.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "certroots/ball.hpp"

namespace certroots {

namespace detail {

/// Lower bound on |a - b| for exact BigFloats (toward-zero subtraction).
inline BigFloat diff_abs_lower(const BigFloat& a, const BigFloat& b) {
    BigFloat d(Precision{std::max(a.precision().bits, b.precision().bits) + 8});
    mpfr_sub(d.get(), a.get(), b.get(), MPFR_RNDZ);
    return mag::abs_down(d);
}
inline BigFloat diff_abs_upper(const BigFloat& a, const BigFloat& b) {
    BigFloat d(Precision{std::max(a.precision().bits, b.precision().bits) + 8});
    mpfr_sub(d.get(), a.get(), b.get(), MPFR_RNDA);
    return mag::abs_up(d);
}
inline BigFloat sum_abs_lower(const BigFloat& a, const BigFloat& b) {
    BigFloat d(Precision{std::max(a.precision().bits, b.precision().bits) + 8});
    mpfr_add(d.get(), a.get(), b.get(), MPFR_RNDZ);
    return mag::abs_down(d);
}

/// Union-find with path halving.
struct DisjointSets {
    std::vector<size_t> parent;
    explicit DisjointSets(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), size_t{0}); }
    size_t find(size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(size_t a, size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace detail

class DiskCloud {
   public:
    DiskCloud(const std::vector<ComplexBig>& centers, std::vector<double> radii)
        : centers_(&centers), r_(std::move(radii)) {
        const size_t n = centers.size();
        cx_.resize(n);
        cy_.resize(n);
        ex_.resize(n);
        ey_.resize(n);
        for (size_t i = 0; i < n; ++i) {
            cx_[i] = centers[i].re.to_double();
            cy_[i] = centers[i].im.to_double();
            ex_[i] = conversion_error_to_double(centers[i].re, cx_[i]);
            ey_[i] = conversion_error_to_double(centers[i].im, cy_[i]);
            lossy_ = lossy_ || ex_[i] != 0 || ey_[i] != 0 || !std::isfinite(cx_[i]) || !std::isfinite(cy_[i]);
        }
        rmax_ = 0;
        emax_ = 0;
        for (size_t i = 0; i < n; ++i) {
            rmax_ = std::max(rmax_, r_[i]);
            emax_ = std::max(emax_, ex_[i]);
        }
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), size_t{0});
        std::sort(order_.begin(), order_.end(), [&](size_t a, size_t b) { return cx_[a] < cx_[b]; });
    }

    size_t size() const { return r_.size(); }
    double radius(size_t i) const { return r_[i]; }
    const ComplexBig& center(size_t i) const { return (*centers_)[i]; }

    /// |c_i - c_j| > scale (r_i + r_j)
    bool separated(size_t i, size_t j, double scale = 1.0) const {
        const double t = threshold(i, j, scale);
        if (!std::isfinite(t)) return false;
        const auto lr = component_lower(sub_err(cx_[i], cx_[j]), ex_[i], ex_[j]);
        const auto li = component_lower(sub_err(cy_[i], cy_[j]), ey_[i], ey_[j]);
        if (mag::hypot_down(lr, li) > t) return true;
        if (!lossy_) return false;
        const auto& a = center(i);
        const auto& b = center(j);
        return mag::hypot_down(detail::diff_abs_lower(a.re, b.re), detail::diff_abs_lower(a.im, b.im)) >
               mag::to_bigfloat(t);
    }

    /// Chebyshev separation of conj(c_i) and c_j:
    /// max(|Re c_i - Re c_j|, |Im c_i + Im c_j|) > scale (r_i + r_j).
    bool conj_box_separated(size_t i, size_t j, double scale = 1.0) const {
        const double t = threshold(i, j, scale);
        if (!std::isfinite(t)) return false;
        const auto lr = component_lower(sub_err(cx_[i], cx_[j]), ex_[i], ex_[j]);
        const auto li = component_lower(add_err(cy_[i], cy_[j]), ey_[i], ey_[j]);
        if (std::max(lr, li) > t) return true;
        if (!lossy_) return false;
        const auto& a = center(i);
        const auto& b = center(j);
        const BigFloat tb = mag::to_bigfloat(t);
        return detail::diff_abs_lower(a.re, b.re) > tb || detail::sum_abs_lower(a.im, b.im) > tb;
    }

    /// Euclidean separation of conj(c_i) and c_j.
    bool conj_separated(size_t i, size_t j, double scale = 1.0) const {
        const double t = threshold(i, j, scale);
        if (!std::isfinite(t)) return false;
        const auto lr = component_lower(sub_err(cx_[i], cx_[j]), ex_[i], ex_[j]);
        const auto li = component_lower(add_err(cy_[i], cy_[j]), ey_[i], ey_[j]);
        if (mag::hypot_down(lr, li) > t) return true;
        if (!lossy_) return false;
        const auto& a = center(i);
        const auto& b = center(j);
        return mag::hypot_down(detail::diff_abs_lower(a.re, b.re), detail::sum_abs_lower(a.im, b.im)) >
               mag::to_bigfloat(t);
    }

    /// |Im c_i| > scale r_i
    bool imag_exceeds(size_t i, double scale = 1.0) const {
        const double t = mag::mul_up(scale, r_[i]);
        if (!std::isfinite(t)) return false;
        if (mag::sub_down(std::abs(cy_[i]), ey_[i]) > t) return true;
        if (ey_[i] == 0) return false;
        return mag::abs_down(center(i).im) > mag::to_bigfloat(t);
    }

    /// |Im c_i| <= scale r_i
    bool imag_within(size_t i, double scale = 1.0) const {
        const double t = mag::mul_down(scale, r_[i]);
        if (mag::add_up(std::abs(cy_[i]), ey_[i]) <= t) return true;
        if (ey_[i] == 0) return false;
        return mag::abs_up(center(i).im) <= mag::to_bigfloat(t);
    }

    /// Lower bound on |c_i - c_j| - r_i - r_j (may be negative).
    BigFloat gap_lower(size_t i, size_t j) const {
        const auto& a = center(i);
        const auto& b = center(j);
        BigFloat d = mag::hypot_down(detail::diff_abs_lower(a.re, b.re), detail::diff_abs_lower(a.im, b.im));
        return mag::sub_down(d, mag::to_bigfloat(mag::add_up(r_[i], r_[j])));
    }
    double gap_lower_fast(size_t i, size_t j) const {
        const auto lr = component_lower(sub_err(cx_[i], cx_[j]), ex_[i], ex_[j]);
        const auto li = component_lower(sub_err(cy_[i], cy_[j]), ey_[i], ey_[j]);
        return mag::sub_down(mag::hypot_down(lr, li), mag::add_up(r_[i], r_[j]));
    }

    /// Visits every pair (i, j), i != j, whose real-part gap does not already
    /// prove |c_i - c_j| > reach(i, j) with reach <= scale (r_i + r_max).
    /// Pairs are visited once each with i < j in sorted order.
    template <class Fn>
    void for_near_pairs(double scale, Fn fn) const {
        const size_t n = size();
        for (size_t a = 0; a < n; ++a) {
            const size_t i = order_[a];
            double cutoff = mag::add_up(mag::mul_up(scale, mag::add_up(r_[i], rmax_)), mag::add_up(ex_[i], emax_));
            cutoff = mag::add_up(mag::mul_up(cutoff, 1 + 0x1p-50), 0x1p-1000);
            for (size_t b = a + 1; b < n; ++b) {
                const size_t j = order_[b];
                if (std::isfinite(cutoff) && cx_[j] - cx_[i] > cutoff) break;
                fn(i, j);
            }
        }
    }

    /// First pair (i, j) failing separated(scale), or {n, n} when all pairs pass.
    std::pair<size_t, size_t> first_unseparated(double scale) const {
        std::pair<size_t, size_t> bad{size(), size()};
        bool found = false;
        for_near_pairs(scale, [&](size_t i, size_t j) {
            if (found) return;
            if (!separated(i, j, scale)) {
                bad = {std::min(i, j), std::max(i, j)};
                found = true;
            }
        });
        return bad;
    }

    /// Connected components of the union of disks (overlap unless proven
    /// disjoint). Component ids are numbered by smallest member index.
    std::vector<size_t> components() const {
        detail::DisjointSets ds(size());
        for_near_pairs(1.0, [&](size_t i, size_t j) {
            if (!separated(i, j, 1.0)) ds.unite(i, j);
        });
        std::vector<size_t> id(size(), size());
        size_t next = 0;
        std::vector<size_t> out(size());
        for (size_t i = 0; i < size(); ++i) {
            const size_t r = ds.find(i);
            if (id[r] == size()) id[r] = next++;
            out[i] = id[r];
        }
        return out;
    }

    /// Certified lower bound on min_{i != j} (|c_i - c_j| - r_i - r_j).
    BigFloat min_gap_lower() const {
        const size_t n = size();
        double best_fast = std::numeric_limits<double>::infinity();
        size_t bi = n;
        // Real-part sweep: pairs farther apart in Re than the current best
        // gap plus both radii cannot improve it.
        for (size_t a = 0; a < n; ++a) {
            const size_t i = order_[a];
            for (size_t b = a + 1; b < n; ++b) {
                const size_t j = order_[b];
                const double reach = mag::add_up(mag::add_up(best_fast, mag::add_up(r_[i], rmax_)),
                                                 mag::add_up(ex_[i], emax_));
                if (std::isfinite(reach) && cx_[j] - cx_[i] > mag::mul_up(reach, 1 + 0x1p-50) + 0x1p-1000) break;
                const double g = gap_lower_fast(i, j);
                if (g < best_fast || bi == n) {
                    best_fast = g;
                    bi = i;
                }
            }
        }
        if (bi == n) return BigFloat::infinity(kMagPrecision);
        return mag::to_bigfloat(best_fast);
    }

    /// Indices of a pair attaining the fast minimal gap bound.
    std::pair<size_t, size_t> closest_pair() const {
        const size_t n = size();
        double best = std::numeric_limits<double>::infinity();
        std::pair<size_t, size_t> out{n, n};
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) {
                const double g = gap_lower_fast(i, j);
                if (g < best || out.first == n) {
                    best = g;
                    out = {i, j};
                }
            }
        return out;
    }

   private:
    double threshold(size_t i, size_t j, double scale) const { return mag::mul_up(scale, mag::add_up(r_[i], r_[j])); }

    static double component_lower(const Rounded<double>& d, double ea, double eb) {
        const double err = mag::add_up(d.error, mag::add_up(ea, eb));
        if (!std::isfinite(d.value)) return 0.0;
        const double l = mag::sub_down(std::abs(d.value), err);
        return l > 0 ? l : 0.0;
    }

    const std::vector<ComplexBig>* centers_;
    std::vector<double> r_;
    std::vector<double> cx_, cy_, ex_, ey_;
    std::vector<size_t> order_;
    double rmax_ = 0, emax_ = 0;
    bool lossy_ = false;
};

}  // namespace certroots
