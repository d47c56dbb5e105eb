#pragma once

// Frobenius companion matrix and a small shifted Hessenberg QR eigensolver.
// The QR path is a double-precision cross-check for the Aberth solver.

#include <cmath>
#include <algorithm>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "certroots/polynomial.hpp"

namespace certroots {

/// N x N matrix, ones on the subdiagonal, last column -a_i / a_N.
struct CompanionMatrix {
    int n = 0;
    std::vector<Rational> entries;  // row-major

    const Rational& operator()(int i, int j) const { return entries[static_cast<size_t>(i * n + j)]; }
};

inline CompanionMatrix companion_matrix(const Polynomial& f) {
    if (f.degree() < 1) throw InputError("companion matrix needs degree >= 1");
    const int n = f.degree();
    CompanionMatrix c{n, std::vector<Rational>(static_cast<size_t>(n * n))};
    for (int i = 1; i < n; ++i) c.entries[static_cast<size_t>(i * n + i - 1)] = 1;
    for (int i = 0; i < n; ++i) c.entries[static_cast<size_t>(i * n + n - 1)] = -f.coeff(i) / f.leading();
    return c;
}

struct QrError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

using cd = std::complex<double>;

struct Givens {
    double c;
    cd s;
};

/// Rotation G = [[c, s], [-conj(s), c]] with G (a, b)^T = (rho, 0).
inline Givens make_givens(cd a, cd b) {
    const double aa = std::abs(a), ab = std::abs(b);
    if (ab == 0) return {1.0, 0.0};
    if (aa == 0) return {0.0, std::conj(b) / ab};
    const double r = std::hypot(aa, ab);
    return {aa / r, (a / aa) * std::conj(b) / r};
}

/// Eigenvalue of [[a, b], [c, d]] closer to d.
inline cd wilkinson_shift(cd a, cd b, cd c, cd d) {
    const cd tr = a + d;
    const cd det = a * d - b * c;
    const cd disc = std::sqrt(tr * tr / 4.0 - det);
    const cd l1 = tr / 2.0 + disc, l2 = tr / 2.0 - disc;
    return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

}  // namespace detail

/// Eigenvalues of the companion matrix by complex single-shift QR with
/// deflation. Throws QrError after a bounded number of sweeps per eigenvalue.
inline std::vector<std::complex<double>> companion_eigenvalues(const Polynomial& f, int max_sweeps_per_eigenvalue = 60) {
    using detail::cd;
    const CompanionMatrix cm = companion_matrix(f);
    const int n = cm.n;
    std::vector<cd> h(static_cast<size_t>(n * n));
    auto H = [&](int i, int j) -> cd& { return h[static_cast<size_t>(i * n + j)]; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) H(i, j) = cm(i, j).get_d();

    std::vector<cd> eig;
    eig.reserve(static_cast<size_t>(n));
    const double eps = std::numeric_limits<double>::epsilon();
    int hi = n - 1;
    int sweeps = 0;
    std::vector<detail::Givens> rot(static_cast<size_t>(n));
    while (hi >= 0) {
        if (hi == 0) {
            eig.push_back(H(0, 0));
            break;
        }
        int lo = hi;
        while (lo > 0) {
            const double scale = std::abs(H(lo, lo)) + std::abs(H(lo - 1, lo - 1));
            if (std::abs(H(lo, lo - 1)) <= eps * (scale == 0 ? 1.0 : scale)) {
                H(lo, lo - 1) = 0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            eig.push_back(H(hi, hi));
            --hi;
            sweeps = 0;
            continue;
        }
        if (++sweeps > max_sweeps_per_eigenvalue) throw QrError("QR iteration did not converge");

        cd mu;
        if (sweeps % 11 == 0) {
            // Exceptional shift to break cycles.
            mu = H(hi, hi) + 0.75 * std::abs(H(hi, hi - 1));
        } else {
            mu = detail::wilkinson_shift(H(hi - 1, hi - 1), H(hi - 1, hi), H(hi, hi - 1), H(hi, hi));
        }
        for (int k = lo; k <= hi; ++k) H(k, k) -= mu;
        for (int k = lo; k < hi; ++k) {
            const auto g = detail::make_givens(H(k, k), H(k + 1, k));
            rot[static_cast<size_t>(k)] = g;
            for (int j = k; j <= hi; ++j) {
                const cd x = H(k, j), y = H(k + 1, j);
                H(k, j) = g.c * x + g.s * y;
                H(k + 1, j) = -std::conj(g.s) * x + g.c * y;
            }
        }
        for (int k = lo; k < hi; ++k) {
            const auto& g = rot[static_cast<size_t>(k)];
            const int last = std::min(k + 2, hi);
            for (int i = lo; i <= last; ++i) {
                const cd x = H(i, k), y = H(i, k + 1);
                H(i, k) = g.c * x + std::conj(g.s) * y;
                H(i, k + 1) = -g.s * x + g.c * y;
            }
        }
        for (int k = lo; k <= hi; ++k) H(k, k) += mu;
    }
    return eig;
}

}  // namespace certroots
