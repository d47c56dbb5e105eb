#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "certroots/aberth.hpp"
#include "certroots/certify_alpha.hpp"
#include "certroots/certify_global.hpp"
#include "certroots/polish.hpp"

using namespace certroots;

namespace {

const Precision kWide{512};

BigFloat wide(const BigFloat& x) { return x.rounded(kWide); }

BigFloat dist(const ComplexBig& a, const ComplexBig& b) {
    return hypot(wide(a.re) - wide(b.re), wide(a.im) - wide(b.im), Round::up);
}

ComplexBig rational_point(const Rational& re) { return {BigFloat(re, kWide), BigFloat(0L, kWide)}; }

// Oracles on real rational points: exact Taylor coefficients, then the
// defining maxima evaluated at high precision.
double beta_oracle(const Polynomial& f, const Rational& x) {
    const Rational d = f.derivative().evaluate(x);
    return Rational(abs(f.evaluate(x) / d)).get_d();
}

double gamma_oracle(const Polynomial& f, const Rational& x) {
    const auto b = f.taylor_shift(x);
    const Precision p{256};
    BigFloat best(0L, p);
    for (int k = 2; k <= f.degree(); ++k) {
        BigFloat t(abs(b[k] / b[1]), p);
        mpfr_rootn_ui(t.get(), t.get(), static_cast<unsigned long>(k - 1), MPFR_RNDN);
        if (best < t) best = t;
    }
    return best.to_double();
}

Polynomial gaussian_poly(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<double> c(n + 1);
    for (auto& x : c) x = g(rng);
    return Polynomial::from_doubles(c);
}

std::vector<ComplexBig> solved(const Polynomial& f) {
    std::vector<ComplexBig> p;
    for (const auto& a : aberth_solve(f).approximations) p.push_back(a.point);
    return p;
}

}  // namespace

// --- beta, gamma ----------------------------------------------------------------------------------

TEST(Beta, ZeroAtExactRoot) { EXPECT_TRUE(beta(Polynomial{-1, 0, 1}, make_point(1, 0)).is_zero()); }

TEST(Beta, HandValues) {
    const auto b1 = beta(Polynomial{-1, 0, 1}, make_point(2, 0)).to_double(Round::up);
    EXPECT_GE(b1, 0.75);
    EXPECT_NEAR(b1, 0.75, 1e-15);
    const auto b2 = beta(Polynomial{0, -1, 0, 1}, make_point(2, 0)).to_double(Round::up);
    EXPECT_GE(b2, 6.0 / 11);
    EXPECT_NEAR(b2, 6.0 / 11, 1e-15);
}

TEST(Beta, DerivativeZeroThrows) {
    EXPECT_THROW(beta(Polynomial{-1, 0, 1}, make_point(0, 0)), PrecisionError);
}

TEST(Gamma, HandValues) {
    EXPECT_NEAR(gamma(Polynomial{-1, 0, 1}, make_point(1, 0)).to_double(Round::up), 0.5, 1e-15);
    EXPECT_NEAR(gamma(Polynomial{0, 0, 0, 1}, make_point(1, 0)).to_double(Round::up), 1.0, 1e-15);
    for (double c : {-3.0, 0.5, 7.25}) {
        for (double x : {0.3, -2.0, 5.5}) {
            const auto f = Polynomial::from_doubles(std::vector<double>{c, 0, 1});
            EXPECT_NEAR(gamma(f, make_point(x, 0)).to_double(Round::up), 1 / (2 * std::abs(x)), 1e-15);
        }
    }
}

TEST(Gamma, ComplexPointSingleTerm) {
    // f = x^2 + 1 at x = 1 + i: gamma = 1 / (2 |x|) = 1 / (2 sqrt 2).
    const auto g = gamma(Polynomial{1, 0, 1}, make_point(1, 1)).to_double(Round::up);
    EXPECT_NEAR(g, 1 / (2 * std::sqrt(2.0)), 1e-15);
}

// --- alpha certify ----------------------------------------------------------------------------------

TEST(AlphaCertify, ExactRootCertified) {
    const auto c = alpha_certify(Polynomial{-1, 0, 1}, make_point(1, 0));
    EXPECT_TRUE(c.certified);
    EXPECT_TRUE(c.alpha.is_zero());
    EXPECT_TRUE(c.radius.is_zero());
}

TEST(AlphaCertify, AboveThresholdRejected) {
    const auto c = alpha_certify(Polynomial{-1, 0, 1}, make_point(2, 0));
    EXPECT_FALSE(c.certified);
    EXPECT_NEAR(c.alpha.to_double(), 0.1875, 1e-15);
    EXPECT_EQ(c.reason, "alpha above threshold");
}

TEST(AlphaCertify, NearbyPointCertified) {
    const Polynomial f{-1, 0, 1};
    const auto x = rational_point(Rational(11, 10));
    const auto c = alpha_certify(f, x);
    EXPECT_TRUE(c.certified);
    EXPECT_NEAR(c.beta.to_double(), 0.21 / 2.2, 1e-12);
    EXPECT_NEAR(c.gamma.to_double(), 1 / 2.2, 1e-12);
    EXPECT_NEAR(c.alpha.to_double(), 0.21 / 2.2 / 2.2, 1e-12);
    EXPECT_EQ(c.radius, mag::mul_up(c.beta, mag::make_mag(2.0)));
}

TEST(AlphaCertify, ThresholdEnclosure) {
    const Precision p{1000};
    BigFloat exact(17L, p);
    mpfr_sqrt(exact.get(), exact.get(), MPFR_RNDN);
    mpfr_mul_ui(exact.get(), exact.get(), 3, MPFR_RNDN);
    mpfr_ui_sub(exact.get(), 13, exact.get(), MPFR_RNDN);
    mpfr_div_ui(exact.get(), exact.get(), 4, MPFR_RNDN);
    const BigFloat lo = alpha_threshold_lower();
    EXPECT_LT(wide(lo), exact.rounded(kWide));
    EXPECT_NEAR(lo.to_double(), 0.15767, 1e-5);
    EXPECT_NEAR(lo.to_double(), exact.to_double(), 1e-17);
}

TEST(AlphaCertify, DerivativeZeroIsUncertifiedWithReason) {
    const auto c = alpha_certify(Polynomial{-1, 0, 1}, make_point(0, 0));
    EXPECT_FALSE(c.certified);
    EXPECT_EQ(c.reason, "derivative indistinguishable from zero");
}

TEST(AlphaCertify, BoundsDominateOracleOnRandomInputs) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<long> coef(-20, 20);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 12);
        std::vector<Rational> c(n + 1);
        for (auto& a : c) a = Rational(coef(rng), 1 + static_cast<long>(rng() % 7));
        if (c[n] == 0) c[n] = 1;
        const Polynomial f(c);
        const Rational x(coef(rng), 8);
        if (f.derivative().evaluate(x) == 0) continue;
        const auto cert = alpha_certify(f, rational_point(x));
        const double bo = beta_oracle(f, x), go = gamma_oracle(f, x);
        EXPECT_GE(cert.beta.to_double(Round::up), bo * (1 - 1e-15)) << trial;
        EXPECT_LE(cert.beta.to_double(), bo * (1 + 1e-10) + 1e-300) << trial;
        EXPECT_GE(cert.gamma.to_double(Round::up), go * (1 - 1e-15)) << trial;
        EXPECT_LE(cert.gamma.to_double(), go * (1 + 1e-10)) << trial;
        if (cert.certified) {
            EXPECT_LT(bo * go, 0.1577) << trial;
        }
    }
}

// --- distinctness -----------------------------------------------------------------------------------

TEST(Distinct, PlusMinusOne) {
    const Polynomial f{-1, 0, 1};
    const auto a = alpha_certify(f, make_point(1, 0));
    const auto b = alpha_certify(f, make_point(-1, 0));
    EXPECT_TRUE(distinct_pair(a, b));
    EXPECT_FALSE(distinct_pair(a, a));
}

TEST(Distinct, WilkinsonFourAndFive) {
    const auto f = Polynomial::wilkinson(10);
    const auto p4 = polish(f, make_point(4.02, 0), 30);
    const auto p5 = polish(f, make_point(4.97, 0), 30);
    ASSERT_TRUE(p4.certified);
    ASSERT_TRUE(p5.certified);
    const auto a = alpha_certify(f, p4.point), b = alpha_certify(f, p5.point);
    EXPECT_LT(a.beta.to_double(), 0.5);
    EXPECT_TRUE(distinct_pair(a, b));
}

TEST(Distinct, FullSets) {
    const Polynomial f{-1, 0, 1};
    std::vector<AlphaCertificate> ok{alpha_certify(f, make_point(1, 0)), alpha_certify(f, make_point(-1, 0))};
    EXPECT_TRUE(certify_all_distinct(ok).all_distinct);
    std::vector<AlphaCertificate> dup{ok[0], ok[0]};
    const auto rep = certify_all_distinct(dup);
    EXPECT_FALSE(rep.all_distinct);
    ASSERT_EQ(rep.failing_pairs.size(), 1u);
    EXPECT_EQ(rep.failing_pairs[0], (std::pair<size_t, size_t>{0, 1}));

    const auto w = Polynomial::wilkinson(10);
    Evaluator ev(w);
    const auto all = certify_alpha_all(ev, solved(w));
    EXPECT_TRUE(all.distinct.all_distinct);
    EXPECT_EQ(all.distinct.certified_count, 10u);
}

TEST(Distinct, UncertifiedPointsReported) {
    const Polynomial f{-1, 0, 1};
    std::vector<AlphaCertificate> c{alpha_certify(f, make_point(1, 0)), alpha_certify(f, make_point(-3, 0))};
    const auto rep = certify_all_distinct(c);
    EXPECT_FALSE(rep.all_distinct);
    ASSERT_EQ(rep.uncertified.size(), 1u);
    EXPECT_EQ(rep.uncertified[0], 1u);
}

// --- reality ------------------------------------------------------------------------------------------

TEST(ClassifyAlpha, RealPair) {
    const Polynomial f{-1, 0, 1};
    Evaluator ev(f);
    const auto rep = certify_alpha_all(ev, {make_point(1, 0), make_point(-1, 0)});
    for (const auto& c : rep.certificates) EXPECT_EQ(c.real, RealVerdict::real);
}

TEST(ClassifyAlpha, ImaginaryPair) {
    const Polynomial f{1, 0, 1};
    Evaluator ev(f);
    const auto rep = certify_alpha_all(ev, {make_point(1e-17, 1), make_point(0, -1 + 1e-16)});
    ASSERT_TRUE(rep.distinct.all_distinct);
    for (const auto& c : rep.certificates) EXPECT_EQ(c.real, RealVerdict::nonreal);
}

TEST(ClassifyAlpha, WilkinsonAllReal) {
    const auto f = Polynomial::wilkinson(10);
    Evaluator ev(f);
    const auto rep = certify_alpha_all(ev, solved(f));
    size_t real = 0;
    for (const auto& c : rep.certificates) real += c.real == RealVerdict::real;
    EXPECT_EQ(real, 10u);
}

TEST(ClassifyAlpha, NearRealPairStaysUndecided) {
    // Two conjugate points whose disks overlap their mirror images cannot be
    // called real or nonreal.
    const Polynomial f{1, 0, 1};
    std::vector<AlphaCertificate> c(2);
    c[0].point = make_point(0, 1e-3);
    c[1].point = make_point(0, -1e-3);
    for (auto& x : c) {
        x.certified = true;
        x.beta = mag::make_mag(1e-2);
        x.radius = mag::make_mag(2e-2);
    }
    classify_real_alpha(c);
    EXPECT_EQ(c[0].real, RealVerdict::undecided);
    EXPECT_EQ(c[1].real, RealVerdict::undecided);
}

// --- properties -----------------------------------------------------------------------------------------

TEST(AlphaProperty, BetaShrinksUnderNewtonStep) {
    std::mt19937_64 rng(31);
    int checked = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const auto f = gaussian_poly(rng(), 5 + static_cast<int>(rng() % 30));
        Evaluator ev(f);
        for (const auto& x : solved(f)) {
            // Perturb off the root, keep only certified starting points.
            const auto y = make_point(x.re.to_double() * (1 + 1e-6), x.im.to_double() * (1 - 1e-6));
            const auto c0 = alpha_certify(ev, y);
            if (!c0.certified) continue;
            const auto step = newton_step_rigorous(ev.at(256), y);
            const auto c1 = alpha_certify(ev, step.point);
            EXPECT_LE(c1.beta.to_double(), c0.beta.to_double());
            ++checked;
        }
    }
    EXPECT_GT(checked, 100);
}

TEST(AlphaProperty, ScaleInvariance) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        const auto f = gaussian_poly(rng(), 2 + static_cast<int>(rng() % 20));
        const auto g = f.scaled(Rational(-13, 7));
        std::uniform_real_distribution<double> u(-2, 2);
        const auto x = make_point(u(rng), u(rng));
        const auto a = alpha_certify(f, x), b = alpha_certify(g, x);
        if (!a.beta.is_finite()) continue;
        EXPECT_NEAR(a.beta.to_double(), b.beta.to_double(), 1e-12 * a.beta.to_double());
        EXPECT_NEAR(a.gamma.to_double(), b.gamma.to_double(), 1e-12 * a.gamma.to_double());
        EXPECT_NEAR(a.alpha.to_double(), b.alpha.to_double(), 1e-12 * a.alpha.to_double());
    }
}

TEST(AlphaProperty, ConjugateSymmetry) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int trial = 0; trial < 40; ++trial) {
        const auto f = gaussian_poly(rng(), 2 + static_cast<int>(rng() % 25));
        const double re = u(rng), im = u(rng);
        const auto a = alpha_certify(f, make_point(re, im));
        const auto b = alpha_certify(f, make_point(re, -im));
        if (!a.alpha.is_finite()) continue;
        EXPECT_NEAR(a.alpha.to_double(), b.alpha.to_double(), 1e-12 * a.alpha.to_double());
    }
}

TEST(AlphaProperty, SoundAgainstClosedFormRoots) {
    // Wilkinson-10: integer roots.
    {
        const auto f = Polynomial::wilkinson(10);
        Evaluator ev(f);
        for (const auto& x : solved(f)) {
            const auto c = alpha_certify(ev, x);
            ASSERT_TRUE(c.certified);
            int inside = 0;
            for (long j = 1; j <= 10; ++j) inside += dist(x, {BigFloat(j, kWide), BigFloat(0L, kWide)}) <= wide(c.radius);
            EXPECT_EQ(inside, 1);
        }
    }
    // x^N - 1: roots of unity from MPFR cos/sin at 512 bits.
    for (int n : {3, 8, 25, 64}) {
        std::vector<Rational> co(n + 1);
        co[0] = -1;
        co[n] = 1;
        const Polynomial f(co);
        std::vector<ComplexBig> roots;
        for (int k = 0; k < n; ++k) {
            BigFloat t(0L, kWide), re(0L, kWide), im(0L, kWide);
            mpfr_const_pi(t.get(), MPFR_RNDN);
            mpfr_mul_ui(t.get(), t.get(), 2 * k, MPFR_RNDN);
            mpfr_div_ui(t.get(), t.get(), n, MPFR_RNDN);
            mpfr_cos(re.get(), t.get(), MPFR_RNDN);
            mpfr_sin(im.get(), t.get(), MPFR_RNDN);
            roots.push_back({re, im});
        }
        Evaluator ev(f);
        for (const auto& x : solved(f)) {
            const auto c = alpha_certify(ev, x);
            ASSERT_TRUE(c.certified) << n;
            int inside = 0;
            // 512-bit roots carry ~1e-150 error, far below any radius here.
            const BigFloat slack = BigFloat::parse("1e-140", kWide);
            for (const auto& r : roots) inside += dist(x, r) <= wide(c.radius) + slack;
            EXPECT_EQ(inside, 1) << "n=" << n;
        }
    }
}

TEST(AlphaProperty, AgreesWithGlobalClassification) {
    for (std::uint64_t seed = 600; seed < 620; ++seed) {
        const auto f = gaussian_poly(seed, 10 + static_cast<int>(seed % 40));
        const auto pts = solved(f);
        Evaluator ev(f);
        const auto alpha = certify_alpha_all(ev, pts);
        const auto global = certify_global_all(ev, pts, false);
        for (size_t i = 0; i < pts.size(); ++i) {
            const auto a = alpha.certificates[i].real, g = global.real.verdicts[i];
            if (a != RealVerdict::undecided && g != RealVerdict::undecided) {
                EXPECT_EQ(a, g) << seed << " root " << i;
            }
        }
    }
}
