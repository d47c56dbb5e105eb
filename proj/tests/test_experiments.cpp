#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "certroots/io.hpp"

using namespace certroots;

namespace {

DistributionSpec gaussian(std::uint64_t seed, int n) { return {Distribution::gaussian, seed, n}; }
DistributionSpec cauchy(std::uint64_t seed, int n) { return {Distribution::cauchy, seed, n}; }

// Renders a histogram and compares it byte for byte with a stored copy,
// writing the copy on the first run.
void check_golden(const std::string& name, const Histogram& h) {
    std::ostringstream now;
    write_histogram_csv(now, h, 17);
    const std::filesystem::path path = std::filesystem::path(CERTROOTS_GOLDEN_DIR) / (name + ".csv");
    if (!std::filesystem::exists(path)) {
        std::filesystem::create_directories(path.parent_path());
        std::ofstream(path) << now.str();
        GTEST_SKIP() << "wrote golden file " << path;
    }
    std::ifstream in(path);
    std::stringstream stored;
    stored << in.rdbuf();
    EXPECT_EQ(stored.str(), now.str()) << path;
}

}  // namespace

// --- sampling -----------------------------------------------------------------------------------

TEST(Sampling, Deterministic) {
    for (auto spec : {gaussian(42, 30), cauchy(42, 30)}) {
        const auto a = sample_coefficients(spec);
        const auto b = sample_coefficients(spec);
        ASSERT_EQ(a.size(), 31u);
        for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(std::bit_cast<std::uint64_t>(a[i]), std::bit_cast<std::uint64_t>(b[i]));
        EXPECT_EQ(sample_polynomial(spec), sample_polynomial(spec));
    }
    EXPECT_NE(sample_coefficients(gaussian(1, 10)), sample_coefficients(gaussian(2, 10)));
}

TEST(Sampling, GaussianMomentsOverHundredThousand) {
    const auto c = sample_coefficients(gaussian(7, 99999));
    ASSERT_EQ(c.size(), 100000u);
    const auto [m, v] = mean_variance(c);
    EXPECT_LE(std::abs(m), 3 / std::sqrt(1e5));
    // Var of the sample variance is 2/n for a normal sample.
    EXPECT_LE(std::abs(v - 1), 5 * std::sqrt(2 / 1e5));
}

TEST(Sampling, CauchyMedianAndHeavyTail) {
    const auto c = sample_coefficients(cauchy(7, 99999));
    // The sample median has standard error pi / (2 sqrt n) for the standard Cauchy.
    EXPECT_LE(std::abs(quantile(c, 0.5)), 4 * std::numbers::pi / (2 * std::sqrt(1e5)));
    EXPECT_NEAR(quantile(c, 0.75), 1.0, 0.03);
    // P(|X| > 1000) = 2 atan(1/1000) / pi, about 64 expected hits.
    size_t big = 0;
    for (double x : c) big += std::abs(x) > 1000;
    EXPECT_GE(big, 30u);
    EXPECT_LE(big, 110u);
}

TEST(Sampling, StreamSeedsSeparateDegreesAndIndices) {
    EXPECT_NE(stream_seed(1, 100, 0), stream_seed(1, 100, 1));
    EXPECT_NE(stream_seed(1, 100, 0), stream_seed(1, 200, 0));
    EXPECT_NE(stream_seed(1, 100, 0), stream_seed(2, 100, 0));
    EXPECT_EQ(stream_seed(9, 50, 3), stream_seed(9, 50, 3));
}

TEST(Sampling, RejectsDegreeZero) { EXPECT_THROW(sample_coefficients(gaussian(1, 0)), InputError); }

// --- theory formulas ------------------------------------------------------------------------------

// Oracle: the formulas evaluated in long double. The quoted four-digit
// values carry rounding slips of up to 2e-4 in their intermediate steps.
TEST(Theory, GaussianMean) {
    const long double pi = std::numbers::pi_v<long double>;
    for (long double n : {1.0L, 100.0L, 1000.0L}) {
        const long double want = 2 / pi * std::log(n) + 0.6257358072L + 2 / (n * pi);
        EXPECT_NEAR(gaussian_mean_theory(static_cast<double>(n)), static_cast<double>(want), 1e-13);
    }
    EXPECT_NEAR(gaussian_mean_theory(1), 1.2624, 5e-5);
    EXPECT_NEAR(gaussian_mean_theory(100), 3.5638, 5e-5);
    EXPECT_NEAR(gaussian_mean_theory(1000), 5.0238, 2e-4);
    EXPECT_FALSE(theory_meaningful(1));
    EXPECT_TRUE(theory_meaningful(100));
}

TEST(Theory, CauchyMean) {
    for (long double n : {1.0L, 100.0L, 1000.0L}) {
        const long double want = 0.7413L * std::log(n + 1) + 0.559132L + 0.230596L / ((n + 1) * (n + 1));
        EXPECT_NEAR(cauchy_mean_theory(static_cast<double>(n)), static_cast<double>(want), 1e-13);
    }
    EXPECT_NEAR(cauchy_mean_theory(100), 3.9805, 2e-4);
    EXPECT_NEAR(cauchy_mean_theory(1000), 5.6804, 2e-4);
    EXPECT_NEAR(cauchy_mean_theory(0), 0.559132 + 0.230596, 1e-12);
}

TEST(Theory, Maslova) {
    const long double pi = std::numbers::pi_v<long double>;
    for (long double n : {2.0L, 100.0L, 1000.0L}) {
        const long double want = 4 * std::log(n) * (1 / pi - 2 / (pi * pi));
        EXPECT_NEAR(maslova_M(static_cast<double>(n)), static_cast<double>(want), 1e-13);
    }
    EXPECT_NEAR(maslova_M(std::numbers::e), 0.46266, 5e-5);
    EXPECT_NEAR(maslova_M(100), 2.1308, 2e-4);
    EXPECT_NEAR(maslova_M(1000), 3.1962, 2e-4);
}

// --- statistics plumbing -------------------------------------------------------------------------

TEST(Stats, ConstantBatch) {
    const std::vector<double> xs(37, 4.0);
    const auto s = summarize(xs, true);
    EXPECT_EQ(s.mean, 4.0);
    EXPECT_EQ(s.variance, 0.0);
    EXPECT_EQ(s.histogram.total(), 37u);
    ASSERT_EQ(s.histogram.counts.size(), 1u);
}

TEST(Stats, UnbiasedVarianceByHand) {
    const auto [m, v] = mean_variance({1, 2, 3, 4});
    EXPECT_DOUBLE_EQ(m, 2.5);
    EXPECT_DOUBLE_EQ(v, 5.0 / 3.0);
}

TEST(Stats, HistogramCountsSumProperty) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const size_t n = 1 + rng() % 500;
        std::vector<double> xs(n);
        std::cauchy_distribution<double> c;
        for (auto& x : xs) x = trial % 2 ? c(rng) : std::floor(std::abs(c(rng)));
        const auto fd = fd_histogram(xs);
        EXPECT_EQ(fd.total(), n);
        EXPECT_EQ(fd.edges.size(), fd.counts.size() + 1);
        for (size_t k = 1; k < fd.edges.size(); ++k) EXPECT_GT(fd.edges[k], fd.edges[k - 1]);
        if (trial % 2 == 0) {
            EXPECT_EQ(integer_histogram(xs).total(), n);
        }
        const auto s = summarize(xs, false);
        EXPECT_GE(s.variance, 0.0);
    }
}

TEST(Stats, QuantileInterpolates) {
    EXPECT_DOUBLE_EQ(quantile({3, 1, 2}, 0.5), 2.0);
    EXPECT_DOUBLE_EQ(quantile({0, 10}, 0.25), 2.5);
}

// --- certified counting ----------------------------------------------------------------------------

TEST(CountReal, Wilkinson) {
    const auto r = count_real_certified(Polynomial::wilkinson(10));
    ASSERT_TRUE(r.fully_certified);
    EXPECT_EQ(r.real_count, 10u);
    EXPECT_EQ(r.positive_count, 10u);
    EXPECT_EQ(r.negative_count, 0u);
}

TEST(CountReal, NoRealRoots) {
    const auto r = count_real_certified(Polynomial{1, 0, 1});
    ASSERT_TRUE(r.fully_certified);
    EXPECT_EQ(r.real_count, 0u);
}

TEST(CountReal, MixedFactors) {
    // (x^2 - 1)(x^2 + 4) = x^4 + 3x^2 - 4 with roots +-1, +-2i.
    const auto r = count_real_certified(Polynomial{-4, 0, 3, 0, 1});
    ASSERT_TRUE(r.fully_certified);
    EXPECT_EQ(r.real_count, 2u);
    EXPECT_EQ(r.positive_count, 1u);
    EXPECT_EQ(r.negative_count, 1u);
    for (const auto& root : r.roots) {
        if (root.verdict != RealVerdict::real) continue;
        const double v = root.point.re.to_double();
        EXPECT_TRUE(root.interval->lo.to_double() <= v && v <= root.interval->hi.to_double());
        EXPECT_NEAR(std::abs(v), 1.0, 1e-12);
    }
}

TEST(CountReal, SignFlipSwapsCountsProperty) {
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto spec = (i % 2 ? cauchy : gaussian)(stream_seed(5, 60, i), 20 + static_cast<int>(i * 7 % 80));
        const auto f = sample_polynomial(spec);
        const auto a = count_real_certified(f);
        const auto b = count_real_certified(f.reflected());
        ASSERT_TRUE(a.fully_certified && b.fully_certified) << i;
        EXPECT_EQ(a.real_count, b.real_count) << i;
        EXPECT_EQ(a.positive_count, b.negative_count) << i;
        EXPECT_EQ(a.negative_count, b.positive_count) << i;
    }
}

TEST(CountReal, ConjugatePairingAndSumProperty) {
    for (std::uint64_t i = 0; i < 20; ++i) {
        const int n = 5 + static_cast<int>(i * 13 % 120);
        const auto f = sample_polynomial((i % 3 ? gaussian : cauchy)(stream_seed(6, n, i), n));
        const auto r = count_real_certified(f);
        ASSERT_TRUE(r.fully_certified) << i;
        EXPECT_EQ(r.roots.size(), static_cast<size_t>(n));
        EXPECT_EQ((static_cast<size_t>(n) - r.real_count) % 2, 0u) << i;
        EXPECT_EQ(r.real_count, r.positive_count + r.negative_count + r.zero_count) << i;
        EXPECT_EQ(r.zero_count, 0u);
    }
}

TEST(CountReal, ScalingInvariantProperty) {
    for (std::uint64_t i = 0; i < 8; ++i) {
        const auto f = sample_polynomial(gaussian(stream_seed(8, 40, i), 40));
        const auto g = f.scaled(Rational(-1000, 3));
        EXPECT_EQ(count_real_certified(f).real_count, count_real_certified(g).real_count) << i;
    }
}

// --- batches --------------------------------------------------------------------------------------

TEST(Batch, WorkerCountDoesNotChangeResults) {
    BatchOptions o;
    o.degree = 60;
    o.sample_size = 12;
    o.master_seed = 77;
    o.keep_roots = true;
    const auto one = run_records(o);
    o.workers = 3;
    const auto three = run_records(o);
    ASSERT_EQ(one.size(), three.size());
    for (size_t i = 0; i < one.size(); ++i) {
        EXPECT_EQ(one[i].spec.seed, three[i].spec.seed);
        EXPECT_EQ(one[i].real_count, three[i].real_count);
        EXPECT_EQ(one[i].roots, three[i].roots);
    }
    std::ostringstream a, b;
    write_records_csv(a, one, 17);
    write_records_csv(b, three, 17);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(batch_json(summarize_batch(o, one), 17).dump(), batch_json(summarize_batch(o, three), 17).dump());
}

TEST(Batch, PartialRecordsAreExcludedAndCounted) {
    BatchOptions o;
    o.degree = 10;
    std::vector<ExperimentRecord> recs(5);
    for (size_t i = 0; i < recs.size(); ++i) {
        recs[i].fully_certified = i != 2;
        recs[i].real_count = i == 2 ? 99 : 4;
        recs[i].positive_count = 2;
        recs[i].negative_count = 2;
    }
    const auto s = summarize_batch(o, recs);
    EXPECT_EQ(s.partial_count, 1u);
    EXPECT_EQ(s.real_count.sample_size, 4u);
    EXPECT_EQ(s.real_count.mean, 4.0);
    EXPECT_EQ(s.real_count.variance, 0.0);
    EXPECT_EQ(s.positive_negative_ratio, 1.0);
}

TEST(Batch, ModulusConcentratesNearOne) {
    // Regression value from a pilot run: well above 80% of roots sit in the annulus.
    BatchOptions o;
    o.degree = 200;
    o.sample_size = 10;
    o.master_seed = 3;
    o.keep_roots = true;
    const auto s = summarize_batch(o, run_records(o));
    EXPECT_EQ(s.partial_count, 0u);
    ASSERT_TRUE(s.densities.has_value());
    EXPECT_GE(s.modulus_fraction_near_one, 0.8);
    EXPECT_GT(s.densities->modulus.total(), 0u);
}

TEST(Batch, GoldenRealCountHistograms) {
    for (auto kind : {Distribution::gaussian, Distribution::cauchy}) {
        BatchOptions o;
        o.kind = kind;
        o.degree = 100;
        o.sample_size = 40;
        o.master_seed = 20240601;
        const auto s = summarize_batch(o, run_records(o));
        EXPECT_EQ(s.real_count.histogram.total(), 40u);
        check_golden(std::string("real_count_") + to_string(kind) + "_N100", s.real_count.histogram);
    }
}

// --- configuration -------------------------------------------------------------------------------

TEST(Config, ParsesAndValidates) {
    const auto c = parse_experiment_config(Json::parse(
        R"({"distribution":"cauchy","degrees":[10,20],"sample_size":5,"master_seed":9,"target_radius":1e-10,"outputs":["summary"]})"));
    EXPECT_EQ(c.kind, Distribution::cauchy);
    EXPECT_EQ(c.degrees, (std::vector<int>{10, 20}));
    EXPECT_EQ(c.master_seed, 9u);
    EXPECT_TRUE(c.wants("summary"));
    EXPECT_FALSE(c.wants("records"));
    EXPECT_THROW(parse_experiment_config(Json::parse(R"({"distribution":"uniform"})")), InputError);
    EXPECT_THROW(parse_experiment_config(Json::parse(R"({"degrees":[]})")), InputError);
    EXPECT_THROW(parse_experiment_config(Json::parse(R"({"sample_size":1})")), InputError);
    EXPECT_THROW(parse_experiment_config(Json::parse(R"({"colour":1})")), InputError);
    EXPECT_THROW(parse_experiment_config(Json::parse(R"({"outputs":["pictures"]})")), InputError);
    EXPECT_THROW(parse_experiment_config(Json::parse(R"({"degrees":"ten"})")), InputError);
}

// --- landscape --------------------------------------------------------------------------------------

TEST(Landscape, Parabola) {
    const auto r = landscape_analysis(Polynomial{0, 0, 1});
    ASSERT_TRUE(r.certified);
    EXPECT_EQ(r.minima, 1u);
    EXPECT_EQ(r.maxima, 0u);
    EXPECT_EQ(r.de_sitter, 0u);
    EXPECT_EQ(r.ambiguous, 0u);
}

TEST(Landscape, DoubleWell) {
    // F = -x^4 + 2x^2, F' = -4x^3 + 4x: maxima at +-1 (F = 1), minimum at 0 (F = 0).
    const auto r = landscape_analysis(Polynomial{0, 0, 2, 0, -1});
    ASSERT_TRUE(r.certified);
    EXPECT_EQ(r.maxima, 2u);
    EXPECT_EQ(r.minima, 1u);
    EXPECT_EQ(r.de_sitter, 0u);
}

TEST(Landscape, LiftedWellIsDeSitter) {
    // F = x^4 - 2x^2 + 3: minima at +-1 with F = 2 > 0, maximum at 0.
    const auto r = landscape_analysis(Polynomial{3, 0, -2, 0, 1});
    ASSERT_TRUE(r.certified);
    EXPECT_EQ(r.maxima, 1u);
    EXPECT_EQ(r.minima, 2u);
    EXPECT_EQ(r.de_sitter, 2u);
}

TEST(Landscape, MinimaAndMaximaAlternateProperty) {
    const auto o = LandscapeOptions{LandscapeModel::iid_gradient, Distribution::gaussian, 41, 20, 4};
    for (const auto& r : run_landscape(o)) {
        ASSERT_TRUE(r.certified);
        EXPECT_EQ(r.maxima + r.minima + r.ambiguous, r.real_critical);
        // Extrema of a real function alternate, so the counts differ by at most one.
        EXPECT_LE(std::abs(static_cast<long>(r.maxima) - static_cast<long>(r.minima)), 1);
        EXPECT_LE(r.de_sitter, r.minima);
    }
}

TEST(Landscape, GradientModelDegree) {
    const auto F = sample_potential(LandscapeModel::iid_gradient, Distribution::gaussian, 11, 101);
    EXPECT_EQ(F.degree(), 101);
    const auto c = sample_coefficients(gaussian(11, 100));
    EXPECT_EQ(F.derivative(), Polynomial::from_doubles(c));
}

TEST(Landscape, GoldenLogCurvatureHistogram) {
    LandscapeOptions o;
    o.sample_size = 30;
    o.master_seed = 20240601;
    const auto s = summarize_landscape(o, run_landscape(o));
    EXPECT_EQ(s.partial_count, 0u);
    check_golden("log_abs_F2_gaussian_D101", s.log_abs_F2);
}
