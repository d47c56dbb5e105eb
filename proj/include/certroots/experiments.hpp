#pragma once

// Monte-Carlo harness over random Kac polynomials.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "certroots/pipeline.hpp"

namespace certroots {

enum class Distribution { gaussian, cauchy };

inline const char* to_string(Distribution d) { return d == Distribution::gaussian ? "gaussian" : "cauchy"; }
inline Distribution parse_distribution(const std::string& s) {
    if (s == "gaussian" || s == "normal") return Distribution::gaussian;
    if (s == "cauchy") return Distribution::cauchy;
    throw InputError("unknown distribution '" + s + "' (expected gaussian or cauchy)");
}

struct DistributionSpec {
    Distribution kind = Distribution::gaussian;
    std::uint64_t seed = 0;
    int degree = 1;
};

// --- seeding ------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of sample `index` at `degree`: independent of worker count and order.
inline std::uint64_t stream_seed(std::uint64_t master, int degree, std::uint64_t index) {
    return splitmix64(splitmix64(splitmix64(master) ^ static_cast<std::uint64_t>(degree)) ^ index);
}

/// Uniform doubles strictly inside (0, 1) from a 64-bit engine.
class UniformStream {
   public:
    explicit UniformStream(std::uint64_t seed) : eng_(seed) {}
    double next() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53; }

   private:
    std::mt19937_64 eng_;
};

/// Standard normal by Box-Muller (both outputs used), Cauchy by tan(pi (u - 1/2)).
inline std::vector<double> sample_coefficients(const DistributionSpec& spec) {
    if (spec.degree < 1) throw InputError("degree must be >= 1");
    UniformStream u(spec.seed);
    std::vector<double> c(static_cast<size_t>(spec.degree) + 1);
    if (spec.kind == Distribution::gaussian) {
        for (size_t i = 0; i < c.size(); i += 2) {
            const double r = std::sqrt(-2.0 * std::log(u.next()));
            const double th = 2 * std::numbers::pi * u.next();
            c[i] = r * std::cos(th);
            if (i + 1 < c.size()) c[i + 1] = r * std::sin(th);
        }
    } else {
        for (auto& x : c) x = std::tan(std::numbers::pi * (u.next() - 0.5));
    }
    return c;
}

inline Polynomial sample_polynomial(const DistributionSpec& spec) {
    return Polynomial::from_doubles(sample_coefficients(spec));
}

// --- theory ---------------------------------------------------------------------------

/// Expected number of real roots of a degree-N Gaussian Kac polynomial.
inline double gaussian_mean_theory(double n) { return 2 / std::numbers::pi * std::log(n) + 0.6257358072 + 2 / (n * std::numbers::pi); }

/// Fitted law for the mean number of real roots with Cauchy coefficients.
inline double cauchy_mean_theory(double n) { return 0.7413 * std::log(n + 1) + 0.559132 + 0.230596 / ((n + 1) * (n + 1)); }

/// Asymptotic variance of the real-root count.
inline double maslova_M(double n) {
    return 4 * std::log(n) * (1 / std::numbers::pi - 2 / (std::numbers::pi * std::numbers::pi));
}

/// The asymptotic formulas are not meaningful at tiny degree.
inline bool theory_meaningful(int n) { return n >= 10; }

// --- statistics -----------------------------------------------------------------------

struct Histogram {
    std::vector<double> edges;  // size = counts.size() + 1
    std::vector<std::uint64_t> counts;
    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (auto c : counts) t += c;
        return t;
    }
};

struct StatsSummary {
    size_t sample_size = 0;
    double mean = 0;
    double variance = 0;  // unbiased
    Histogram histogram;
    std::optional<double> theory_value;
    double standard_error() const { return sample_size > 1 ? std::sqrt(variance / static_cast<double>(sample_size)) : 0.0; }
};

inline std::pair<double, double> mean_variance(const std::vector<double>& xs) {
    if (xs.empty()) return {0.0, 0.0};
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, ss / static_cast<double>(xs.size() - 1)};
}

inline double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) return 0;
    std::sort(xs.begin(), xs.end());
    const double pos = q * static_cast<double>(xs.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(pos));
    const size_t hi = std::min(lo + 1, xs.size() - 1);
    return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

/// Unit-width bins centred on the integers min..max.
inline Histogram integer_histogram(const std::vector<double>& xs) {
    Histogram h;
    if (xs.empty()) return h;
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    const long a = std::lround(*lo), b = std::lround(*hi);
    for (long k = a; k <= b + 1; ++k) h.edges.push_back(static_cast<double>(k) - 0.5);
    h.counts.assign(static_cast<size_t>(b - a + 1), 0);
    for (double x : xs) ++h.counts[static_cast<size_t>(std::lround(x) - a)];
    return h;
}

/// Freedman-Diaconis bin width 2 IQR n^(-1/3), optionally clipped to [lo, hi].
inline Histogram fd_histogram(const std::vector<double>& xs, std::optional<std::pair<double, double>> range = {},
                              size_t max_bins = 400) {
    Histogram h;
    std::vector<double> v;
    v.reserve(xs.size());
    for (double x : xs)
        if (std::isfinite(x) && (!range || (x >= range->first && x <= range->second))) v.push_back(x);
    if (v.empty()) return h;
    double lo = range ? range->first : *std::min_element(v.begin(), v.end());
    double hi = range ? range->second : *std::max_element(v.begin(), v.end());
    if (hi <= lo) hi = lo + 1;
    const double iqr = quantile(v, 0.75) - quantile(v, 0.25);
    double width = 2 * iqr * std::cbrt(1.0 / static_cast<double>(v.size()));
    size_t bins = width > 0 ? static_cast<size_t>(std::ceil((hi - lo) / width)) : 1;
    bins = std::clamp<size_t>(bins, 1, max_bins);
    width = (hi - lo) / static_cast<double>(bins);
    for (size_t k = 0; k <= bins; ++k) h.edges.push_back(lo + width * static_cast<double>(k));
    h.counts.assign(bins, 0);
    for (double x : v) {
        size_t k = static_cast<size_t>((x - lo) / width);
        ++h.counts[std::min(k, bins - 1)];
    }
    return h;
}

inline StatsSummary summarize(const std::vector<double>& xs, bool integer_valued, std::optional<double> theory = {}) {
    StatsSummary s;
    s.sample_size = xs.size();
    std::tie(s.mean, s.variance) = mean_variance(xs);
    s.histogram = integer_valued ? integer_histogram(xs) : fd_histogram(xs);
    s.theory_value = theory;
    return s;
}

// --- records and batches ------------------------------------------------------------------

struct ExperimentRecord {
    DistributionSpec spec;
    std::uint64_t index = 0;
    size_t real_count = 0;
    size_t positive_count = 0;
    size_t negative_count = 0;
    size_t zero_count = 0;
    bool fully_certified = false;
    int rounds = 0;
    unsigned precision_bits = 53;
    std::optional<double> gamma_mean;
    std::optional<double> gamma_M;
    std::vector<std::complex<double>> roots;  // midpoints, for the density outputs
    std::vector<RealVerdict> verdicts;
};

inline ExperimentRecord record_from(const DistributionSpec& spec, std::uint64_t index, const CountResult& r, bool keep_roots) {
    ExperimentRecord rec;
    rec.spec = spec;
    rec.index = index;
    rec.real_count = r.real_count;
    rec.positive_count = r.positive_count;
    rec.negative_count = r.negative_count;
    rec.zero_count = r.zero_count;
    rec.fully_certified = r.fully_certified;
    rec.rounds = r.rounds;
    rec.precision_bits = r.max_precision_bits;
    rec.gamma_mean = r.gamma_mean;
    rec.gamma_M = r.gamma_M;
    if (keep_roots) {
        for (const auto& root : r.roots) {
            rec.roots.emplace_back(root.point.re.to_double(), root.point.im.to_double());
            rec.verdicts.push_back(root.verdict);
        }
    }
    return rec;
}

/// Runs fn(i) for i in [0, count) on `workers` threads; results land by index.
template <class T, class Fn>
std::vector<T> parallel_map(size_t count, unsigned workers, Fn fn) {
    std::vector<T> out(count);
    if (workers <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (size_t i; (i = next.fetch_add(1)) < count;) out[i] = fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
                next = count;
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct BatchOptions {
    Distribution kind = Distribution::gaussian;
    int degree = 100;
    size_t sample_size = 200;
    std::uint64_t master_seed = 1;
    double target_radius = 1e-12;
    unsigned workers = 1;
    bool compute_gamma = false;
    bool keep_roots = false;
    bool reflect = false;  // solve f(-x) instead of f(x)
    std::function<void(size_t)> progress;  // called with the number of finished records
};

inline DistributionSpec spec_for(const BatchOptions& o, std::uint64_t index) {
    return {o.kind, stream_seed(o.master_seed, o.degree, index), o.degree};
}

inline std::vector<ExperimentRecord> run_records(const BatchOptions& o) {
    std::atomic<size_t> done{0};
    return parallel_map<ExperimentRecord>(o.sample_size, o.workers, [&](size_t i) {
        const auto spec = spec_for(o, i);
        Polynomial f = sample_polynomial(spec);
        if (o.reflect) f = f.reflected();
        CountOptions co;
        co.target_relative_radius = o.target_radius;
        co.compute_gamma = o.compute_gamma;
        auto rec = record_from(spec, i, count_real_certified(f, co), o.keep_roots);
        const size_t d = ++done;
        if (o.progress) o.progress(d);
        return rec;
    });
}

struct DensitySet {
    Histogram real_part, imag_part, modulus;
};

/// Per-degree statistics over the fully certified records; partial records
/// are excluded and counted.
struct BatchSummary {
    Distribution kind = Distribution::gaussian;
    int degree = 0;
    std::uint64_t master_seed = 0;
    size_t sample_size = 0;
    size_t partial_count = 0;
    StatsSummary real_count;
    StatsSummary positive_count;
    StatsSummary negative_count;
    double positive_negative_ratio = 0;  // total positive over total negative
    std::optional<double> maslova;
    std::optional<StatsSummary> gamma_mean;
    std::optional<StatsSummary> gamma_M;
    std::optional<DensitySet> densities;
    double modulus_fraction_near_one = 0;  // share of roots with |z| in [0.8, 1.25]
};

inline BatchSummary summarize_batch(const BatchOptions& o, const std::vector<ExperimentRecord>& recs) {
    BatchSummary s;
    s.kind = o.kind;
    s.degree = o.degree;
    s.master_seed = o.master_seed;
    s.sample_size = recs.size();
    std::vector<double> real, pos, neg, gm, gM;
    double tp = 0, tn = 0;
    std::vector<double> re, im, mod;
    size_t near_one = 0, nroots = 0;
    for (const auto& r : recs) {
        if (!r.fully_certified) {
            ++s.partial_count;
            continue;
        }
        real.push_back(static_cast<double>(r.real_count));
        pos.push_back(static_cast<double>(r.positive_count));
        neg.push_back(static_cast<double>(r.negative_count));
        tp += static_cast<double>(r.positive_count);
        tn += static_cast<double>(r.negative_count);
        if (r.gamma_mean) gm.push_back(*r.gamma_mean);
        if (r.gamma_M) gM.push_back(*r.gamma_M);
        for (const auto& z : r.roots) {
            re.push_back(z.real());
            im.push_back(z.imag());
            const double m = std::abs(z);
            mod.push_back(m);
            near_one += m >= 0.8 && m <= 1.25;
            ++nroots;
        }
    }
    const double n = o.degree;
    std::optional<double> theory;
    if (o.kind == Distribution::gaussian) {
        theory = gaussian_mean_theory(n);
        if (o.degree >= 2) s.maslova = maslova_M(n);
    } else {
        theory = cauchy_mean_theory(n);
    }
    s.real_count = summarize(real, true, theory);
    s.positive_count = summarize(pos, true);
    s.negative_count = summarize(neg, true);
    s.positive_negative_ratio = tn > 0 ? tp / tn : std::numeric_limits<double>::infinity();
    if (!gm.empty()) s.gamma_mean = summarize(gm, false);
    if (!gM.empty()) s.gamma_M = summarize(gM, false);
    if (nroots > 0) {
        // Cauchy roots have heavy tails; densities use the central 99% range.
        auto clip = [](const std::vector<double>& v) {
            return std::make_pair(quantile(v, 0.005), quantile(v, 0.995));
        };
        s.densities = DensitySet{fd_histogram(re, clip(re)), fd_histogram(im, clip(im)), fd_histogram(mod, clip(mod))};
        s.modulus_fraction_near_one = static_cast<double>(near_one) / static_cast<double>(nroots);
    }
    return s;
}

// --- landscape ----------------------------------------------------------------------------

enum class LandscapeModel {
    iid_gradient,   // F' has i.i.d. coefficients (degree D-1); F = integral + random constant
    iid_potential,  // F has i.i.d. coefficients
};

inline LandscapeModel parse_landscape_model(const std::string& s) {
    if (s == "iid-gradient") return LandscapeModel::iid_gradient;
    if (s == "iid-potential") return LandscapeModel::iid_potential;
    throw InputError("unknown landscape model '" + s + "' (expected iid-gradient or iid-potential)");
}
inline const char* to_string(LandscapeModel m) { return m == LandscapeModel::iid_gradient ? "iid-gradient" : "iid-potential"; }

struct CriticalPoint {
    RealInterval interval;
    bool maximum = false;
    bool minimum = false;
    bool de_sitter = false;     // minimum with F > 0
    double log_abs_F2 = 0;      // log|F''| at the point
};

struct LandscapeRecord {
    int degree = 0;  // degree D of F
    std::uint64_t index = 0;
    std::uint64_t seed = 0;
    bool certified = false;
    size_t real_critical = 0;
    size_t maxima = 0;
    size_t minima = 0;
    size_t de_sitter = 0;
    size_t ambiguous = 0;
    std::vector<CriticalPoint> points;
};

namespace detail {

/// Sign of p over a real interval, decided by ball evaluation; empty when
/// the enclosure straddles zero at every precision tried.
inline std::optional<int> sign_over(Evaluator& ev, const RealInterval& iv, double* log_abs = nullptr) {
    for (unsigned bits = std::max(256u, iv.lo.precision().bits); bits <= 1024; bits *= 2) {
        const Precision p{bits};
        BigFloat mid(p);
        mpfr_add(mid.get(), iv.lo.get(), iv.hi.get(), MPFR_RNDN);
        mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
        const BigFloat a = detail::diff_abs_upper(iv.hi, mid);
        const BigFloat b = detail::diff_abs_upper(mid, iv.lo);
        const BigBall x(mid, BigFloat(0L, p), a < b ? b : a);
        const auto v = evaluate(ev.at(bits), x);
        if (!v.is_finite()) continue;
        if (log_abs) *log_abs = std::log(std::abs(v.re().to_double()));
        if (!v.contains_zero()) return v.re().sign();
        if (v.is_exact() && v.re().is_zero() && v.im().is_zero()) return 0;
    }
    return std::nullopt;
}

}  // namespace detail

/// Certified critical points of F: real roots of F', classified by the sign
/// of F'' over each certified interval; de Sitter minima have F > 0 there.
inline LandscapeRecord landscape_analysis(const Polynomial& F, const CountOptions& opt = {}) {
    if (F.degree() < 2) throw InputError("landscape analysis needs degree >= 2");
    LandscapeRecord rec;
    rec.degree = F.degree();
    const Polynomial f = F.derivative();
    const auto cr = count_real_certified(f, opt);
    rec.certified = cr.fully_certified;
    Evaluator e2(F.derivative(2)), e0(F);
    for (const auto& r : cr.roots) {
        if (r.verdict != RealVerdict::real) continue;
        ++rec.real_critical;
        CriticalPoint cp{*r.interval};
        const auto s2 = detail::sign_over(e2, *r.interval, &cp.log_abs_F2);
        if (s2 && *s2 < 0) {
            cp.maximum = true;
            ++rec.maxima;
        } else if (s2 && *s2 > 0) {
            cp.minimum = true;
            ++rec.minima;
            const auto s0 = detail::sign_over(e0, *r.interval);
            if (!s0) {
                ++rec.ambiguous;
            } else if (*s0 > 0) {
                cp.de_sitter = true;
                ++rec.de_sitter;
            }
        } else {
            // F'' = 0 at a simple root of F' is impossible; only ambiguity lands here.
            ++rec.ambiguous;
        }
        rec.points.push_back(std::move(cp));
    }
    return rec;
}

/// Random potential F of degree D under the chosen model.
inline Polynomial sample_potential(LandscapeModel model, Distribution kind, std::uint64_t seed, int degree) {
    if (model == LandscapeModel::iid_potential) return sample_polynomial({kind, seed, degree});
    const auto c = sample_coefficients({kind, seed, degree - 1});
    UniformStream extra(splitmix64(seed ^ 0x5ca1ab1eULL));
    double constant;
    if (kind == Distribution::gaussian) {
        constant = std::sqrt(-2.0 * std::log(extra.next())) * std::cos(2 * std::numbers::pi * extra.next());
    } else {
        constant = std::tan(std::numbers::pi * (extra.next() - 0.5));
    }
    return Polynomial::from_doubles(c).antiderivative(Rational(constant));
}

struct LandscapeOptions {
    LandscapeModel model = LandscapeModel::iid_gradient;
    Distribution kind = Distribution::gaussian;
    int degree = 101;  // degree of F
    size_t sample_size = 200;
    std::uint64_t master_seed = 1;
    double target_radius = 1e-12;
    unsigned workers = 1;
};

inline std::vector<LandscapeRecord> run_landscape(const LandscapeOptions& o) {
    return parallel_map<LandscapeRecord>(o.sample_size, o.workers, [&](size_t i) {
        const std::uint64_t seed = stream_seed(o.master_seed, o.degree, i);
        CountOptions co;
        co.target_relative_radius = o.target_radius;
        auto rec = landscape_analysis(sample_potential(o.model, o.kind, seed, o.degree), co);
        rec.index = i;
        rec.seed = seed;
        return rec;
    });
}

struct LandscapeSummary {
    size_t sample_size = 0;
    size_t partial_count = 0;
    size_t ambiguous_total = 0;
    StatsSummary maxima, minima, de_sitter;
    double paired_difference_se = 0;  // standard error of mean(de_sitter - minima / 2)
    double theory_maxima = 0;         // half the expected real-root count of F'
    Histogram log_abs_F2;
};

inline LandscapeSummary summarize_landscape(const LandscapeOptions& o, const std::vector<LandscapeRecord>& recs) {
    LandscapeSummary s;
    s.sample_size = recs.size();
    std::vector<double> mx, mn, ds, diff, logs;
    for (const auto& r : recs) {
        s.ambiguous_total += r.ambiguous;
        if (!r.certified || r.ambiguous > 0) {
            ++s.partial_count;
            continue;
        }
        mx.push_back(static_cast<double>(r.maxima));
        mn.push_back(static_cast<double>(r.minima));
        ds.push_back(static_cast<double>(r.de_sitter));
        diff.push_back(static_cast<double>(r.de_sitter) - static_cast<double>(r.minima) / 2);
        for (const auto& p : r.points) logs.push_back(p.log_abs_F2);
    }
    s.theory_maxima = gaussian_mean_theory(o.degree - 1) / 2;
    s.maxima = summarize(mx, true, s.theory_maxima);
    s.minima = summarize(mn, true);
    s.de_sitter = summarize(ds, true);
    const auto [dm, dv] = mean_variance(diff);
    (void)dm;
    s.paired_difference_se = diff.size() > 1 ? std::sqrt(dv / static_cast<double>(diff.size())) : 0.0;
    s.log_abs_F2 = fd_histogram(logs);
    return s;
}

}  // namespace certroots
