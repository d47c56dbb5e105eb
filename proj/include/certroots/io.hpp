#pragma once

// JSON and CSV serialization. Every number is emitted as a decimal string;
// radii and other upper bounds are rounded upward.

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "certroots/basins.hpp"

namespace certroots {

using Json = nlohmann::ordered_json;

inline constexpr const char* kPrecisionEnv = "CERTROOTS_PRECISION";
inline constexpr int kFallbackDigits = 17;

/// Digits emitted when no --precision flag is given.
inline int default_digits() {
    if (const char* env = std::getenv(kPrecisionEnv)) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 10000) return static_cast<int>(v);
        throw InputError(std::string(kPrecisionEnv) + " must be a positive integer, got '" + env + "'");
    }
    return kFallbackDigits;
}

inline std::string num(const BigFloat& x, int digits) { return x.to_string(digits); }
inline std::string num_up(const BigFloat& x, int digits) { return x.to_string(digits, Round::up); }
inline std::string num_down(const BigFloat& x, int digits) { return x.to_string(digits, Round::down); }
inline std::string num(double x, int digits) { return BigFloat(x, kDoublePrecision).to_string(digits); }

inline Json point_json(const ComplexBig& z, int digits) { return {{"re", num(z.re, digits)}, {"im", num(z.im, digits)}}; }

inline Json root_json(const ComplexBig& z, const BigFloat& radius, int digits) {
    return {{"re", num(z.re, digits)}, {"im", num(z.im, digits)}, {"radius", num_up(radius, digits)}};
}

inline Json alpha_json(const AlphaCertificate& c, int digits) {
    Json j = {{"point", point_json(c.point, digits)},
              {"alpha", num_up(c.alpha, digits)},
              {"beta", num_up(c.beta, digits)},
              {"gamma", num_up(c.gamma, digits)},
              {"certified", c.certified},
              {"radius", num_up(c.radius, digits)},
              {"real", to_string(c.real)}};
    if (!c.certified && !c.reason.empty()) j["reason"] = c.reason;
    return j;
}

inline Json interval_json(const RealInterval& iv, int digits) {
    return {{"lo", num_down(iv.lo, digits)}, {"hi", num_up(iv.hi, digits)}};
}

inline Json disk_json(const InclusionDisk& d, int digits) {
    Json j = {{"center", point_json(d.center, digits)},
              {"radius", num_up(d.radius, digits)},
              {"kind", to_string(d.kind)},
              {"component_id", d.component_id},
              {"real_verdict", to_string(d.real)}};
    if (d.real_interval) j["real_interval"] = interval_json(*d.real_interval, digits);
    return j;
}

inline Json count_json(const CountResult& r, int digits) {
    Json intervals = Json::array();
    for (const auto& root : r.roots)
        if (root.verdict == RealVerdict::real) intervals.push_back(interval_json(*root.interval, digits));
    Json roots = Json::array();
    for (const auto& root : r.roots) {
        Json j = root_json(root.point, root.radius, digits);
        j["real"] = to_string(root.verdict);
        roots.push_back(std::move(j));
    }
    Json out = {{"real_count", r.real_count},
                {"positive_count", r.positive_count},
                {"negative_count", r.negative_count},
                {"zero_count", r.zero_count},
                {"certified", r.fully_certified},
                {"intervals", std::move(intervals)},
                {"roots", std::move(roots)},
                {"refinement_rounds", r.rounds},
                {"max_precision_bits", r.max_precision_bits}};
    if (r.gamma_M) out["gamma_M"] = num(*r.gamma_M, digits);
    if (r.gamma_mean) out["gamma_mean"] = num(*r.gamma_mean, digits);
    if (!r.fully_certified) out["failure"] = r.failure;
    return out;
}

inline Json error_json(const std::string& kind, const std::string& message, int exit_code) {
    return {{"error", kind}, {"message", message}, {"exit_code", exit_code}};
}

// --- experiment outputs ---------------------------------------------------------------------

inline Json histogram_json(const Histogram& h, int digits) {
    Json edges = Json::array();
    for (double e : h.edges) edges.push_back(num(e, digits));
    return {{"edges", std::move(edges)}, {"counts", h.counts}};
}

inline Json stats_json(const StatsSummary& s, int digits, bool with_histogram = false) {
    Json j = {{"sample_size", s.sample_size},
              {"mean", num(s.mean, digits)},
              {"variance", num(s.variance, digits)},
              {"standard_error", num(s.standard_error(), digits)}};
    if (s.theory_value) j["theory_value"] = num(*s.theory_value, digits);
    if (with_histogram) j["histogram"] = histogram_json(s.histogram, digits);
    return j;
}

inline Json batch_json(const BatchSummary& s, int digits) {
    Json j = {{"distribution", to_string(s.kind)},
              {"degree", s.degree},
              {"master_seed", s.master_seed},
              {"sample_size", s.sample_size},
              {"partial_count", s.partial_count},
              {"real_count", stats_json(s.real_count, digits, true)},
              {"positive_count", stats_json(s.positive_count, digits)},
              {"negative_count", stats_json(s.negative_count, digits)},
              {"positive_negative_ratio", num(s.positive_negative_ratio, digits)}};
    if (!theory_meaningful(s.degree)) j["theory_flag"] = "asymptotic formula outside its range";
    if (s.maslova) {
        j["maslova_M"] = num(*s.maslova, digits);
        j["variance_over_M"] = num(s.real_count.variance / *s.maslova, digits);
    }
    if (s.gamma_mean) j["gamma_mean"] = stats_json(*s.gamma_mean, digits);
    if (s.gamma_M) j["gamma_M"] = stats_json(*s.gamma_M, digits);
    if (s.densities) j["modulus_fraction_0.8_1.25"] = num(s.modulus_fraction_near_one, digits);
    return j;
}

/// (bin_lo, bin_hi, count) rows.
inline void write_histogram_csv(std::ostream& out, const Histogram& h, int digits) {
    out << "bin_lo,bin_hi,count\n";
    for (size_t k = 0; k < h.counts.size(); ++k)
        out << num(h.edges[k], digits) << ',' << num(h.edges[k + 1], digits) << ',' << h.counts[k] << '\n';
}

/// (bin_center, density) rows; density integrates to one over the binned range.
inline void write_density_csv(std::ostream& out, const Histogram& h, int digits) {
    out << "bin_center,density\n";
    const double total = static_cast<double>(h.total());
    for (size_t k = 0; k < h.counts.size(); ++k) {
        const double w = h.edges[k + 1] - h.edges[k];
        const double d = total > 0 ? static_cast<double>(h.counts[k]) / (total * w) : 0.0;
        out << num(0.5 * (h.edges[k] + h.edges[k + 1]), digits) << ',' << num(d, digits) << '\n';
    }
}

inline void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& recs, int digits) {
    out << "distribution,degree,index,seed,status,real_count,positive_count,negative_count,zero_count,rounds,"
           "precision_bits,gamma_mean,gamma_M\n";
    for (const auto& r : recs) {
        out << to_string(r.spec.kind) << ',' << r.spec.degree << ',' << r.index << ',' << r.spec.seed << ','
            << (r.fully_certified ? "fully-certified" : "partial") << ',' << r.real_count << ',' << r.positive_count
            << ',' << r.negative_count << ',' << r.zero_count << ',' << r.rounds << ',' << r.precision_bits << ','
            << (r.gamma_mean ? num(*r.gamma_mean, digits) : "") << ',' << (r.gamma_M ? num(*r.gamma_M, digits) : "")
            << '\n';
    }
}

inline Json landscape_json(const LandscapeOptions& o, const LandscapeSummary& s, int digits) {
    return {{"model", to_string(o.model)},
            {"distribution", to_string(o.kind)},
            {"degree", o.degree},
            {"master_seed", o.master_seed},
            {"sample_size", s.sample_size},
            {"partial_count", s.partial_count},
            {"ambiguous_points", s.ambiguous_total},
            {"maxima", stats_json(s.maxima, digits)},
            {"minima", stats_json(s.minima, digits)},
            {"de_sitter_minima", stats_json(s.de_sitter, digits)},
            {"de_sitter_minus_half_minima_se", num(s.paired_difference_se, digits)},
            {"theory_maxima", num(s.theory_maxima, digits)}};
}

inline void write_landscape_csv(std::ostream& out, const std::vector<LandscapeRecord>& recs) {
    out << "degree,index,seed,status,real_critical,maxima,minima,de_sitter,ambiguous\n";
    for (const auto& r : recs) {
        out << r.degree << ',' << r.index << ',' << r.seed << ',' << (r.certified ? "fully-certified" : "partial") << ','
            << r.real_critical << ',' << r.maxima << ',' << r.minima << ',' << r.de_sitter << ',' << r.ambiguous << '\n';
    }
}

inline void write_basins_csv(std::ostream& out, const BasinGrid& g, int digits) {
    out << "re,im,certified,root\n";
    for (const auto& c : g.cells) {
        out << num(c.re, digits) << ',' << num(c.im, digits) << ',' << (c.certified ? 1 : 0) << ',';
        if (c.root) out << *c.root;
        else out << "none";
        out << '\n';
    }
}

// --- configuration --------------------------------------------------------------------------

struct ExperimentConfig {
    Distribution kind = Distribution::gaussian;
    std::vector<int> degrees{100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
    size_t sample_size = 200;
    std::uint64_t master_seed = 1;
    double target_radius = 1e-12;
    std::vector<std::string> outputs{"records", "summary", "histograms"};

    bool wants(const std::string& name) const { return std::find(outputs.begin(), outputs.end(), name) != outputs.end(); }
};

inline const std::vector<std::string>& known_outputs() {
    static const std::vector<std::string> k{"records", "summary", "histograms", "densities", "gamma"};
    return k;
}

inline ExperimentConfig parse_experiment_config(const Json& j) {
    ExperimentConfig c;
    if (!j.is_object()) throw InputError("experiment config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        static const std::vector<std::string> keys{"distribution", "degrees", "sample_size", "master_seed", "target_radius", "outputs"};
        if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) throw InputError("unknown config key '" + it.key() + "'");
    }
    try {
        if (j.contains("distribution")) c.kind = parse_distribution(j.at("distribution").get<std::string>());
        if (j.contains("degrees")) c.degrees = j.at("degrees").get<std::vector<int>>();
        if (j.contains("sample_size")) c.sample_size = j.at("sample_size").get<size_t>();
        if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("target_radius")) c.target_radius = j.at("target_radius").get<double>();
        if (j.contains("outputs")) c.outputs = j.at("outputs").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("bad config value: ") + e.what());
    }
    if (c.degrees.empty()) throw InputError("degrees must be non-empty");
    for (int d : c.degrees)
        if (d < 1) throw InputError("degrees must be >= 1");
    if (c.sample_size < 2) throw InputError("sample_size must be >= 2");
    if (!(c.target_radius > 0 && c.target_radius < 1)) throw InputError("target_radius must lie in (0, 1)");
    for (const auto& o : c.outputs)
        if (std::find(known_outputs().begin(), known_outputs().end(), o) == known_outputs().end())
            throw InputError("unknown output '" + o + "'");
    return c;
}

inline ExperimentConfig read_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file '" + path + "'");
    try {
        return parse_experiment_config(Json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("config is not valid JSON: ") + e.what());
    }
}

/// Points file: one point per line as "re im" or "re", each a decimal or p/q.
inline std::vector<ComplexBig> read_points(std::istream& in) {
    std::vector<ComplexBig> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string a, b, extra;
        if (!(ss >> a)) continue;
        ss >> b;
        if (ss >> extra) throw InputError("too many fields in points line: '" + line + "'");
        const Rational re = parse_rational(a);
        const Rational im = b.empty() ? Rational(0) : parse_rational(b);
        // Decimal input is held exactly when it fits in 4096 bits, otherwise rounded.
        const Precision p{4096};
        BigFloat r(re, p, Round::nearest), i(im, p, Round::nearest);
        pts.push_back({r.rounded(std::max(kDoublePrecision, Precision{static_cast<unsigned>(mpfr_min_prec(r.get()))})),
                       i.rounded(std::max(kDoublePrecision, Precision{static_cast<unsigned>(mpfr_min_prec(i.get()))}))});
    }
    return pts;
}

inline std::vector<ComplexBig> read_points_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open points file '" + path + "'");
    return read_points(in);
}

}  // namespace certroots
