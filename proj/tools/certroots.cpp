// certroots: certified univariate root finding and real-root statistics.
//
// stdout carries data (JSON or CSV), stderr carries logs and, on failure, a
// single-line JSON error object.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "certroots/certroots.hpp"

using namespace certroots;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kInternal = 1, kUncertified = 2, kInput = 3, kBudget = 4 };

struct Common {
    int precision = 0;  // 0: environment default
    bool quiet = false;
    int digits() const { return precision > 0 ? precision : default_digits(); }
};

void log(const Common& c, const std::string& msg) {
    if (!c.quiet) std::cerr << "certroots: " << msg << '\n';
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
    std::ostringstream o;
    o.precision(3);
    o << std::fixed << s << " s";
    return o.str();
}

// --- solve ------------------------------------------------------------------------------------

struct SolveArgs {
    std::string file;
    int digits = 16;
    std::string method = "aberth";
};

int cmd_solve(const Common& c, const SolveArgs& a) {
    const auto t0 = std::chrono::steady_clock::now();
    const Polynomial f = read_polynomial_file(a.file);
    if (f.degree() < 1) throw InputError("solve needs a polynomial of degree >= 1");
    SolveResult r;
    if (a.method == "qr") {
        r = solve_qr(f);
    } else {
        SolveOptions so;
        so.target_relative_radius = std::pow(10.0, -a.digits);
        if (a.digits > 300) so.target_relative_radius = 1e-300;
        so.max_precision_bits = std::max(4096u, static_cast<unsigned>(a.digits * 3.33) + 128);
        r = aberth_solve(f, so);
    }
    const int digits = c.precision > 0 ? c.precision : std::max(default_digits(), a.digits);
    Evaluator ev(f);
    Json roots = Json::array();
    for (const auto& ap : r.approximations) {
        BigFloat radius = mag::infinity<BigFloat>();
        try {
            radius = newton_radius(ev, ap.point).radius;
        } catch (const PrecisionError&) {
        }
        roots.push_back(root_json(ap.point, radius, digits));
    }
    emit({{"degree", f.degree()},
          {"method", a.method},
          {"converged", r.converged},
          {"precision_bits", r.precision_used},
          {"roots", std::move(roots)}});
    log(c, "solve: degree " + std::to_string(f.degree()) + ", " + fmt_seconds(seconds_since(t0)));
    if (!r.converged) throw BudgetError("solver did not reach the requested accuracy within the precision budget");
    return kOk;
}

// --- certify ----------------------------------------------------------------------------------

struct CertifyArgs {
    std::string file, points;
    std::string method = "global";
    bool gerschgorin = false;
};

Json alpha_section(Evaluator& ev, const std::vector<ComplexBig>& pts, int digits, bool& ok,
                   std::vector<RealVerdict>& verdicts) {
    const size_t n = static_cast<size_t>(ev.degree());
    std::vector<AlphaCertificate> certs;
    for (const auto& x : pts) certs.push_back(alpha_certify(ev, x));
    const auto d = certify_all_distinct(certs);
    if (d.all_distinct && pts.size() == n) {
        classify_real_alpha(certs);
    } else {
        // Without all N roots accounted for only the nonreal direction is sound.
        const auto p = points_of(certs);
        const DiskCloud cloud(p, radii_up(certs));
        for (size_t i = 0; i < certs.size(); ++i)
            certs[i].real = certs[i].certified && cloud.imag_exceeds(i, 1.0) ? RealVerdict::nonreal : RealVerdict::undecided;
    }
    Json arr = Json::array();
    for (const auto& cert : certs) {
        arr.push_back(alpha_json(cert, digits));
        verdicts.push_back(cert.real);
    }
    Json pairs = Json::array();
    for (auto [i, j] : d.failing_pairs) pairs.push_back({i, j});
    ok = d.all_distinct;
    return {{"certificates", std::move(arr)},
            {"certified_count", d.certified_count},
            {"all_distinct", d.all_distinct},
            {"all_roots_accounted", d.all_distinct && pts.size() == n},
            {"failing_pairs", std::move(pairs)}};
}

Json global_section(Evaluator& ev, const std::vector<ComplexBig>& pts, bool gersch, int digits, bool& ok,
                    std::vector<RealVerdict>& verdicts) {
    if (pts.size() != static_cast<size_t>(ev.degree()))
        throw InputError("the global method needs exactly N = " + std::to_string(ev.degree()) + " points, got " +
                         std::to_string(pts.size()));
    GlobalReport rep;
    try {
        rep = certify_global_all(ev, pts, gersch);
    } catch (const PrecisionError& e) {
        throw UncertifiedError(std::string("Newton radius unavailable: ") + e.what());
    }
    Json disks = Json::array();
    for (const auto& d : rep.disks) disks.push_back(disk_json(d, digits));
    Json tilli = {{"applicable", rep.tilli.applicable}, {"certified", rep.tilli.certified}};
    if (rep.tilli.failing_pair) tilli["failing_pair"] = {rep.tilli.failing_pair->first, rep.tilli.failing_pair->second};
    Json out = {{"tilli", std::move(tilli)},
                {"disks_disjoint", rep.real.disks_disjoint},
                {"real_count", rep.real.real_count()},
                {"undecided_count", rep.real.undecided()},
                {"disks", std::move(disks)}};
    if (rep.gerschgorin) {
        Json g = Json::array();
        for (const auto& d : rep.gerschgorin->disks) g.push_back(disk_json(d, digits));
        out["gerschgorin"] = {{"disks", std::move(g)}, {"components", rep.gerschgorin->clusters.components}};
    }
    const bool isolated = rep.tilli.applicable ? rep.tilli.certified : rep.real.disks_disjoint;
    ok = isolated && rep.real.undecided() == 0;
    verdicts = rep.real.verdicts;
    if (!isolated) {
        std::cerr << error_json("indistinct_points", "Newton disks are not isolating; points are not certified distinct", kUncertified).dump()
                  << '\n';
    }
    return out;
}

int cmd_certify(const Common& c, const CertifyArgs& a) {
    const Polynomial f = read_polynomial_file(a.file);
    if (f.degree() < 1) throw InputError("certify needs a polynomial of degree >= 1");
    const auto pts = read_points_file(a.points);
    if (pts.empty()) throw InputError("points file is empty");
    if (pts.size() > static_cast<size_t>(f.degree())) throw InputError("more points than the degree");
    const int digits = c.digits();
    Evaluator ev(f);
    Json out = {{"method", a.method}, {"degree", f.degree()}};
    bool ok_alpha = true, ok_global = true;
    std::vector<RealVerdict> va, vg;
    if (a.method == "alpha" || a.method == "both") out["alpha"] = alpha_section(ev, pts, digits, ok_alpha, va);
    if (a.method == "global" || a.method == "both") out["global"] = global_section(ev, pts, a.gerschgorin, digits, ok_global, vg);
    if (a.method == "both") {
        Json agree = Json::array();
        bool all = true;
        for (size_t i = 0; i < pts.size(); ++i) {
            const bool decided = va[i] != RealVerdict::undecided && vg[i] != RealVerdict::undecided;
            const bool same = va[i] == vg[i];
            all = all && (!decided || same);
            agree.push_back({{"index", i}, {"alpha", to_string(va[i])}, {"global", to_string(vg[i])}, {"agree", same}});
        }
        out["agreement"] = {{"consistent", all}, {"roots", std::move(agree)}};
    }
    emit(out);
    return ok_alpha && ok_global ? kOk : kUncertified;
}

// --- count-real -------------------------------------------------------------------------------

struct CountArgs {
    std::string file;
    double target = 1e-12;
    bool gamma = false;
    bool crosscheck = false;
};

int cmd_count(const Common& c, const CountArgs& a) {
    const auto t0 = std::chrono::steady_clock::now();
    const Polynomial f = read_polynomial_file(a.file);
    if (f.degree() < 1) throw InputError("count-real needs a polynomial of degree >= 1");
    CountOptions co;
    co.target_relative_radius = a.target;
    co.compute_gamma = a.gamma;
    co.alpha_crosscheck = a.crosscheck;
    const auto r = count_real_certified(f, co);
    Json out = count_json(r, c.digits());
    if (r.alpha_agrees) out["alpha_agrees"] = *r.alpha_agrees;
    emit(out);
    log(c, "count-real: degree " + std::to_string(f.degree()) + ", " + fmt_seconds(seconds_since(t0)));
    if (!r.fully_certified) {
        std::cerr << error_json("uncertified", r.failure, kUncertified).dump() << '\n';
        return kUncertified;
    }
    return kOk;
}

// --- experiment -------------------------------------------------------------------------------

struct ExperimentArgs {
    std::string config;
    std::string out_dir = ".";
    unsigned workers = 0;
    std::optional<std::uint64_t> seed;
    std::optional<size_t> samples;
};

void write_file(const fs::path& p, const std::function<void(std::ostream&)>& fn) {
    std::ofstream o(p);
    if (!o) throw InputError("cannot write '" + p.string() + "'");
    fn(o);
}

int cmd_experiment(const Common& c, const ExperimentArgs& a) {
    ExperimentConfig cfg = read_experiment_config(a.config);
    if (a.seed) cfg.master_seed = *a.seed;
    if (a.samples) {
        if (*a.samples < 2) throw InputError("sample size must be >= 2");
        cfg.sample_size = *a.samples;
    }
    const int digits = c.digits();
    fs::create_directories(a.out_dir);
    const fs::path dir(a.out_dir);
    Json per_degree = Json::array();
    size_t partial = 0;
    for (int degree : cfg.degrees) {
        const auto t0 = std::chrono::steady_clock::now();
        BatchOptions bo;
        bo.kind = cfg.kind;
        bo.degree = degree;
        bo.sample_size = cfg.sample_size;
        bo.master_seed = cfg.master_seed;
        bo.target_radius = cfg.target_radius;
        bo.workers = a.workers > 0 ? a.workers : default_workers();
        bo.compute_gamma = cfg.wants("gamma");
        bo.keep_roots = cfg.wants("densities");
        const auto recs = run_records(bo);
        const auto s = summarize_batch(bo, recs);
        partial += s.partial_count;
        const std::string tag = std::string(to_string(cfg.kind)) + "_N" + std::to_string(degree);
        if (cfg.wants("records")) write_file(dir / ("records_" + tag + ".csv"), [&](std::ostream& o) { write_records_csv(o, recs, digits); });
        if (cfg.wants("histograms"))
            write_file(dir / ("hist_real_count_" + tag + ".csv"), [&](std::ostream& o) { write_histogram_csv(o, s.real_count.histogram, digits); });
        if (cfg.wants("densities") && s.densities) {
            write_file(dir / ("density_re_" + tag + ".csv"), [&](std::ostream& o) { write_density_csv(o, s.densities->real_part, digits); });
            write_file(dir / ("density_im_" + tag + ".csv"), [&](std::ostream& o) { write_density_csv(o, s.densities->imag_part, digits); });
            write_file(dir / ("density_modulus_" + tag + ".csv"), [&](std::ostream& o) { write_density_csv(o, s.densities->modulus, digits); });
        }
        per_degree.push_back(batch_json(s, digits));
        log(c, "experiment: " + tag + ", " + std::to_string(recs.size()) + " samples, " + fmt_seconds(seconds_since(t0)));
    }
    const Json summary = {{"distribution", to_string(cfg.kind)},
                          {"master_seed", cfg.master_seed},
                          {"sample_size", cfg.sample_size},
                          {"target_radius", num(cfg.target_radius, digits)},
                          {"partial_count", partial},
                          {"degrees", std::move(per_degree)}};
    if (cfg.wants("summary")) write_file(dir / "summary.json", [&](std::ostream& o) { o << summary.dump(2) << '\n'; });
    emit(summary);
    return partial == 0 ? kOk : kUncertified;
}

// --- landscape --------------------------------------------------------------------------------

struct LandscapeArgs {
    std::string file;  // single potential F; otherwise a random batch
    int degree = 101;
    size_t samples = 200;
    std::uint64_t seed = 1;
    std::string model = "iid-gradient";
    std::string distribution = "gaussian";
    std::string out_dir;
    unsigned workers = 0;
};

int cmd_landscape(const Common& c, const LandscapeArgs& a) {
    const int digits = c.digits();
    if (!a.file.empty()) {
        const Polynomial F = read_polynomial_file(a.file);
        const auto r = landscape_analysis(F);
        Json pts = Json::array();
        for (const auto& p : r.points) {
            pts.push_back({{"interval", interval_json(p.interval, digits)},
                           {"kind", p.maximum ? "maximum" : p.minimum ? "minimum" : "ambiguous"},
                           {"de_sitter", p.de_sitter},
                           {"log_abs_F2", num(p.log_abs_F2, digits)}});
        }
        emit({{"degree", r.degree},
              {"certified", r.certified},
              {"real_critical", r.real_critical},
              {"maxima", r.maxima},
              {"minima", r.minima},
              {"de_sitter", r.de_sitter},
              {"ambiguous", r.ambiguous},
              {"critical_points", std::move(pts)}});
        return r.certified && r.ambiguous == 0 ? kOk : kUncertified;
    }
    if (a.degree < 2) throw InputError("landscape needs degree >= 2");
    if (a.samples < 2) throw InputError("sample size must be >= 2");
    const auto t0 = std::chrono::steady_clock::now();
    LandscapeOptions o;
    o.model = parse_landscape_model(a.model);
    o.kind = parse_distribution(a.distribution);
    o.degree = a.degree;
    o.sample_size = a.samples;
    o.master_seed = a.seed;
    o.workers = a.workers > 0 ? a.workers : default_workers();
    const auto recs = run_landscape(o);
    const auto s = summarize_landscape(o, recs);
    if (!a.out_dir.empty()) {
        fs::create_directories(a.out_dir);
        const std::string tag = std::string(to_string(o.kind)) + "_D" + std::to_string(o.degree);
        write_file(fs::path(a.out_dir) / ("landscape_" + tag + ".csv"), [&](std::ostream& os) { write_landscape_csv(os, recs); });
        write_file(fs::path(a.out_dir) / ("hist_log_abs_F2_" + tag + ".csv"), [&](std::ostream& os) { write_histogram_csv(os, s.log_abs_F2, digits); });
    }
    Json j = landscape_json(o, s, digits);
    j["log_abs_F2_histogram"] = histogram_json(s.log_abs_F2, digits);
    emit(j);
    log(c, "landscape: " + std::to_string(recs.size()) + " samples, " + fmt_seconds(seconds_since(t0)));
    return s.partial_count == 0 ? kOk : kUncertified;
}

// --- basins -----------------------------------------------------------------------------------

struct BasinArgs {
    std::string file;
    std::string method = "alpha";
    std::vector<double> re{0, 11}, im{-1, 1};
    int nx = 100, ny = 50;
    bool summary = false;
    unsigned workers = 0;
};

int cmd_basins(const Common& c, const BasinArgs& a) {
    const Polynomial f = read_polynomial_file(a.file);
    if (f.degree() < 1) throw InputError("basins needs a polynomial of degree >= 1");
    GridSpec g;
    g.re_lo = a.re[0];
    g.re_hi = a.re[1];
    g.im_lo = a.im[0];
    g.im_hi = a.im[1];
    g.nx = a.nx;
    g.ny = a.ny;
    g.method = parse_basin_method(a.method);
    const auto grid = basin_grid(f, g, a.workers > 0 ? a.workers : default_workers());
    const int digits = c.digits();
    if (a.summary) {
        Json roots = Json::array();
        for (size_t i = 0; i < grid.roots.size(); ++i) {
            Json r = root_json(grid.roots[i].point, grid.roots[i].radius, digits);
            r["certified_cells"] = grid.per_root[i];
            roots.push_back(std::move(r));
        }
        emit({{"method", to_string(g.method)},
              {"grid", {{"re", {num(g.re_lo, digits), num(g.re_hi, digits)}}, {"im", {num(g.im_lo, digits), num(g.im_hi, digits)}}, {"nx", g.nx}, {"ny", g.ny}}},
              {"relative_std", num(relative_std(grid.per_root), digits)},
              {"roots", std::move(roots)}});
    } else {
        write_basins_csv(std::cout, grid, digits);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified univariate root finding and real-root statistics", "certroots"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--precision", common.precision, "significant digits in emitted numbers (default from CERTROOTS_PRECISION, else 17)")
        ->check(CLI::Range(1, 10000));
    app.add_flag("-q,--quiet", common.quiet, "suppress log lines on stderr");

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "approximate all roots with Newton radii");
    solve->add_option("file", sa.file, "polynomial file")->required();
    solve->add_option("--digits", sa.digits, "requested relative accuracy in decimal digits")->check(CLI::Range(1, 10000));
    solve->add_option("--method", sa.method, "aberth or qr")->check(CLI::IsMember({"aberth", "qr"}));

    CertifyArgs ca;
    auto* certify = app.add_subcommand("certify", "certify given approximations");
    certify->add_option("file", ca.file, "polynomial file")->required();
    certify->add_option("points", ca.points, "points file: one 're [im]' per line")->required();
    certify->add_option("--method", ca.method, "alpha, global or both")->check(CLI::IsMember({"alpha", "global", "both"}));
    certify->add_flag("--gerschgorin", ca.gerschgorin, "also emit Gerschgorin disks of the secular matrix");

    CountArgs ka;
    auto* count = app.add_subcommand("count-real", "certified count of the real roots");
    count->add_option("file", ka.file, "polynomial file")->required();
    count->add_option("--target", ka.target, "relative radius target of the solver")->check(CLI::Range(1e-300, 0.5));
    count->add_flag("--gamma", ka.gamma, "also report the mean alpha-theory gamma at the roots");
    count->add_flag("--crosscheck", ka.crosscheck, "also run the alpha certifier and compare verdicts");

    ExperimentArgs ea;
    auto* exp = app.add_subcommand("experiment", "Monte-Carlo batch from a JSON config");
    exp->add_option("config", ea.config, "config file")->required();
    exp->add_option("--out", ea.out_dir, "output directory");
    exp->add_option("--workers", ea.workers, "worker threads (default: hardware threads)");
    exp->add_option("--seed", ea.seed, "override master_seed");
    exp->add_option("--samples", ea.samples, "override sample_size");

    LandscapeArgs la;
    auto* land = app.add_subcommand("landscape", "critical points of random potentials");
    land->add_option("--file", la.file, "analyse a single potential F instead of a random batch");
    land->add_option("--degree", la.degree, "degree D of F");
    land->add_option("--samples", la.samples, "number of potentials");
    land->add_option("--seed", la.seed, "master seed");
    land->add_option("--model", la.model, "iid-gradient or iid-potential")->check(CLI::IsMember({"iid-gradient", "iid-potential"}));
    land->add_option("--distribution", la.distribution, "gaussian or cauchy")->check(CLI::IsMember({"gaussian", "cauchy"}));
    land->add_option("--out", la.out_dir, "directory for per-record and histogram CSVs");
    land->add_option("--workers", la.workers, "worker threads");

    BasinArgs ba;
    auto* basins = app.add_subcommand("basins", "certifiable regions on a grid");
    basins->add_option("file", ba.file, "polynomial file")->required();
    basins->add_option("--method", ba.method, "alpha or tilli")->check(CLI::IsMember({"alpha", "tilli"}));
    basins->add_option("--re", ba.re, "real range a b")->expected(2);
    basins->add_option("--im", ba.im, "imaginary range c d")->expected(2);
    basins->add_option("--nx", ba.nx, "grid points along the real axis");
    basins->add_option("--ny", ba.ny, "grid points along the imaginary axis");
    basins->add_flag("--summary", ba.summary, "emit per-root certified-cell counts as JSON instead of the grid CSV");
    basins->add_option("--workers", ba.workers, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << error_json("usage", e.what(), kInput).dump() << '\n';
        return kInput;
    }

    try {
        if (*solve) return cmd_solve(common, sa);
        if (*certify) return cmd_certify(common, ca);
        if (*count) return cmd_count(common, ka);
        if (*exp) return cmd_experiment(common, ea);
        if (*land) return cmd_landscape(common, la);
        if (*basins) return cmd_basins(common, ba);
    } catch (const InputError& e) {
        std::cerr << error_json("input", e.what(), kInput).dump() << '\n';
        return kInput;
    } catch (const UncertifiedError& e) {
        std::cerr << error_json("uncertified", e.what(), kUncertified).dump() << '\n';
        return kUncertified;
    } catch (const BudgetError& e) {
        std::cerr << error_json("budget_exhausted", e.what(), kBudget).dump() << '\n';
        return kBudget;
    } catch (const PrecisionError& e) {
        std::cerr << error_json("budget_exhausted", e.what(), kBudget).dump() << '\n';
        return kBudget;
    } catch (const std::exception& e) {
        std::cerr << error_json("internal", e.what(), kInternal).dump() << '\n';
        return kInternal;
    }
    return kInput;
}
