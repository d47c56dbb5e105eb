#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "certroots/io.hpp"

using namespace certroots;
namespace fs = std::filesystem;

namespace {

const std::string kCli = CERTROOTS_CLI;
const std::string kData = CERTROOTS_DATA_DIR;

struct CliRun {
    int code = -1;
    std::string out, err;
    Json json() const { return Json::parse(out); }
    Json error() const { return Json::parse(err); }
};

fs::path scratch() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("certroots_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// Runs the CLI through the shell with stdout and stderr captured separately.
CliRun run(const std::string& args, const std::string& env = "") {
    static int counter = 0;
    const auto base = scratch() / std::to_string(counter++);
    const std::string cmd = (env.empty() ? "" : env + " ") + "'" + kCli + "' " + args + " >'" + base.string() +
                            ".out' 2>'" + base.string() + ".err'";
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(base.string() + ".out");
    r.err = slurp(base.string() + ".err");
    return r;
}

std::string data(const std::string& name) { return "'" + kData + "/" + name + "'"; }

std::string write_file(const std::string& name, const std::string& content) {
    const auto p = scratch() / name;
    std::ofstream(p) << content;
    return "'" + p.string() + "'";
}

Rational q(const Json& s) { return parse_rational(s.get<std::string>()); }

size_t significant_digits(std::string s) {
    if (const auto e = s.find_first_of("eE"); e != std::string::npos) s.erase(e);
    std::string d;
    for (char c : s)
        if (std::isdigit(static_cast<unsigned char>(c))) d += c;
    d.erase(0, d.find_first_not_of('0'));
    return d.size();
}

std::vector<std::string> keys(const Json& j) {
    std::vector<std::string> k;
    for (auto it = j.begin(); it != j.end(); ++it) k.push_back(it.key());
    return k;
}

}  // namespace

// --- solve ------------------------------------------------------------------------------------------

TEST(CliSolve, WilkinsonTwentyDigits) {
    const auto r = run("-q solve " + data("wilkinson10.poly") + " --digits 20");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = r.json();
    EXPECT_TRUE(j["converged"].get<bool>());
    ASSERT_EQ(j["roots"].size(), 10u);
    std::vector<int> seen(11, 0);
    const Rational tol(1, mpz_class("100000000000000000000"));
    for (const auto& root : j["roots"]) {
        EXPECT_EQ(keys(root), (std::vector<std::string>{"re", "im", "radius"}));
        const Rational re = q(root["re"]);
        const long k = std::lround(re.get_d());
        ASSERT_TRUE(k >= 1 && k <= 10);
        ++seen[k];
        EXPECT_LE(abs(Rational(re - k)), tol) << root.dump();
        EXPECT_LE(abs(q(root["im"])), tol);
        EXPECT_GE(significant_digits(root["re"].get<std::string>()), 1u);
    }
    for (int k = 1; k <= 10; ++k) EXPECT_EQ(seen[k], 1);
}

TEST(CliSolve, PlusMinusOneBothMethods) {
    for (const std::string m : {"aberth", "qr"}) {
        const auto r = run("-q solve " + data("x2m1.poly") + " --method " + m);
        ASSERT_EQ(r.code, 0) << r.err;
        const auto j = r.json();
        EXPECT_EQ(j["method"], m);
        std::vector<double> re;
        for (const auto& root : j["roots"]) re.push_back(q(root["re"]).get_d());
        std::sort(re.begin(), re.end());
        ASSERT_EQ(re.size(), 2u);
        EXPECT_NEAR(re[0], -1, 1e-14);
        EXPECT_NEAR(re[1], 1, 1e-14);
    }
}

TEST(CliSolve, DegreeZeroIsUsageError) {
    const auto r = run("solve " + write_file("const.poly", "degree 0\n5\n"));
    EXPECT_EQ(r.code, 3);
    EXPECT_TRUE(r.out.empty());
    const auto e = r.error();
    EXPECT_EQ(e["exit_code"], 3);
    EXPECT_TRUE(e.contains("error"));
    EXPECT_TRUE(e.contains("message"));
}

TEST(CliErrors, InputErrorsExitThree) {
    EXPECT_EQ(run("solve /nonexistent/file.poly").code, 3);
    EXPECT_EQ(run("solve " + write_file("short.poly", "degree 3\n1 2\n")).code, 3);
    EXPECT_EQ(run("frobnicate").code, 3);
    EXPECT_EQ(run("solve " + data("x2m1.poly") + " --method newton").code, 3);
    EXPECT_EQ(run("experiment " + write_file("bad.json", R"({"degrees":[10],"colour":1})")).code, 3);
    const auto r = run("count-real");
    EXPECT_EQ(r.code, 3);
    EXPECT_NO_THROW(r.error());
}

// --- count-real ---------------------------------------------------------------------------------------

TEST(CliCount, Examples) {
    auto w = run("-q count-real " + data("wilkinson10.poly"));
    ASSERT_EQ(w.code, 0) << w.err;
    auto j = w.json();
    EXPECT_EQ(j["real_count"], 10);
    EXPECT_EQ(j["positive_count"], 10);
    ASSERT_EQ(j["intervals"].size(), 10u);
    for (const auto& iv : j["intervals"]) {
        const long k = std::lround(q(iv["lo"]).get_d());
        EXPECT_LE(q(iv["lo"]), k);
        EXPECT_GE(q(iv["hi"]), k);
    }
    j = run("-q count-real " + data("x2p1.poly")).json();
    EXPECT_EQ(j["real_count"], 0);
    const auto m = run("-q count-real " + data("x2m1_x2p4.poly"));
    ASSERT_EQ(m.code, 0);
    j = m.json();
    EXPECT_EQ(j["real_count"], 2);
    EXPECT_EQ(j["positive_count"], 1);
    EXPECT_EQ(j["negative_count"], 1);
}

TEST(CliCount, ScaledPolynomialSameCountProperty) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 4; ++trial) {
        const auto f = sample_polynomial({Distribution::gaussian, rng(), 30});
        const auto g = f.scaled(Rational(-(static_cast<long>(rng() % 1000) + 1), 7));
        auto text = [](const Polynomial& p) {
            std::ostringstream s;
            s << "degree " << p.degree() << '\n';
            for (const auto& c : p.coeffs()) s << format_rational(c) << '\n';
            return s.str();
        };
        const auto a = run("-q count-real " + write_file("f.poly", text(f))).json();
        const auto b = run("-q count-real " + write_file("g.poly", text(g))).json();
        EXPECT_EQ(a["real_count"], b["real_count"]) << trial;
        EXPECT_EQ(a["positive_count"], b["positive_count"]) << trial;
    }
}

TEST(CliCount, RepeatRunsAreByteIdentical) {
    const auto a = run("-q count-real " + data("x2m1_x2p4.poly") + " --gamma --crosscheck");
    const auto b = run("-q count-real " + data("x2m1_x2p4.poly") + " --gamma --crosscheck");
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_TRUE(a.json().contains("gamma_M"));
}

// --- precision --------------------------------------------------------------------------------------

TEST(CliPrecision, FlagAndEnvironment) {
    auto max_digits = [](const CliRun& r) {
        size_t m = 0;
        const Json j = r.json();
        for (const auto& root : j["roots"])
            for (const char* k : {"re", "im", "radius"}) m = std::max(m, significant_digits(root[k].get<std::string>()));
        return m;
    };
    // Random coefficients give roots that need every emitted digit.
    std::ostringstream poly;
    const auto c = sample_coefficients({Distribution::gaussian, 12345, 12});
    poly << "degree 12\n";
    for (double x : c) poly << format_rational(Rational(x)) << '\n';
    const std::string args = "count-real " + write_file("random12.poly", poly.str());
    const auto dflt = run("-q " + args);
    const auto flag = run("-q --precision 5 " + args);
    const auto env = run("-q " + args, "CERTROOTS_PRECISION=8");
    const auto both = run("-q --precision 4 " + args, "CERTROOTS_PRECISION=8");
    EXPECT_EQ(max_digits(dflt), 17u);
    EXPECT_EQ(max_digits(flag), 5u);
    EXPECT_EQ(max_digits(env), 8u);
    EXPECT_EQ(max_digits(both), 4u);
    EXPECT_EQ(run("-q " + args, "CERTROOTS_PRECISION=lots").code, 3);
}

TEST(CliPrecision, RadiiRoundUpward) {
    const auto j = run("-q --precision 3 solve " + data("wilkinson10.poly")).json();
    const auto full = run("-q --precision 40 solve " + data("wilkinson10.poly")).json();
    for (size_t i = 0; i < j["roots"].size(); ++i) EXPECT_GE(q(j["roots"][i]["radius"]), q(full["roots"][i]["radius"]));
}

// --- certify ------------------------------------------------------------------------------------------

TEST(CliCertify, WilkinsonBothMethods) {
    std::string pts;
    for (int k = 1; k <= 10; ++k) pts += std::to_string(k) + ".000000001 0\n";
    const auto r = run("-q certify " + data("wilkinson10.poly") + " " + write_file("w.pts", pts) + " --method both --gerschgorin");
    ASSERT_EQ(r.code, 0) << r.out << r.err;
    const auto j = r.json();
    ASSERT_EQ(j["alpha"]["certificates"].size(), 10u);
    for (const auto& c : j["alpha"]["certificates"]) {
        EXPECT_EQ(keys(c), (std::vector<std::string>{"point", "alpha", "beta", "gamma", "certified", "radius", "real"}));
        EXPECT_TRUE(c["certified"].get<bool>());
        EXPECT_EQ(c["real"], "real");
    }
    EXPECT_TRUE(j["global"]["tilli"]["certified"].get<bool>());
    EXPECT_EQ(j["global"]["real_count"], 10);
    for (const auto& d : j["global"]["disks"]) {
        EXPECT_EQ(keys(d), (std::vector<std::string>{"center", "radius", "kind", "component_id", "real_verdict", "real_interval"}));
        EXPECT_EQ(d["kind"], "newton");
    }
    EXPECT_EQ(j["global"]["gerschgorin"]["disks"][0]["kind"], "gerschgorin");
    EXPECT_TRUE(j["agreement"]["consistent"].get<bool>());
}

TEST(CliCertify, ConjugatePairNonreal) {
    const auto r = run("-q certify " + data("x2p1.poly") + " " + write_file("i.pts", "0 1\n0 -1\n") + " --method both");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = r.json();
    for (const auto& c : j["alpha"]["certificates"]) EXPECT_EQ(c["real"], "nonreal");
    for (const auto& d : j["global"]["disks"]) {
        EXPECT_EQ(d["real_verdict"], "nonreal");
        EXPECT_FALSE(d.contains("real_interval"));
    }
}

TEST(CliCertify, BadPointsAreUncertified) {
    EXPECT_EQ(run("-q certify " + data("x2p1.poly") + " " + write_file("z.pts", "0\n") + " --method alpha").code, 2);
    const auto dup = run("-q certify " + data("x2m1.poly") + " " + write_file("d.pts", "1\n1\n") + " --method global");
    EXPECT_EQ(dup.code, 2);
    EXPECT_EQ(dup.error()["error"], "indistinct_points");
}

TEST(CliCertify, TooManyPointsIsInputError) {
    EXPECT_EQ(run("-q certify " + data("x2m1.poly") + " " + write_file("3.pts", "1\n-1\n2\n")).code, 3);
}

// --- experiment ---------------------------------------------------------------------------------------

TEST(CliExperiment, DeterministicOutputs) {
    const auto a_dir = scratch() / "exp_a";
    const auto b_dir = scratch() / "exp_b";
    const std::string cfg = data("experiment_small.json") + " --samples 6";
    const auto a = run("-q experiment " + cfg + " --workers 1 --out '" + a_dir.string() + "'");
    const auto b = run("-q experiment " + cfg + " --workers 3 --out '" + b_dir.string() + "'");
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto j = a.json();
    EXPECT_EQ(j["master_seed"], 20240601u);
    for (const auto& d : j["degrees"]) EXPECT_EQ(d["master_seed"], 20240601u);
    size_t files = 0;
    for (const auto& e : fs::directory_iterator(a_dir)) {
        ++files;
        EXPECT_EQ(slurp(e.path()), slurp(b_dir / e.path().filename())) << e.path();
    }
    EXPECT_GE(files, 7u);
    EXPECT_TRUE(fs::exists(a_dir / "records_gaussian_N20.csv"));
    EXPECT_TRUE(fs::exists(a_dir / "hist_real_count_gaussian_N40.csv"));
    EXPECT_EQ(Json::parse(slurp(a_dir / "summary.json")), j);
    const auto seeded = run("-q experiment " + cfg + " --seed 5");
    EXPECT_EQ(seeded.json()["master_seed"], 5);
}

// --- landscape ----------------------------------------------------------------------------------------

TEST(CliLandscape, DoubleWellFromFile) {
    const auto r = run("-q landscape --file " + write_file("well.poly", "degree 4\n0\n0\n2\n0\n-1\n"));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = r.json();
    EXPECT_EQ(j["maxima"], 2);
    EXPECT_EQ(j["minima"], 1);
    EXPECT_EQ(j["de_sitter"], 0);
}

TEST(CliLandscape, BatchReportsSeed) {
    const auto r = run("-q landscape --degree 21 --samples 5 --seed 99");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.json()["master_seed"], 99);
    EXPECT_EQ(r.out, run("-q landscape --degree 21 --samples 5 --seed 99").out);
}

// --- basins -------------------------------------------------------------------------------------------

TEST(CliBasins, TilliRegionAroundPlusOne) {
    // With roots +-1 and N = 2, the test 3|y - 1| <= |y + 1| holds on the
    // closed disk of centre 5/4 and radius 3/4.
    const auto r = run("-q basins " + data("x2m1.poly") + " --method tilli --re -2 2 --im -1 1 --nx 41 --ny 21");
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "re,im,certified,root");
    const auto roots = run("-q solve " + data("x2m1.poly")).json()["roots"];
    size_t cells = 0;
    while (std::getline(in, line)) {
        ++cells;
        std::istringstream row(line);
        std::string re, im, cert, root;
        std::getline(row, re, ',');
        std::getline(row, im, ',');
        std::getline(row, cert, ',');
        std::getline(row, root, ',');
        const double x = std::stod(re), y = std::stod(im);
        const double d = std::hypot(x - 1.25, y) - 0.75;
        if (d < -1e-9) {
            EXPECT_EQ(cert, "1") << line;
            ASSERT_NE(root, "none");
            EXPECT_NEAR(q(roots[std::stoi(root)]["re"]).get_d(), 1.0, 1e-12);
        } else if (d > 1e-9 && std::hypot(x + 1.25, y) - 0.75 > 1e-9) {
            EXPECT_EQ(cert, "0") << line;
            EXPECT_EQ(root, "none");
        }
    }
    EXPECT_EQ(cells, 41u * 21u);
}

TEST(CliBasins, WilkinsonAlphaCellsNearEachRoot) {
    const auto r = run("-q basins " + data("wilkinson10.poly") + " --method alpha");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto roots = run("-q solve " + data("wilkinson10.poly")).json()["roots"];
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    // Default grid [0, 11] x [-1, 1], 100 x 50: the cells nearest each integer.
    std::vector<int> found(11, 0);
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string re, im, cert, root;
        std::getline(row, re, ',');
        std::getline(row, im, ',');
        std::getline(row, cert, ',');
        std::getline(row, root, ',');
        const double x = std::stod(re), y = std::stod(im);
        const long k = std::lround(x);
        if (k < 1 || k > 10 || std::abs(x - k) > 1e-9 || std::abs(y) > 0.03) continue;
        EXPECT_EQ(cert, "1") << line;
        ASSERT_NE(root, "none") << line;
        EXPECT_EQ(std::lround(q(roots[std::stoi(root)]["re"]).get_d()), k) << line;
        ++found[k];
    }
    for (int k = 1; k <= 10; ++k) EXPECT_EQ(found[k], 2) << k;
}

TEST(CliBasins, GridPointAtRoot) {
    // nx = 12 over [0, 11] puts lattice points on every integer, ny = 3 puts one row on the axis.
    for (const std::string m : {"alpha", "tilli"}) {
        const auto r = run("-q basins " + data("wilkinson10.poly") + " --method " + m + " --nx 12 --ny 3");
        ASSERT_EQ(r.code, 0);
        EXPECT_NE(r.out.find("\n3,0,1,"), std::string::npos) << m;
    }
}

TEST(CliBasins, SummaryAndBadGrid) {
    const auto s = run("-q basins " + data("wilkinson10.poly") + " --method tilli --summary --nx 30 --ny 10");
    ASSERT_EQ(s.code, 0);
    EXPECT_EQ(s.json()["roots"].size(), 10u);
    EXPECT_EQ(run("-q basins " + data("wilkinson10.poly") + " --nx 1").code, 3);
    EXPECT_EQ(run("-q basins " + data("wilkinson10.poly") + " --re 3 1").code, 3);
}
