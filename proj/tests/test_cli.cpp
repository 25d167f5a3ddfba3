// Command-line surface. In-process cases drive cli_main directly and check
// exit codes, error channels, and that reported numbers are bit-identical to
// what the library computes on the same inputs. A few cases exec the real
// binary to pin byte-level determinism of seeded runs. CSV reading and
// formatting are exercised here too, since the tool owns both ends of that
// pipe.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlreg/cli.hpp"
#include "nlreg/csv.hpp"
#include "nlreg/curvature.hpp"
#include "nlreg/errors.hpp"
#include "nlreg/glm.hpp"
#include "nlreg/hetero.hpp"
#include "nlreg/inference.hpp"
#include "nlreg/models.hpp"
#include "nlreg/solvers.hpp"

using namespace nlreg;
using json = nlohmann::json;

namespace {

std::string tmp_path(const std::string& name) {
    return std::string(TEST_TMPDIR) + "/" + name;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    REQUIRE(f.good());
    f << text;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

struct CliOutcome {
    int code = -1;
    std::string out;
    std::string err;
};

CliOutcome run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliOutcome r;
    r.code = cli_main(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

// Runs the installed binary in a subshell, capturing both streams.
CliOutcome run_tool(const std::string& argline) {
    static int counter = 0;
    std::string base = tmp_path("tool_" + std::to_string(counter++));
    std::string cmd = std::string(NLFIT_BIN) + " " + argline + " > " + base +
                      ".out 2> " + base + ".err";
    int raw = std::system(cmd.c_str());
    CliOutcome r;
    r.code = (raw != -1 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
    r.out = read_file(base + ".out");
    r.err = read_file(base + ".err");
    return r;
}

// Michaelis-Menten curve sampled on a doubling design. Gauss-Newton from
// (5, 4) lands on (6, 5) to machine precision on these points.
std::string mm_exact_path() {
    static std::string path;
    if (path.empty()) {
        path = tmp_path("mm_exact.csv");
        std::ostringstream csv;
        csv << "conc,rate\n";
        double x = 0.5;
        for (int i = 0; i < 10; ++i, x *= 2.0)
            csv << format_double(x) << ","
                << format_double(6.0 * x / (5.0 + x)) << "\n";
        write_file(path, csv.str());
    }
    return path;
}

// Same design with a small deterministic perturbation so that s2 > 0 and
// regions, curvature scaling, and the posterior all have something to work
// with.
std::string mm_noisy_path() {
    static std::string path;
    if (path.empty()) {
        path = tmp_path("mm_noisy.csv");
        std::ostringstream csv;
        csv << "conc,rate\n";
        double x = 0.5;
        for (int i = 0; i < 12; ++i, x *= 2.0) {
            double y = 6.0 * x / (5.0 + x) + 0.05 * std::sin(2.3 * i + 0.7);
            csv << format_double(x) << "," << format_double(y) << "\n";
        }
        write_file(path, csv.str());
    }
    return path;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("usage mistakes are refused with exit 2 and nothing on stdout") {
    std::string data = mm_exact_path();

    CliOutcome r = run_cli({"fit", "--data", data, "--model", "michaelis_menten",
                            "--init", "5"});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(contains(r.err, "usage error:"));
    CHECK(contains(r.err, "init length 1, model requires 2"));

    r = run_cli({"fit", "--data", data, "--model", "michaelis_menten", "--init",
                 "5,4", "--alpha", "1.5"});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "--alpha must be in (0,1)"));

    r = run_cli({"fit", "--data", data, "--model", "mystery_curve", "--init", "1,2"});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "unknown model id 'mystery_curve'"));

    r = run_cli({"fit", "--data", data, "--model", "michaelis_menten", "--init",
                 "5,4", "--variance", "banana"});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "--variance must be constant or power_of_mean"));

    r = run_cli({"simulate", "--generator", "mm_normal", "--n", "20"});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "--seed"));

    r = run_cli({"coverage", "--n", "50", "--reps", "99", "--seed", "1"});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "--reps must be at least 100"));

    r = run_cli({"smooth", "--data", data, "--bandwidth", "1", "--query", "1",
                 "--kernel", "box"});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "kernel"));

    r = run_cli({"bayes", "--data", data, "--model", "michaelis_menten", "--init",
                 "6,5", "--seed", "1", "--iterations", "100", "--burn-in", "100"});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "--burn-in must be in [0, --iterations)"));

    r = run_cli({"frobnicate"});
    CHECK(r.code == 2);

    r = run_cli({});
    CHECK(r.code == 2);
}

TEST_CASE("--help lists every subcommand and exits 0") {
    CliOutcome r = run_cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    for (const char* cmd : {"fit", "glm", "region", "curvature", "smooth",
                            "bayes", "simulate", "coverage", "table1", "figure1"})
        CHECK(contains(r.out, cmd));
}

TEST_CASE("csv reader handles line endings, comments, and bad cells") {
    std::string good = tmp_path("pairs.csv");
    write_file(good, "x,y\r\n1, 2\r\n3,4\r\n");
    Dataset d = read_csv(good);
    REQUIRE(d.n() == 2);
    REQUIRE(d.k() == 1);
    CHECK(d.x(0, 0) == 1.0);
    CHECK(d.y(0) == 2.0);
    CHECK(d.y(1) == 4.0);

    CsvTable t = parse_csv_text("# {\"kind\":\"wald\"}\ntheta1,theta2\n\n0.5,1.5\n",
                                "inline");
    REQUIRE(t.header.size() == 2);
    CHECK(t.header[0] == "theta1");
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][1] == 1.5);

    std::string bad = tmp_path("bad_cell.csv");
    write_file(bad, "x,y\n1,2\n3,oops\n");
    try {
        read_csv(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(e.column == 2);
        CHECK(contains(e.what(), "oops"));
    }

    std::string ragged = tmp_path("ragged.csv");
    write_file(ragged, "x,y\n1,2,3\n");
    CHECK_THROWS_AS(read_csv(ragged), ParseError);

    std::string headless = tmp_path("headless.csv");
    write_file(headless, "x,y\n");
    try {
        read_csv(headless);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(contains(e.what(), "no observations"));
    }

    std::string y_only = tmp_path("y_only.csv");
    write_file(y_only, "y\n1\n2\n");
    CHECK_THROWS_AS(read_csv(y_only), IoError);

    CHECK_THROWS_AS(read_csv(tmp_path("does_not_exist.csv")), IoError);
}

TEST_CASE("format_double survives a text round trip exactly") {
    const double values[] = {0.1,
                             1.0 / 3.0,
                             3.141592653589793,
                             2.2250738585072014e-308,
                             -6.02e23,
                             1e300,
                             0.0,
                             -0.0,
                             42.0,
                             6.0 * 64.0 / 69.0};
    for (double v : values) {
        std::string s = format_double(v);
        char* end = nullptr;
        double back = std::strtod(s.c_str(), &end);
        CHECK(back == v);
        CHECK(*end == '\0');
    }
}

TEST_CASE("fit recovers an exact curve and reports the library's numbers") {
    CliOutcome r = run_cli({"fit", "--data", mm_exact_path(), "--model",
                            "michaelis_menten", "--init", "5,4"});
    REQUIRE(r.code == 0);
    CHECK(r.err.empty());
    json j = json::parse(r.out);
    CHECK(j["command"] == "fit");
    CHECK(j["model"] == "michaelis_menten");
    CHECK(j["solver"] == "gn");
    CHECK(j["converged"] == true);
    REQUIRE(j["theta_hat"].size() == 2);
    double t1 = j["theta_hat"][0].get<double>();
    double t2 = j["theta_hat"][1].get<double>();
    CHECK(std::abs(t1 - 6.0) <= 1e-8);
    CHECK(std::abs(t2 - 5.0) <= 1e-8);
    CHECK(j["s_value"].get<double>() <= 1e-16);

    // Converged with n > p, so the inference block is present.
    REQUIRE(j.contains("wald_intervals"));
    REQUIRE(j["wald_intervals"].size() == 2);
    CHECK(j["wald_intervals"][0][0].get<double>() <= t1);
    CHECK(t1 <= j["wald_intervals"][0][1].get<double>());
    CHECK(j["alpha"].get<double>() == 0.05);
    CHECK(j["s2"].get<double>() >= 0.0);

    // The JSON doubles parse back to the very bits the solver produced.
    Dataset data = read_csv(mm_exact_path());
    FitResult fit =
        gauss_newton(model_from_string("michaelis_menten"), data,
                     Eigen::Vector2d(5.0, 4.0));
    CHECK(t1 == fit.theta_hat(0));
    CHECK(t2 == fit.theta_hat(1));
    CHECK(j["s_value"].get<double>() == fit.s_value);
    CHECK(j["iterations"].get<int>() == fit.iterations);
}

TEST_CASE("fit with a power-of-mean variance runs the iterated GLS path") {
    CliOutcome r = run_cli({"fit", "--data", mm_noisy_path(), "--model",
                            "michaelis_menten", "--init", "5,4", "--variance",
                            "power_of_mean", "--gamma", "0.5"});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["solver"] == "gls");
    CHECK(j["converged"] == true);
    double t1 = j["theta_hat"][0].get<double>();
    double t2 = j["theta_hat"][1].get<double>();
    CHECK(std::abs(t1 - 6.0) < 0.5);
    CHECK(std::abs(t2 - 5.0) < 0.5);
}

TEST_CASE("--output redirects the report into a file and leaves stdout empty") {
    std::string out_path = tmp_path("fit_report.json");
    CliOutcome r = run_cli({"fit", "--data", mm_exact_path(), "--model",
                            "michaelis_menten", "--init", "5,4", "--output",
                            out_path});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    CHECK(r.err.empty());
    json j = json::parse(read_file(out_path));
    CHECK(j["converged"] == true);
}

TEST_CASE("three-parameter regions refuse to trace but report membership") {
    std::string quad = tmp_path("quad.csv");
    std::ostringstream csv;
    csv << "x,y\n";
    for (int i = 0; i < 12; ++i) {
        double x = -2.0 + 0.4 * i;
        double y = 1.0 + 2.0 * x + 3.0 * x * x + 0.05 * std::sin(1.9 * i);
        csv << format_double(x) << "," << format_double(y) << "\n";
    }
    write_file(quad, csv.str());

    CliOutcome r = run_cli({"region", "--data", quad, "--model", "polynomial2",
                            "--init", "0,0,0"});
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    json e = json::parse(r.err);
    CHECK(e["error"] == "error");
    CHECK(contains(e["message"].get<std::string>(), "requires p=2"));
    CHECK(contains(e["message"].get<std::string>(), "--membership-only"));

    r = run_cli({"region", "--data", quad, "--model", "polynomial2", "--init",
                 "0,0,0", "--membership-only"});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["command"] == "region");
    CHECK(j["kind"] == "likelihood");
    CHECK(j["contains_theta_hat"] == true);
    CHECK(j["threshold"].get<double>() > 0.0);
    CHECK(j["level"].get<double>() == 0.95);

    r = run_cli({"region", "--data", quad, "--model", "polynomial2", "--init",
                 "0,0,0", "--membership-only", "--kind", "wald"});
    REQUIRE(r.code == 0);
    j = json::parse(r.out);
    CHECK(j["kind"] == "wald");
    CHECK(j["contains_theta_hat"] == true);
}

TEST_CASE("boundary grids round trip through their CSV form byte for byte") {
    CliOutcome r = run_cli({"region", "--data", mm_noisy_path(), "--model",
                            "michaelis_menten", "--init", "5,4", "--kind",
                            "wald"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.substr(0, 2) == "# ");

    std::size_t nl1 = r.out.find('\n');
    REQUIRE(nl1 != std::string::npos);
    json meta = json::parse(r.out.substr(2, nl1 - 2));
    CHECK(meta["kind"] == "wald");
    CHECK(meta["level"].get<double>() == 0.95);
    CHECK(meta["threshold"].get<double>() > 0.0);

    CsvTable t = parse_csv_text(r.out, "wald_boundary");
    REQUIRE(t.header == (std::vector<std::string>{"theta1", "theta2"}));
    CHECK(t.rows.size() == 360);

    // Re-serialising the parsed values reproduces the emitted bytes exactly,
    // so nothing was lost between the library and the file format.
    std::size_t nl2 = r.out.find('\n', nl1 + 1);
    REQUIRE(nl2 != std::string::npos);
    std::ostringstream rebuilt;
    for (const auto& row : t.rows)
        rebuilt << format_double(row[0]) << "," << format_double(row[1]) << "\n";
    CHECK(rebuilt.str() == r.out.substr(nl2 + 1));

    r = run_cli({"region", "--data", mm_noisy_path(), "--model",
                 "michaelis_menten", "--init", "5,4", "--kind", "likelihood",
                 "--resolution", "80"});
    REQUIRE(r.code == 0);
    nl1 = r.out.find('\n');
    meta = json::parse(r.out.substr(2, nl1 - 2));
    CHECK(meta["kind"] == "likelihood");
    t = parse_csv_text(r.out, "likelihood_boundary");
    CHECK(t.rows.size() > 0);
}

TEST_CASE("an all-interior contour rectangle fails as too coarse") {
    Dataset data = read_csv(mm_noisy_path());
    FitResult fit = gauss_newton(model_from_string("michaelis_menten"), data,
                                 Eigen::Vector2d(5.0, 4.0));
    REQUIRE(fit.status == FitStatus::converged);
    double eps = 1e-6;
    std::ostringstream rect;
    rect << format_double(fit.theta_hat(0) - eps) << ","
         << format_double(fit.theta_hat(0) + eps) << ","
         << format_double(fit.theta_hat(1) - eps) << ","
         << format_double(fit.theta_hat(1) + eps);

    CliOutcome r = run_cli({"region", "--data", mm_noisy_path(), "--model",
                            "michaelis_menten", "--init", "5,4", "--kind",
                            "likelihood", "--rect", rect.str(), "--resolution",
                            "16"});
    CHECK(r.code == 1);
    json e = json::parse(r.err);
    CHECK(e["error"] == "grid_too_coarse");
}

TEST_CASE("computation failures exit 1 with machine-readable errors") {
    CliOutcome r = run_cli({"fit", "--data", tmp_path("does_not_exist.csv"),
                            "--model", "michaelis_menten", "--init", "5,4"});
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    json e = json::parse(r.err);
    CHECK(e["error"] == "io_error");
    CHECK(contains(e["message"].get<std::string>(), "cannot open"));

    std::string bad = tmp_path("bad_cell.csv");
    write_file(bad, "x,y\n1,2\n3,oops\n");
    r = run_cli({"fit", "--data", bad, "--model", "michaelis_menten", "--init",
                 "5,4"});
    CHECK(r.code == 1);
    e = json::parse(r.err);
    CHECK(e["error"] == "parse_error");
    CHECK(contains(e["message"].get<std::string>(), "oops"));
}

TEST_CASE("smooth emits exactly the library's estimates") {
    std::string pairs = tmp_path("smooth_pairs.csv");
    write_file(pairs, "x,y\n0,1\n1,3\n2,2\n4,5\n6,4\n");

    CliOutcome r = run_cli({"smooth", "--data", pairs, "--bandwidth", "2",
                            "--query", "0.5,3,5.5"});
    REQUIRE(r.code == 0);
    CsvTable t = parse_csv_text(r.out, "smooth");
    REQUIRE(t.header == (std::vector<std::string>{"query_x", "estimate"}));
    REQUIRE(t.rows.size() == 3);

    Dataset data = read_csv(pairs);
    KernelSpec spec;
    spec.bandwidth = 2.0;
    spec.kernel = KernelKind::gaussian;
    const double queries[] = {0.5, 3.0, 5.5};
    for (int i = 0; i < 3; ++i) {
        CHECK(t.rows[static_cast<std::size_t>(i)][0] == queries[i]);
        CHECK(t.rows[static_cast<std::size_t>(i)][1] ==
              nadaraya_watson(queries[i], data, spec));
    }

    r = run_cli({"smooth", "--data", pairs, "--bandwidth", "2", "--kernel",
                 "epanechnikov", "--query", "3"});
    REQUIRE(r.code == 0);
    t = parse_csv_text(r.out, "smooth");
    spec.kernel = KernelKind::epanechnikov;
    CHECK(t.rows[0][1] == nadaraya_watson(3.0, data, spec));
}

TEST_CASE("glm through the tool matches a direct irls fit bit for bit") {
    std::string path = tmp_path("logit.csv");
    write_file(path, "x,y\n-2,0\n-1,0\n-1,1\n0,0\n0,1\n1,0\n1,1\n2,1\n");

    CliOutcome r = run_cli({"glm", "--data", path, "--family", "binomial",
                            "--add-intercept"});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["command"] == "glm");
    CHECK(j["family"] == "binomial");
    CHECK(j["link"] == "logit");
    CHECK(j["status"] == "converged");
    CHECK(j["separation_warning"] == false);
    CHECK(j["dispersion"].get<double>() == 1.0);
    REQUIRE(j["beta_hat"].size() == 2);

    Dataset data = read_csv(path);
    Eigen::MatrixXd design(data.n(), 2);
    design << Eigen::VectorXd::Ones(data.n()), data.x;
    GlmFit fit = irls_fit(family_from_string("binomial"), link_from_string("logit"),
                          design, data.y);
    CHECK(j["beta_hat"][0].get<double>() == fit.beta_hat(0));
    CHECK(j["beta_hat"][1].get<double>() == fit.beta_hat(1));
    CHECK(j["deviance"].get<double>() == fit.deviance);
    CHECK(j["iterations"].get<int>() == fit.iterations);
}

TEST_CASE("curvature reports the library's summaries for the same fit") {
    CliOutcome r = run_cli({"curvature", "--data", mm_noisy_path(), "--model",
                            "michaelis_menten", "--init", "5,4", "--directions",
                            "512"});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["command"] == "curvature");
    CHECK(j["directions_used"].get<int>() == 512);

    Dataset data = read_csv(mm_noisy_path());
    ModelSpec model = model_from_string("michaelis_menten");
    FitResult fit = gauss_newton(model, data, Eigen::Vector2d(5.0, 4.0));
    REQUIRE(fit.status == FitStatus::converged);
    CurvatureReport rep = rms_curvatures(model, data, fit.theta_hat, 0.05, 512);
    CHECK(j["rms_intrinsic"].get<double>() == rep.rms_intrinsic);
    CHECK(j["rms_parameter_effects"].get<double>() == rep.rms_parameter_effects);
    CHECK(j["scaling_radius"].get<double>() == rep.scaling_radius);
}

TEST_CASE("bayes writes a chain file consistent with its summary") {
    std::string chain_path = tmp_path("chain.csv");
    CliOutcome r = run_cli({"bayes", "--data", mm_noisy_path(), "--model",
                            "michaelis_menten", "--init", "6,5", "--iterations",
                            "3000", "--burn-in", "1000", "--seed", "17",
                            "--chain-out", chain_path});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["command"] == "bayes");
    CHECK(j["seed"].get<int>() == 17);
    REQUIRE(j["mean"].size() == 3);
    REQUIRE(j["ess"].size() == 3);
    REQUIRE(j["credible_intervals"].size() == 3);
    double rate = j["acceptance_rate"].get<double>();
    CHECK(rate > 0.0);
    CHECK(rate <= 1.0);
    for (int k = 0; k < 3; ++k) {
        CHECK(j["credible_intervals"][k][0].get<double>() <=
              j["credible_intervals"][k][1].get<double>());
    }

    CsvTable t = read_csv_table(chain_path);
    REQUIRE(t.header == (std::vector<std::string>{"iteration", "theta1", "theta2",
                                                  "sigma", "log_post"}));
    REQUIRE(t.rows.size() == 2000);
    CHECK(t.rows[0][0] == 1000.0);
    CHECK(t.rows[1999][0] == 2999.0);
    for (const auto& row : t.rows) {
        CHECK(row[3] > 0.0);
        CHECK(std::isfinite(row[4]));
    }
}

TEST_CASE("coverage runs end to end and repeats itself for a fixed seed") {
    std::vector<std::string> args = {"coverage", "--kind", "wald", "--n", "40",
                                     "--reps", "100", "--alpha", "0.1", "--seed",
                                     "4"};
    CliOutcome a = run_cli(args);
    REQUIRE(a.code == 0);
    json j = json::parse(a.out);
    CHECK(j["command"] == "coverage");
    CHECK(j["kind"] == "wald");
    CHECK(j["nominal"].get<double>() == 0.9);
    CHECK(j["replications"].get<int>() + j["failures"].get<int>() == 100);
    double emp = j["empirical"].get<double>();
    CHECK(emp >= 0.0);
    CHECK(emp <= 1.0);
    CHECK(j["mc_stderr"].get<double>() >= 0.0);

    CliOutcome b = run_cli(args);
    CHECK(b.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("figure1 reports consistent areas and both boundaries") {
    CliOutcome r = run_cli({"figure1", "--n", "50", "--seed", "1"});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["command"] == "figure1");
    CHECK(j["wald_boundary"].size() > 0);
    CHECK(j["likelihood_boundary"].size() > 0);
    double wald_area = j["wald_area"].get<double>();
    double sym = j["sym_diff_area"].get<double>();
    CHECK(wald_area > 0.0);
    CHECK(sym >= 0.0);
    CHECK(j["sym_diff_fraction"].get<double>() ==
          doctest::Approx(sym / wald_area).epsilon(1e-12));
}

TEST_CASE("seeded subprocess runs are byte-identical") {
    CliOutcome a = run_tool("table1 --seed 7");
    CliOutcome b = run_tool("table1 --seed 7");
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(!a.out.empty());
    CHECK(a.out == b.out);
    json j = json::parse(a.out);
    REQUIRE(j["cells"].size() == 4);
    CHECK(j["cells"][0]["method"] == "nls");
    CHECK(j["cells"][3]["method"] == "bayes");

    CliOutcome c = run_tool("simulate --generator mm_gamma --n 40 --seed 9");
    CliOutcome d = run_tool("simulate --generator mm_gamma --n 40 --seed 9");
    CliOutcome e = run_tool("simulate --generator mm_gamma --n 40 --seed 10");
    REQUIRE(c.code == 0);
    CHECK(c.out == d.out);
    CHECK(c.out != e.out);
    CsvTable t = parse_csv_text(c.out, "sim");
    REQUIRE(t.header == (std::vector<std::string>{"x", "y"}));
    CHECK(t.rows.size() == 40);
}
