// Generators and experiment drivers: seeded determinism, noise moments,
// coverage sanity at two very different confidence levels, boundary-grid
// geometry, and the two-start contrast the gamma-noise experiment exists
// to show.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "nlreg/models.hpp"
#include "nlreg/sim.hpp"

using namespace nlreg;

namespace {

GeneratorSpec mm_normal_spec(int n, std::uint64_t seed) {
    GeneratorSpec g;
    g.kind = GeneratorKind::mm_normal;
    g.n = n;
    g.theta_star = Eigen::Vector2d(6.0, 5.0);
    g.seed = seed;
    return g;
}

GeneratorSpec mm_gamma_spec(int n, std::uint64_t seed) {
    GeneratorSpec g;
    g.kind = GeneratorKind::mm_gamma;
    g.n = n;
    g.theta_star = Eigen::Vector2d(100.0, 0.05);
    g.seed = seed;
    return g;
}

// Bounding box of a traced boundary, as (x_lo, x_hi, y_lo, y_hi).
Eigen::Vector4d bounding_box(const std::vector<Eigen::Vector2d>& pts) {
    Eigen::Vector4d b(1e300, -1e300, 1e300, -1e300);
    for (const auto& p : pts) {
        b(0) = std::min(b(0), p(0));
        b(1) = std::max(b(1), p(0));
        b(2) = std::min(b(2), p(1));
        b(3) = std::max(b(3), p(1));
    }
    return b;
}

} // namespace

TEST_CASE("the generators repeat themselves bit for bit") {
    for (auto make : {mm_normal_spec, mm_gamma_spec}) {
        Dataset a = generate(make(500, 11));
        Dataset b = generate(make(500, 11));
        CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.y - b.y).cwiseAbs().maxCoeff() == 0.0);

        Dataset c = generate(make(500, 12));
        CHECK((a.y - c.y).cwiseAbs().maxCoeff() > 0.0);
    }
    GeneratorSpec bad = mm_normal_spec(0, 1);
    CHECK_THROWS_AS(generate(bad), Error);
}

TEST_CASE("gamma noise has the documented mean and stays positive") {
    GeneratorSpec g = mm_gamma_spec(100000, 5);
    Dataset d = generate(g);
    ModelSpec mm = model_from_string("michaelis_menten");
    double acc = 0.0, lowest = 1e300;
    for (Eigen::Index i = 0; i < d.n(); ++i) {
        double eps = d.y(i) - evaluate(mm, g.theta_star, d.x.row(i));
        acc += eps;
        lowest = std::min(lowest, eps);
    }
    double mean = acc / static_cast<double>(d.n());
    CHECK(mean > 2.48);
    CHECK(mean < 2.52);
    CHECK(lowest > 0.0);
}

TEST_CASE("generator predictors respect their supports") {
    Dataset normal = generate(mm_normal_spec(10000, 21));
    CHECK(normal.x.minCoeff() > 1.0);
    CHECK(normal.x.maxCoeff() < 100.0);

    Dataset gamma = generate(mm_gamma_spec(10000, 21));
    CHECK(gamma.x.minCoeff() >= 0.0);
}

TEST_CASE("coverage runs are deterministic, also across thread settings") {
    CoverageResult a = coverage_experiment(RegionKind::wald, 50, 100, 0.05, 3);
    CoverageResult b = coverage_experiment(RegionKind::wald, 50, 100, 0.05, 3);
    CHECK(a.empirical == b.empirical);
    CHECK(a.replications == b.replications);
    CHECK(a.failures == b.failures);
    CHECK(a.mc_stderr == b.mc_stderr);

    setenv("NLFIT_THREADS", "4", 1);
    CoverageResult c = coverage_experiment(RegionKind::wald, 50, 100, 0.05, 3);
    unsetenv("NLFIT_THREADS");
    CHECK(a.empirical == c.empirical);
    CHECK(a.failures == c.failures);

    CHECK(a.nominal == 0.95);
    CHECK(a.replications + a.failures == 100);
    CHECK(a.mc_stderr ==
          doctest::Approx(std::sqrt(a.empirical * (1.0 - a.empirical) /
                                    a.replications))
              .epsilon(1e-15));

    CHECK_THROWS_AS(coverage_experiment(RegionKind::wald, 50, 99, 0.05, 3), Error);
}

TEST_CASE("a 50 percent region covers about half the time") {
    for (auto kind : {RegionKind::wald, RegionKind::likelihood}) {
        CoverageResult c = coverage_experiment(kind, 100, 500, 0.5, 7);
        CAPTURE(to_string(kind));
        CHECK(c.empirical >= 0.42);
        CHECK(c.empirical <= 0.58);
    }
}

TEST_CASE("nominal 95 percent likelihood coverage lands in the advertised window") {
    CoverageResult c = coverage_experiment(RegionKind::likelihood, 100, 500, 0.05, 42);
    CHECK(c.empirical >= 0.90);
    CHECK(c.empirical <= 0.98);
    CHECK(c.failures <= 25);
}

TEST_CASE("confidence boundaries bracket the estimate") {
    Figure1Report rep = figure1_experiment(50, 1);
    CHECK(std::abs(rep.theta_hat(0) - 6.0) < 2.5);
    CHECK(std::abs(rep.theta_hat(1) - 5.0) < 2.5);

    REQUIRE(!rep.wald_boundary.empty());
    REQUIRE(!rep.likelihood_boundary.empty());
    for (const auto* pts : {&rep.wald_boundary, &rep.likelihood_boundary}) {
        Eigen::Vector4d box = bounding_box(*pts);
        CHECK(box(0) < rep.theta_hat(0));
        CHECK(box(1) > rep.theta_hat(0));
        CHECK(box(2) < rep.theta_hat(1));
        CHECK(box(3) > rep.theta_hat(1));
    }

    CHECK(rep.wald_area > 0.0);
    CHECK(rep.sym_diff_area >= 0.0);
    CHECK(rep.sym_diff_fraction ==
          doctest::Approx(rep.sym_diff_area / rep.wald_area).epsilon(1e-12));
}

TEST_CASE("regions disagree less as the sample grows") {
    for (std::uint64_t seed : {1ull, 3ull}) {
        Figure1Report small = figure1_experiment(50, seed);
        Figure1Report large = figure1_experiment(100, seed);
        CAPTURE(seed);
        CHECK(small.sym_diff_fraction > large.sym_diff_fraction);
    }
}

TEST_CASE("the two-start experiment tells its story") {
    Table1Report rep = table1_experiment(1);
    REQUIRE(rep.cells.size() == 4);
    CHECK(rep.cells[0].method == "nls");
    CHECK(rep.cells[1].method == "nls");
    CHECK(rep.cells[2].method == "bayes");
    CHECK(rep.cells[3].method == "bayes");
    CHECK(rep.cells[0].init == Eigen::Vector2d(10.0, 3.0));
    CHECK(rep.cells[1].init == Eigen::Vector2d(50.0, 0.1));

    // Good start: the least-squares fit recovers the generating curve.
    const Table1Cell& good = rep.cells[1];
    CHECK(good.converged);
    CHECK(good.estimate(1) > 0.04);
    CHECK(good.estimate(1) < 0.06);

    // Bad start: either trapped with a negative rate or honestly unconverged.
    const Table1Cell& bad = rep.cells[0];
    CHECK((bad.estimate(1) < 0.0 || !bad.converged));

    // The posterior from the bad start wanders; the good start pins theta_1.
    double bad_width = rep.cells[2].hi(0) - rep.cells[2].lo(0);
    double good_width = rep.cells[3].hi(0) - rep.cells[3].lo(0);
    CHECK(bad_width >= 10.0 * good_width);
}
