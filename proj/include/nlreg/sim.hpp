#ifndef NLREG_SIM_HPP
#define NLREG_SIM_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "nlreg/bayes.hpp"
#include "nlreg/core.hpp"
#include "nlreg/inference.hpp"
#include "nlreg/solvers.hpp"

namespace nlreg {

enum class GeneratorKind {
    mm_gamma,  // x = |N(0, 20^2)|, y = MM(x, theta*) + Gamma(shape 10, scale 0.25)
    mm_normal, // x ~ U(1, 100),    y = MM(x, theta*) + N(0, 1)
};

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::mm_normal;
    int n = 100;
    Eigen::VectorXd theta_star;
    std::uint64_t seed = 0;
};

/// Deterministic given the seed: one counter stream, all x draws first,
/// then all noise draws.
Dataset generate(const GeneratorSpec& spec);

struct CoverageResult {
    double nominal = 0.0;
    double empirical = 0.0;
    int replications = 0; // included (non-failed) fits
    int failures = 0;
    double mc_stderr = 0.0;
};

/// Monte Carlo coverage of a confidence region for theta* = (6, 5) under the
/// mm_normal generator: fit from init theta*, build the region, test
/// membership of theta*. Replication r draws from seed ^ r so replications
/// are order-independent. Fits that fail are excluded; more than 5% failing
/// raises TooManyFailures.
CoverageResult coverage_experiment(RegionKind kind, int n, int reps, double alpha,
                                   std::uint64_t seed);

struct Table1Cell {
    std::string method; // "nls" or "bayes"
    Eigen::Vector2d init;
    bool converged = false;
    Eigen::Vector2d estimate;
    // 95% interval per parameter: Wald for NLS, equal-tailed for Bayes
    Eigen::Vector2d lo, hi;
    std::string note;
};

struct Table1Report {
    std::vector<Table1Cell> cells; // nls x {bad, good}, bayes x {bad, good}
    std::uint64_t seed = 0;
};

/// Gamma-noise Michaelis-Menten experiment (n=100, theta* = (100, 0.05)):
/// NLS (Gauss-Newton, falling back to Levenberg-Marquardt when it fails)
/// and Metropolis posteriors from inits (10, 3) and (50, 0.1).
Table1Report table1_experiment(std::uint64_t seed);

struct Figure1Report {
    Eigen::Vector2d theta_hat;
    std::vector<Eigen::Vector2d> wald_boundary;
    std::vector<Eigen::Vector2d> likelihood_boundary;
    double sym_diff_area = 0.0; // symmetric difference, absolute
    double sym_diff_fraction = 0.0; // relative to the Wald region area
    double wald_area = 0.0;
};

/// Wald vs likelihood boundary comparison on mm_normal data at
/// theta* = (6, 5): boundaries on a rectangle of theta_hat +/- 4 Wald
/// standard errors, areas by grid-cell counting on that rectangle.
Figure1Report figure1_experiment(int n, std::uint64_t seed, double alpha = 0.05);

} // namespace nlreg

#endif
