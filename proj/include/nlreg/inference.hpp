#ifndef NLREG_INFERENCE_HPP
#define NLREG_INFERENCE_HPP

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "nlreg/core.hpp"
#include "nlreg/models.hpp"
#include "nlreg/solvers.hpp"

namespace nlreg {

struct InferenceReport {
    double s2 = 0.0;         // S(theta_hat) / (n - p)
    double sigma2_mle = 0.0; // S(theta_hat) / n
    Eigen::MatrixXd covariance;
    std::vector<std::pair<double, double>> wald_intervals;
    double alpha = 0.05;
};

enum class RegionKind { wald, likelihood };

const char* to_string(RegionKind k);

/// Confidence region with a membership predicate and, for p=2, a traced
/// boundary. Wald regions store the quadratic form threshold
/// p * s2 * F; likelihood regions store the S(theta) cutoff.
struct ConfidenceRegion {
    RegionKind kind = RegionKind::wald;
    double level = 0.95;
    double threshold = 0.0;
    std::function<bool(const Eigen::VectorXd&)> contains;
    std::vector<Eigen::Vector2d> boundary_grid;
};

/// Rectangle and resolution for likelihood-contour tracing.
struct GridSpec {
    double theta1_lo = 0.0, theta1_hi = 1.0;
    double theta2_lo = 0.0, theta2_hi = 1.0;
    int resolution = 200;
};

InferenceReport build_report(const FitResult& fit, const Dataset& data,
                             double alpha = 0.05);

ConfidenceRegion wald_region(const FitResult& fit, const InferenceReport& report,
                             double alpha = 0.05);

/// Region {theta : S(theta) <= S(theta_hat) * (1 + p/(n-p) * F_alpha)}.
/// threshold_override, when positive, replaces the cutoff with
/// override * S(theta_hat); this gives the exact-region family
/// {theta : S(theta) <= c * S(theta_hat)} through the same code path.
ConfidenceRegion likelihood_region(const FitResult& fit, const ModelSpec& model,
                                   const Dataset& data, double alpha,
                                   const GridSpec& grid,
                                   double threshold_override = 0.0);

/// (theta0 - theta_hat)' V^{-1} (theta0 - theta_hat) with V the report
/// covariance.
double wald_statistic(const FitResult& fit, const InferenceReport& report,
                      const Eigen::VectorXd& theta0);

/// Gaussian log likelihood -S(theta)/(2 sigma2) - (n/2) log(2 pi sigma2).
double log_likelihood(const ModelSpec& model, const Eigen::VectorXd& theta,
                      double sigma2, const Dataset& data);

/// Upper-tail F critical value: P(F_{d1,d2} > x) = alpha. Bisection on the
/// regularized incomplete beta representation, accurate to 1e-8.
double f_quantile(double alpha, int d1, int d2);

/// P(F_{d1,d2} <= x).
double f_cdf(double x, int d1, int d2);

/// Regularized incomplete beta I_x(a, b) by the Lentz continued fraction.
double incomplete_beta(double a, double b, double x);

/// Standard normal quantile (Acklam's rational approximation plus one
/// Halley refinement step).
double normal_quantile(double prob);

} // namespace nlreg

#endif
