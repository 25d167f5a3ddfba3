#include "nlreg/inference.hpp"

#include <cmath>
#include <limits>

namespace nlreg {

const char* to_string(RegionKind k) {
    return k == RegionKind::wald ? "wald" : "likelihood";
}

namespace {

constexpr double kCondLimit = 1e12;
const double kPi = std::acos(-1.0);

// Continued fraction for the regularized incomplete beta, modified Lentz
// iteration, 1e-12 convergence.
double beta_cf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double eps = 1e-12;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& m, const char* what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    double lo = eig.eigenvalues().minCoeff();
    double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > kCondLimit)
        throw SingularInformation(std::string(what) + " is singular or too ill-conditioned");
    return eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
           eig.eigenvectors().transpose();
}

} // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double f_cdf(double x, int d1, int d2) {
    if (x <= 0.0) return 0.0;
    double v1 = d1, v2 = d2;
    return incomplete_beta(v1 / 2.0, v2 / 2.0, v1 * x / (v1 * x + v2));
}

double f_quantile(double alpha, int d1, int d2) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("f_quantile: alpha must be in (0,1)");
    if (d1 < 1 || d2 < 1) throw Error("f_quantile: degrees of freedom must be positive");
    double target = 1.0 - alpha;
    double hi = 1.0;
    while (f_cdf(hi, d1, d2) < target && hi < 1e300) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 500 && hi - lo > 1e-12 * (1.0 + lo); ++it) {
        double mid = 0.5 * (lo + hi);
        (f_cdf(mid, d1, d2) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double normal_quantile(double prob) {
    if (!(prob > 0.0 && prob < 1.0))
        throw Error("normal_quantile: probability must be in (0,1)");
    // Acklam's rational approximation, then one Halley refinement against
    // the erfc-based CDF.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425, p_high = 1.0 - p_low;
    double x;
    if (prob < p_low) {
        double q = std::sqrt(-2.0 * std::log(prob));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (prob <= p_high) {
        double q = prob - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - prob));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - prob;
    double u = e * std::sqrt(2.0 * kPi) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

InferenceReport build_report(const FitResult& fit, const Dataset& data, double alpha) {
    if (fit.status != FitStatus::converged)
        throw NotConverged("inference requires a converged fit (status " +
                           std::string(to_string(fit.status)) + ")");
    const auto n = data.n();
    const auto p = fit.theta_hat.size();
    if (n <= p) throw Error("inference requires n > p");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must be in (0,1)");

    InferenceReport rep;
    rep.alpha = alpha;
    rep.s2 = fit.s_value / static_cast<double>(n - p);
    rep.sigma2_mle = fit.s_value / static_cast<double>(n);
    Eigen::MatrixXd jtj = fit.jacobian_at_hat.transpose() * fit.jacobian_at_hat;
    rep.covariance = rep.s2 * spd_inverse(jtj, "J'J");
    double z = normal_quantile(1.0 - alpha / 2.0);
    rep.wald_intervals.reserve(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) {
        double half = z * std::sqrt(std::max(0.0, rep.covariance(j, j)));
        rep.wald_intervals.emplace_back(fit.theta_hat(j) - half, fit.theta_hat(j) + half);
    }
    return rep;
}

ConfidenceRegion wald_region(const FitResult& fit, const InferenceReport& report,
                             double alpha) {
    const auto p = fit.theta_hat.size();
    Eigen::MatrixXd jtj = fit.jacobian_at_hat.transpose() * fit.jacobian_at_hat;
    {
        // Validate invertibility up front so a singular fit fails loudly here
        // rather than inside the returned predicate.
        (void)spd_inverse(jtj, "J'J");
    }
    ConfidenceRegion region;
    region.kind = RegionKind::wald;
    region.level = 1.0 - alpha;
    int dof2 = static_cast<int>(fit.jacobian_at_hat.rows()) - static_cast<int>(p);
    double fq = f_quantile(alpha, static_cast<int>(p), dof2);
    region.threshold = static_cast<double>(p) * report.s2 * fq;

    Eigen::VectorXd hat = fit.theta_hat;
    double thr = region.threshold;
    region.contains = [jtj, hat, thr](const Eigen::VectorXd& theta) {
        Eigen::VectorXd d = theta - hat;
        return d.dot(jtj * d) <= thr;
    };

    if (p == 2 && region.threshold > 0.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jtj);
        Eigen::Vector2d scale = eig.eigenvalues().cwiseInverse().cwiseSqrt() *
                                std::sqrt(region.threshold);
        region.boundary_grid.reserve(360);
        for (int k = 0; k < 360; ++k) {
            double t = 2.0 * kPi * k / 360.0;
            Eigen::Vector2d unit(std::cos(t) * scale(0), std::sin(t) * scale(1));
            region.boundary_grid.push_back(hat.head<2>() + eig.eigenvectors() * unit);
        }
    }
    return region;
}

ConfidenceRegion likelihood_region(const FitResult& fit, const ModelSpec& model,
                                   const Dataset& data, double alpha,
                                   const GridSpec& grid, double threshold_override) {
    if (fit.status != FitStatus::converged)
        throw NotConverged("likelihood region requires a converged fit");
    const auto n = data.n();
    const auto p = fit.theta_hat.size();
    if (n <= p) throw Error("likelihood region requires n > p");

    ConfidenceRegion region;
    region.kind = RegionKind::likelihood;
    region.level = 1.0 - alpha;
    if (threshold_override > 0.0) {
        region.threshold = threshold_override * fit.s_value;
    } else {
        double fq = f_quantile(alpha, static_cast<int>(p), static_cast<int>(n - p));
        region.threshold = fit.s_value *
                           (1.0 + static_cast<double>(p) / static_cast<double>(n - p) * fq);
    }

    ModelSpec m = model;
    Dataset d = data;
    double thr = region.threshold;
    region.contains = [m, d, thr](const Eigen::VectorXd& theta) {
        try {
            return residual_sum_squares(m, theta, d) <= thr;
        } catch (const NonFiniteEvaluation&) {
            return false;
        }
    };

    // resolution < 2 means membership-only: skip contour extraction (used by
    // coverage runs, which only ever query contains()).
    if (p == 2 && grid.resolution >= 2) {
        // phi = S - threshold on the grid nodes; contour points are the
        // linear-interpolated zero crossings along grid edges.
        const int res = grid.resolution;
        Eigen::MatrixXd phi(res + 1, res + 1);
        const double inf = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= res; ++i) {
            double t1 = grid.theta1_lo + (grid.theta1_hi - grid.theta1_lo) * i / res;
            for (int j = 0; j <= res; ++j) {
                double t2 = grid.theta2_lo + (grid.theta2_hi - grid.theta2_lo) * j / res;
                Eigen::Vector2d th(t1, t2);
                double s;
                try {
                    s = residual_sum_squares(m, th, d);
                } catch (const NonFiniteEvaluation&) {
                    s = inf;
                }
                phi(i, j) = s - thr;
            }
        }
        auto node = [&](int i, int j) {
            return Eigen::Vector2d(
                grid.theta1_lo + (grid.theta1_hi - grid.theta1_lo) * i / res,
                grid.theta2_lo + (grid.theta2_hi - grid.theta2_lo) * j / res);
        };
        auto crossing = [&](int i0, int j0, int i1, int j1) {
            double pa = phi(i0, j0), pb = phi(i1, j1);
            double t = 0.5;
            if (std::isfinite(pa) && std::isfinite(pb) && pa != pb)
                t = pa / (pa - pb);
            t = std::min(1.0, std::max(0.0, t));
            Eigen::Vector2d a = node(i0, j0), b = node(i1, j1);
            region.boundary_grid.push_back(a + t * (b - a));
        };
        for (int i = 0; i <= res; ++i)
            for (int j = 0; j <= res; ++j) {
                if (i < res && (phi(i, j) <= 0.0) != (phi(i + 1, j) <= 0.0))
                    crossing(i, j, i + 1, j);
                if (j < res && (phi(i, j) <= 0.0) != (phi(i, j + 1) <= 0.0))
                    crossing(i, j, i, j + 1);
            }
        if (region.boundary_grid.empty())
            throw GridTooCoarse("no contour crossing found on the supplied grid");
    }
    return region;
}

double wald_statistic(const FitResult& fit, const InferenceReport& report,
                      const Eigen::VectorXd& theta0) {
    Eigen::MatrixXd vinv = spd_inverse(report.covariance, "covariance");
    Eigen::VectorXd d = theta0 - fit.theta_hat;
    return d.dot(vinv * d);
}

double log_likelihood(const ModelSpec& model, const Eigen::VectorXd& theta,
                      double sigma2, const Dataset& data) {
    if (!(sigma2 > 0.0)) throw Error("log_likelihood: sigma2 must be positive");
    double s = residual_sum_squares(model, theta, data);
    double n = static_cast<double>(data.n());
    return -s / (2.0 * sigma2) - 0.5 * n * std::log(2.0 * kPi * sigma2);
}

} // namespace nlreg
