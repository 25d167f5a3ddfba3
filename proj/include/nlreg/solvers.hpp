#ifndef NLREG_SOLVERS_HPP
#define NLREG_SOLVERS_HPP

#include <Eigen/Dense>
#include <vector>

#include "nlreg/core.hpp"
#include "nlreg/models.hpp"

namespace nlreg {

struct SolverOptions {
    int max_iter = 100;
    double tol_rel_S = 1e-10; // relative-deviance stop, used by the GLM fits
    double tol_grad = 1e-8;
    double min_step_scale = 0x1p-30;
    double damping_init = 1e-3; // Levenberg-Marquardt only
};

enum class FitStatus {
    converged,
    max_iter,
    singular_normal_equations,
    line_search_failed,
};

const char* to_string(FitStatus s);

/// One entry per visited point, starting with the initial point. step_scale
/// is the accepted line-search lambda (Gauss-Newton, Newton-Raphson) or the
/// current damping mu (Levenberg-Marquardt); it is 0 for the initial entry.
/// gn_fallback marks Newton-Raphson steps where an indefinite Hessian was
/// replaced by the 2*J'J approximation.
struct IterationRecord {
    Eigen::VectorXd theta;
    double s = 0.0;
    double step_scale = 0.0;
    bool gn_fallback = false;
};

struct FitResult {
    Eigen::VectorXd theta_hat;
    double s_value = 0.0;
    int iterations = 0; // accepted steps, excludes the initial point
    FitStatus status = FitStatus::max_iter;
    std::vector<IterationRecord> trace;
    Eigen::MatrixXd jacobian_at_hat;
};

/// Classical Gauss-Newton with backtracking step halving. Accepts a step only
/// on strict decrease of S; halving below min_step_scale reports
/// line_search_failed. The only converged certificate is the gradient test
/// ||2 J'r||_inf <= tol_grad * (1 + S), so status == converged always implies
/// a stationary point to that tolerance.
FitResult gauss_newton(const ModelSpec& model, const Dataset& data,
                       const Eigen::VectorXd& init, const SolverOptions& opts = {});

/// Full Newton on S(theta) using H = 2 J'J - 2 sum_i r_i G_i, with the same
/// halving safeguard. Falls back to 2 J'J for any iterate where H is not
/// positive definite. Uses analytic second derivatives when the model has
/// them, finite differences otherwise.
FitResult newton_raphson(const ModelSpec& model, const Dataset& data,
                         const Eigen::VectorXd& init, const SolverOptions& opts = {});

/// Levenberg-Marquardt with multiplicative damping on diag(J'J): mu/10 after
/// an accepted step, mu*10 after a rejected one, failure once mu passes 1e12
/// with no accepted step.
FitResult levenberg_marquardt(const ModelSpec& model, const Dataset& data,
                              const Eigen::VectorXd& init,
                              const SolverOptions& opts = {});

/// Weighted variants used by the heteroscedastic module: minimize
/// sum_i w_i r_i^2. Unit weights reproduce the plain solvers exactly.
FitResult gauss_newton_weighted(const ModelSpec& model, const Dataset& data,
                                const Eigen::VectorXd& weights,
                                const Eigen::VectorXd& init,
                                const SolverOptions& opts = {});

} // namespace nlreg

#endif
