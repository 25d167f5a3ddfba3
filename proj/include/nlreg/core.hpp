#ifndef NLREG_CORE_HPP
#define NLREG_CORE_HPP

#include <Eigen/Dense>
#include <vector>

#include "nlreg/errors.hpp"

namespace nlreg {

/// n observations: predictor matrix (n x k) and response vector (n).
/// All entries must be finite; the constructor enforces it.
struct Dataset {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;

    Dataset(Eigen::MatrixXd x_in, Eigen::VectorXd y_in);

    Eigen::Index n() const { return y.size(); }
    Eigen::Index k() const { return x.cols(); }
};

/// Residuals r = y - f(theta), Jacobian J_{ij} = df_i/dtheta_j, and the
/// objective S = sum r_i^2, all evaluated at one theta.
struct EvalBundle {
    Eigen::VectorXd residuals;
    Eigen::MatrixXd jacobian;
    double objective = 0.0;
};

/// Per-observation p x p matrices of second partials d2 f_i / dtheta_j dtheta_k.
using SecondDerivArray = std::vector<Eigen::MatrixXd>;

struct ModelSpec;

/// S(theta) = sum_i (y_i - f(x_i, theta))^2.
/// Throws NonFiniteEvaluation if any model value is NaN/inf (a DomainViolation
/// from the model also qualifies, being a subtype).
double residual_sum_squares(const ModelSpec& model, const Eigen::VectorXd& theta,
                            const Dataset& data);

/// Residuals, Jacobian (analytic), and S at theta in one pass.
EvalBundle eval_bundle(const ModelSpec& model, const Eigen::VectorXd& theta,
                       const Dataset& data);

/// Central-difference Jacobian with per-coordinate step
/// h_j = sqrt(eps) * (|theta_j| + sqrt(eps)). Verification oracle for the
/// analytic gradients; deterministic.
Eigen::MatrixXd finite_diff_jacobian(const ModelSpec& model,
                                     const Eigen::VectorXd& theta,
                                     const Dataset& data);

/// Central second differences (eps^(1/4) steps with a unit floor), symmetrized.
SecondDerivArray finite_diff_second_array(const ModelSpec& model,
                                          const Eigen::VectorXd& theta,
                                          const Dataset& data);

/// Largest relative asymmetry max |G_jk - G_kj| / max(1, |G_jk|) before
/// symmetrization; exposed so tests can bound finite-difference noise.
double finite_diff_second_asymmetry(const ModelSpec& model,
                                    const Eigen::VectorXd& theta,
                                    const Dataset& data);

} // namespace nlreg

#endif
