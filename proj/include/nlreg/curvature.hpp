#ifndef NLREG_CURVATURE_HPP
#define NLREG_CURVATURE_HPP

#include <Eigen/Dense>

#include "nlreg/core.hpp"
#include "nlreg/models.hpp"

namespace nlreg {

/// Relative curvature summaries in the Bates-Watts convention: the raw RMS
/// directional curvatures scaled by rho = s * sqrt(p * F_alpha(p, n-p)).
struct CurvatureReport {
    double rms_intrinsic = 0.0;
    double rms_parameter_effects = 0.0;
    double scaling_radius = 0.0;
    double alpha = 0.05;
    int directions_used = 0;
};

/// RMS intrinsic and parameter-effects curvature at a converged theta_hat.
///
/// Construction: thin QR of the Jacobian J = QR; each second-derivative
/// matrix G_i is rotated into R^{-1} coordinates, giving the acceleration
/// array; for a unit direction d the curvature vector v has components
/// v_i = d' (R^{-T} G_i R^{-1}) d, split into the tangent part Q Q'v and the
/// normal remainder. kappa_T = |Q'v|, kappa_N = sqrt(|v|^2 - |Q'v|^2).
/// The RMS runs over a fixed low-discrepancy set of unit directions so
/// repeated calls are bit-identical.
CurvatureReport rms_curvatures(const ModelSpec& model, const Dataset& data,
                               const Eigen::VectorXd& theta_hat,
                               double alpha = 0.05, int directions = 4096);

} // namespace nlreg

#endif
