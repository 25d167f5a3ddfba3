#ifndef NLREG_HETERO_HPP
#define NLREG_HETERO_HPP

#include <Eigen/Dense>

#include "nlreg/core.hpp"
#include "nlreg/models.hpp"
#include "nlreg/solvers.hpp"

namespace nlreg {

enum class VarianceKind { constant, power_of_mean, user_weights };

struct VarianceModel {
    VarianceKind kind = VarianceKind::constant;
    double gamma = 0.0;      // power_of_mean: Var proportional to |mu|^gamma
    Eigen::VectorXd weights; // user_weights: strictly positive, length n
};

/// Iterated generalized least squares. Alternates a weighted Gauss-Newton
/// solve (minimizing sum w_i r_i^2) with a weight refresh from the variance
/// model at the current fitted means (power kind: w_i = |mu_i|^{-gamma}).
/// Outer loop stops when theta changes by less than 1e-8 in sup norm,
/// capped at 50 cycles. constant reduces to plain gauss_newton, user_weights
/// performs a single weighted solve.
FitResult gls_fit(const ModelSpec& model, const Dataset& data,
                  const VarianceModel& vm, const Eigen::VectorXd& init,
                  const SolverOptions& opts = {});

enum class KernelKind { gaussian, epanechnikov };

struct KernelSpec {
    KernelKind kernel = KernelKind::gaussian;
    double bandwidth = 1.0;
};

/// Nadaraya-Watson local weighted average
/// sum_i K(|x - x_i| / h) y_i / sum_i K(|x - x_i| / h).
/// Uses the first predictor column. Throws EmptyNeighborhood when a compact
/// kernel has no point within bandwidth.
double nadaraya_watson(double query_x, const Dataset& data, const KernelSpec& spec);

} // namespace nlreg

#endif
