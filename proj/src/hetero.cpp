#include "nlreg/hetero.hpp"

#include <cmath>

namespace nlreg {

FitResult gls_fit(const ModelSpec& model, const Dataset& data, const VarianceModel& vm,
                  const Eigen::VectorXd& init, const SolverOptions& opts) {
    switch (vm.kind) {
        case VarianceKind::constant:
            return gauss_newton(model, data, init, opts);
        case VarianceKind::user_weights:
            return gauss_newton_weighted(model, data, vm.weights, init, opts);
        case VarianceKind::power_of_mean:
            break;
    }

    // Alternate weighted solves with weight refreshes w_i = |mu_i|^{-gamma}
    // at the current fitted means until theta stops moving.
    const int max_cycles = 50;
    const double theta_tol = 1e-8;
    Eigen::VectorXd theta = init;
    Eigen::VectorXd weights = Eigen::VectorXd::Ones(data.n());
    FitResult fit;
    for (int cycle = 0; cycle < max_cycles; ++cycle) {
        fit = gauss_newton_weighted(model, data, weights, theta, opts);
        if (fit.status != FitStatus::converged) return fit;

        Eigen::VectorXd refreshed(data.n());
        for (Eigen::Index i = 0; i < data.n(); ++i) {
            double mu = evaluate(model, fit.theta_hat, data.x.row(i));
            refreshed(i) = std::pow(std::abs(mu), -vm.gamma);
            if (!std::isfinite(refreshed(i)) || refreshed(i) <= 0.0)
                throw DegenerateWeights(
                    "refreshed weight is non-finite at observation " + std::to_string(i));
        }

        double shift = (fit.theta_hat - theta).lpNorm<Eigen::Infinity>();
        theta = fit.theta_hat;
        weights = refreshed;
        if (shift < theta_tol) return fit;
    }
    fit.status = FitStatus::max_iter; // outer weight loop kept oscillating
    return fit;
}

double nadaraya_watson(double query_x, const Dataset& data, const KernelSpec& spec) {
    if (!(spec.bandwidth > 0.0)) throw Error("bandwidth must be positive");
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        double u = (query_x - data.x(i, 0)) / spec.bandwidth;
        double k;
        if (spec.kernel == KernelKind::gaussian) {
            k = std::exp(-0.5 * u * u);
        } else {
            k = std::abs(u) < 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
        }
        num += k * data.y(i);
        den += k;
    }
    if (den <= 0.0)
        throw EmptyNeighborhood("no kernel weight at query " + std::to_string(query_x));
    return num / den;
}

} // namespace nlreg
