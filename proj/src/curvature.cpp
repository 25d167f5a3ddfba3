#include "nlreg/curvature.hpp"

#include <cmath>

#include "nlreg/inference.hpp"
#include "nlreg/parallel.hpp"

namespace nlreg {

namespace {

// Radical-inverse (Halton) value in (0,1) for index >= 1.
double halton(std::uint64_t index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
        index /= static_cast<std::uint64_t>(base);
    }
    return r;
}

int nth_prime(int n) {
    static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
    return primes[n];
}

// Deterministic low-discrepancy unit directions: Halton points mapped through
// the normal quantile and normalized, which is uniform on the sphere in the
// discrepancy limit.
std::vector<Eigen::VectorXd> sphere_directions(int p, int count) {
    std::vector<Eigen::VectorXd> dirs;
    dirs.reserve(static_cast<std::size_t>(count));
    Eigen::VectorXd z(p);
    for (int k = 1; dirs.size() < static_cast<std::size_t>(count); ++k) {
        for (int j = 0; j < p; ++j)
            z(j) = normal_quantile(halton(static_cast<std::uint64_t>(k), nth_prime(j)));
        double norm = z.norm();
        if (norm > 0.0) dirs.push_back(z / norm);
    }
    return dirs;
}

} // namespace

CurvatureReport rms_curvatures(const ModelSpec& model, const Dataset& data,
                               const Eigen::VectorXd& theta_hat, double alpha,
                               int directions) {
    const auto n = data.n();
    const int p = model.p;
    if (n <= p) throw Error("curvature requires n > p");
    if (directions < 1) throw Error("curvature requires at least one direction");

    EvalBundle bundle = eval_bundle(model, theta_hat, data);
    SecondDerivArray g = model.has_analytic_hessian
                             ? analytic_second(model, theta_hat, data)
                             : finite_diff_second_array(model, theta_hat, data);

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(bundle.jacobian);
    Eigen::MatrixXd r_full = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
    double dmin = r_full.diagonal().cwiseAbs().minCoeff();
    double dmax = r_full.diagonal().cwiseAbs().maxCoeff();
    if (!(dmin > 0.0) || dmax / dmin > 1e12)
        throw SingularInformation("Jacobian is rank deficient at theta_hat");
    Eigen::MatrixXd q_thin = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
    Eigen::MatrixXd r_inv =
        r_full.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));

    // Acceleration array in the R^{-1}-rotated coordinates.
    SecondDerivArray a(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        a[i] = r_inv.transpose() * g[i] * r_inv;

    std::vector<Eigen::VectorXd> dirs = sphere_directions(p, directions);
    std::vector<double> kt2(dirs.size()), kn2(dirs.size());
    parallel_for(static_cast<int>(dirs.size()), [&](int di) {
        const Eigen::VectorXd& d = dirs[static_cast<std::size_t>(di)];
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v(i) = d.dot(a[static_cast<std::size_t>(i)] * d);
        Eigen::VectorXd tangent = q_thin.transpose() * v;
        double t2 = tangent.squaredNorm();
        kt2[static_cast<std::size_t>(di)] = t2;
        kn2[static_cast<std::size_t>(di)] = std::max(0.0, v.squaredNorm() - t2);
    });

    double mt = 0.0, mn = 0.0;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        mt += kt2[i];
        mn += kn2[i];
    }
    mt /= static_cast<double>(dirs.size());
    mn /= static_cast<double>(dirs.size());

    CurvatureReport report;
    report.alpha = alpha;
    report.directions_used = static_cast<int>(dirs.size());
    double s = std::sqrt(bundle.objective / static_cast<double>(n - p));
    report.scaling_radius =
        s * std::sqrt(static_cast<double>(p) *
                      f_quantile(alpha, p, static_cast<int>(n) - p));
    report.rms_parameter_effects = report.scaling_radius * std::sqrt(mt);
    report.rms_intrinsic = report.scaling_radius * std::sqrt(mn);
    return report;
}

} // namespace nlreg
