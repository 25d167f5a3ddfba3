#include "nlreg/core.hpp"

#include <cmath>
#include <limits>

#include "nlreg/models.hpp"

namespace nlreg {

Dataset::Dataset(Eigen::MatrixXd x_in, Eigen::VectorXd y_in)
    : x(std::move(x_in)), y(std::move(y_in)) {
    if (y.size() < 1) throw Error("Dataset: need at least one observation");
    if (x.rows() != y.size())
        throw Error("Dataset: x has " + std::to_string(x.rows()) +
                    " rows but y has " + std::to_string(y.size()));
    if (!x.allFinite() || !y.allFinite())
        throw Error("Dataset: non-finite entry in x or y");
}

double residual_sum_squares(const ModelSpec& model, const Eigen::VectorXd& theta,
                            const Dataset& data) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        double r = data.y(i) - evaluate(model, theta, data.x.row(i));
        s += r * r;
    }
    if (!std::isfinite(s)) throw NonFiniteEvaluation("residual sum of squares overflowed");
    return s;
}

EvalBundle eval_bundle(const ModelSpec& model, const Eigen::VectorXd& theta,
                       const Dataset& data) {
    EvalBundle out;
    const Eigen::Index n = data.n();
    out.residuals.resize(n);
    out.jacobian.resize(n, model.p);
    Eigen::VectorXd grad(model.p);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd xrow = data.x.row(i);
        out.residuals(i) = data.y(i) - evaluate(model, theta, xrow);
        grad = analytic_gradient(model, theta, xrow);
        out.jacobian.row(i) = grad;
    }
    out.objective = out.residuals.squaredNorm();
    if (!std::isfinite(out.objective))
        throw NonFiniteEvaluation("objective overflowed");
    return out;
}

Eigen::MatrixXd finite_diff_jacobian(const ModelSpec& model,
                                     const Eigen::VectorXd& theta,
                                     const Dataset& data) {
    const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    const Eigen::Index n = data.n();
    Eigen::MatrixXd jac(n, model.p);
    Eigen::VectorXd tp = theta, tm = theta;
    for (int j = 0; j < model.p; ++j) {
        double h = sqrt_eps * (std::abs(theta(j)) + sqrt_eps);
        tp(j) = theta(j) + h;
        tm(j) = theta(j) - h;
        // The symmetric step actually taken, for exact division.
        double span = tp(j) - tm(j);
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::VectorXd xrow = data.x.row(i);
            double fp = evaluate(model, tp, xrow);
            double fm = evaluate(model, tm, xrow);
            jac(i, j) = (fp - fm) / span;
        }
        tp(j) = theta(j);
        tm(j) = theta(j);
    }
    if (!jac.allFinite()) throw NonFiniteEvaluation("finite-difference Jacobian is non-finite");
    return jac;
}

namespace {

// Raw (unsymmetrized) central second differences, one p x p matrix per row.
// Step is eps^(1/4) scaled by (|theta_j| + 1): the quartic root balances the
// h^2 truncation term against eps/h^2 rounding, and the unit floor keeps the
// step usable for coordinates at or near zero.
SecondDerivArray second_diff_raw(const ModelSpec& model, const Eigen::VectorXd& theta,
                                 const Dataset& data) {
    const double quart_eps = std::pow(std::numeric_limits<double>::epsilon(), 0.25);
    const Eigen::Index n = data.n();
    const int p = model.p;
    Eigen::VectorXd h(p);
    for (int j = 0; j < p; ++j) h(j) = quart_eps * (std::abs(theta(j)) + 1.0);

    SecondDerivArray out(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(p, p));
    Eigen::VectorXd t = theta;
    std::vector<double> f0(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        f0[static_cast<std::size_t>(i)] = evaluate(model, theta, data.x.row(i));

    for (int j = 0; j < p; ++j) {
        // Diagonal: (f(+h) - 2 f(0) + f(-h)) / h^2.
        t(j) = theta(j) + h(j);
        std::vector<double> fp(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i)
            fp[static_cast<std::size_t>(i)] = evaluate(model, t, data.x.row(i));
        t(j) = theta(j) - h(j);
        for (Eigen::Index i = 0; i < n; ++i) {
            double fm = evaluate(model, t, data.x.row(i));
            out[static_cast<std::size_t>(i)](j, j) =
                (fp[static_cast<std::size_t>(i)] - 2.0 * f0[static_cast<std::size_t>(i)] + fm) /
                (h(j) * h(j));
        }
        t(j) = theta(j);

        // Mixed partials: 4-point stencil.
        for (int k = j + 1; k < p; ++k) {
            double acc;
            for (Eigen::Index i = 0; i < n; ++i) {
                Eigen::VectorXd xrow = data.x.row(i);
                t(j) = theta(j) + h(j); t(k) = theta(k) + h(k);
                acc = evaluate(model, t, xrow);
                t(k) = theta(k) - h(k);
                acc -= evaluate(model, t, xrow);
                t(j) = theta(j) - h(j);
                acc += evaluate(model, t, xrow);
                t(k) = theta(k) + h(k);
                acc -= evaluate(model, t, xrow);
                t(j) = theta(j); t(k) = theta(k);
                double d = acc / (4.0 * h(j) * h(k));
                out[static_cast<std::size_t>(i)](j, k) = d;
                out[static_cast<std::size_t>(i)](k, j) = d;
            }
        }
    }
    return out;
}

} // namespace

SecondDerivArray finite_diff_second_array(const ModelSpec& model,
                                          const Eigen::VectorXd& theta,
                                          const Dataset& data) {
    SecondDerivArray raw = second_diff_raw(model, theta, data);
    for (auto& g : raw) {
        if (!g.allFinite())
            throw NonFiniteEvaluation("finite-difference second derivatives are non-finite");
        Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
        g = sym;
    }
    return raw;
}

double finite_diff_second_asymmetry(const ModelSpec& model,
                                    const Eigen::VectorXd& theta,
                                    const Dataset& data) {
    // The 4-point mixed stencil is symmetric in (j,k) by construction, so any
    // drift reported here is floating-point accumulation order only.
    SecondDerivArray raw = second_diff_raw(model, theta, data);
    double worst = 0.0;
    for (const auto& g : raw) {
        Eigen::MatrixXd diff = g - g.transpose();
        for (int j = 0; j < g.rows(); ++j)
            for (int k = 0; k < g.cols(); ++k) {
                double denom = std::max(1.0, std::abs(g(j, k)));
                worst = std::max(worst, std::abs(diff(j, k)) / denom);
            }
    }
    return worst;
}

} // namespace nlreg
