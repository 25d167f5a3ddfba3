#include "nlreg/solvers.hpp"

#include <cmath>
#include <limits>

namespace nlreg {

const char* to_string(FitStatus s) {
    switch (s) {
        case FitStatus::converged: return "converged";
        case FitStatus::max_iter: return "max_iter";
        case FitStatus::singular_normal_equations: return "singular_normal_equations";
        case FitStatus::line_search_failed: return "line_search_failed";
    }
    return "unknown";
}

namespace {

constexpr double kCondLimit = 1e12;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Residuals/Jacobian/objective, optionally row-scaled by sqrt weights so the
// same loop serves weighted least squares.
EvalBundle eval_scaled(const ModelSpec& model, const Eigen::VectorXd& theta,
                       const Dataset& data, const Eigen::VectorXd& sqrt_w) {
    EvalBundle b = eval_bundle(model, theta, data);
    if (sqrt_w.size() > 0) {
        b.residuals.array() *= sqrt_w.array();
        b.jacobian.array().colwise() *= sqrt_w.array();
        b.objective = b.residuals.squaredNorm();
    }
    return b;
}

// Objective only; +inf when the point is out of domain or non-finite, which
// a line search treats as a rejected step. Mirrors eval_scaled's arithmetic
// exactly (vector fill, then squaredNorm) so an accepted step's objective is
// bit-identical to the one later recorded in the trace.
double objective_or_inf(const ModelSpec& model, const Eigen::VectorXd& theta,
                        const Dataset& data, const Eigen::VectorXd& sqrt_w) {
    if (!theta.allFinite()) return kInf;
    try {
        Eigen::VectorXd r(data.n());
        for (Eigen::Index i = 0; i < data.n(); ++i)
            r(i) = data.y(i) - evaluate(model, theta, data.x.row(i));
        if (sqrt_w.size() > 0) r.array() *= sqrt_w.array();
        double s = r.squaredNorm();
        return std::isfinite(s) ? s : kInf;
    } catch (const NonFiniteEvaluation&) {
        return kInf;
    }
}

bool grad_test(const Eigen::VectorXd& grad2, double s, double tol_grad) {
    return grad2.lpNorm<Eigen::Infinity>() <= tol_grad * (1.0 + s);
}

struct NormalSystem {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    bool singular = false;
};

NormalSystem factor_jtj(const Eigen::MatrixXd& jtj) {
    NormalSystem sys;
    sys.eig.compute(jtj);
    double lo = sys.eig.eigenvalues().minCoeff();
    double hi = sys.eig.eigenvalues().maxCoeff();
    sys.singular = !(lo > 0.0) || hi / lo > kCondLimit;
    return sys;
}

Eigen::VectorXd solve_spd(const NormalSystem& sys, const Eigen::VectorXd& rhs) {
    return sys.eig.eigenvectors() *
           (sys.eig.eigenvalues().cwiseInverse().asDiagonal() *
            (sys.eig.eigenvectors().transpose() * rhs));
}

// Shared Gauss-Newton / Newton-Raphson loop; `newton` switches the step
// direction, everything else (halving, convergence tests, trace) is common.
FitResult descent_fit(const ModelSpec& model, const Dataset& data,
                      const Eigen::VectorXd& init, const SolverOptions& opts,
                      bool newton, const Eigen::VectorXd& sqrt_w) {
    FitResult out;
    Eigen::VectorXd theta = init;
    EvalBundle cur = eval_scaled(model, theta, data, sqrt_w);
    out.trace.push_back({theta, cur.objective, 0.0, false});

    while (true) {
        Eigen::VectorXd jtr = cur.jacobian.transpose() * cur.residuals;
        if (grad_test(2.0 * jtr, cur.objective, opts.tol_grad)) {
            out.status = FitStatus::converged;
            break;
        }
        if (out.iterations >= opts.max_iter) {
            out.status = FitStatus::max_iter;
            break;
        }

        Eigen::MatrixXd jtj = cur.jacobian.transpose() * cur.jacobian;
        Eigen::VectorXd delta;
        bool fell_back = false;
        if (newton) {
            // H = 2 J'J - 2 sum_i r_i G_i; keep it only when positive definite.
            SecondDerivArray g = model.has_analytic_hessian
                                     ? analytic_second(model, theta, data)
                                     : finite_diff_second_array(model, theta, data);
            Eigen::MatrixXd h = 2.0 * jtj;
            for (Eigen::Index i = 0; i < data.n(); ++i)
                h -= 2.0 * cur.residuals(i) * g[static_cast<std::size_t>(i)];
            Eigen::LLT<Eigen::MatrixXd> llt(h);
            if (llt.info() == Eigen::Success) {
                delta = llt.solve(2.0 * jtr);
            } else {
                fell_back = true;
            }
        }
        if (!newton || fell_back) {
            NormalSystem sys = factor_jtj(jtj);
            if (sys.singular) {
                out.status = FitStatus::singular_normal_equations;
                break;
            }
            delta = solve_spd(sys, jtr);
        }
        if (!delta.allFinite()) {
            out.status = FitStatus::singular_normal_equations;
            break;
        }

        // Backtracking halving: accept the first lambda that strictly
        // decreases the objective.
        double lambda = 1.0;
        double s_new = kInf;
        Eigen::VectorXd cand;
        while (lambda >= opts.min_step_scale) {
            cand = theta + lambda * delta;
            s_new = objective_or_inf(model, cand, data, sqrt_w);
            if (s_new < cur.objective) break;
            lambda *= 0.5;
        }
        if (!(s_new < cur.objective)) {
            out.status = FitStatus::line_search_failed;
            break;
        }

        theta = cand;
        cur = eval_scaled(model, theta, data, sqrt_w);
        ++out.iterations;
        out.trace.push_back({theta, cur.objective, lambda, fell_back});
    }

    out.theta_hat = theta;
    out.s_value = cur.objective;
    out.jacobian_at_hat = cur.jacobian;
    return out;
}

} // namespace

FitResult gauss_newton(const ModelSpec& model, const Dataset& data,
                       const Eigen::VectorXd& init, const SolverOptions& opts) {
    return descent_fit(model, data, init, opts, false, Eigen::VectorXd());
}

FitResult newton_raphson(const ModelSpec& model, const Dataset& data,
                         const Eigen::VectorXd& init, const SolverOptions& opts) {
    return descent_fit(model, data, init, opts, true, Eigen::VectorXd());
}

FitResult gauss_newton_weighted(const ModelSpec& model, const Dataset& data,
                                const Eigen::VectorXd& weights,
                                const Eigen::VectorXd& init,
                                const SolverOptions& opts) {
    if (weights.size() != data.n())
        throw Error("weights length " + std::to_string(weights.size()) +
                    " does not match n=" + std::to_string(data.n()));
    if (!(weights.array() > 0.0).all() || !weights.allFinite())
        throw DegenerateWeights("weights must be strictly positive and finite");
    return descent_fit(model, data, init, opts, false, weights.cwiseSqrt());
}

FitResult levenberg_marquardt(const ModelSpec& model, const Dataset& data,
                              const Eigen::VectorXd& init,
                              const SolverOptions& opts) {
    FitResult out;
    Eigen::VectorXd theta = init;
    Eigen::VectorXd empty;
    EvalBundle cur = eval_bundle(model, theta, data);
    out.trace.push_back({theta, cur.objective, 0.0, false});
    double mu = opts.damping_init;

    while (true) {
        Eigen::VectorXd jtr = cur.jacobian.transpose() * cur.residuals;
        if (grad_test(2.0 * jtr, cur.objective, opts.tol_grad)) {
            out.status = FitStatus::converged;
            break;
        }
        if (out.iterations >= opts.max_iter) {
            out.status = FitStatus::max_iter;
            break;
        }

        Eigen::MatrixXd jtj = cur.jacobian.transpose() * cur.jacobian;
        // Escalate mu until a step is accepted or the damping limit is hit.
        bool accepted = false;
        while (true) {
            Eigen::MatrixXd damped = jtj;
            damped.diagonal() += mu * jtj.diagonal();
            Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
            Eigen::VectorXd delta = ldlt.solve(jtr);
            double s_new = delta.allFinite()
                               ? objective_or_inf(model, theta + delta, data, empty)
                               : kInf;
            if (s_new < cur.objective) {
                theta += delta;
                cur = eval_bundle(model, theta, data);
                ++out.iterations;
                out.trace.push_back({theta, cur.objective, mu, false});
                mu /= 10.0;
                accepted = true;
                break;
            }
            mu *= 10.0;
            if (mu > kCondLimit) break;
        }
        if (!accepted) {
            out.status = FitStatus::line_search_failed;
            break;
        }
    }

    out.theta_hat = theta;
    out.s_value = cur.objective;
    out.jacobian_at_hat = cur.jacobian;
    return out;
}

} // namespace nlreg
