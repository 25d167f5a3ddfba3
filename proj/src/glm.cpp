#include "nlreg/glm.hpp"

#include <cmath>
#include <limits>

namespace nlreg {

namespace {

constexpr double kCondLimit = 1e12;
constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

Eigen::VectorXd ones_like(const Eigen::VectorXd& w, Eigen::Index n) {
    if (w.size() == 0) return Eigen::VectorXd::Ones(n);
    if (w.size() != n) throw Error("prior weights length does not match n");
    return w;
}

// Starting means used when the supplied beta gives an invalid mu (the
// gamma/inverse case at beta = 0): nudge y into the mean space.
double mu_start(const Family& family, double y) {
    if (family.id == "binomial") return (y + 0.5) / 2.0;
    if (family.id == "poisson") return y + 0.1;
    if (family.id == "gamma") return std::max(y, 1e-8);
    return y;
}

struct LinkState {
    Eigen::VectorXd eta, mu;
    bool valid = true;
};

LinkState eval_link(const LinkSpec& link, const Eigen::MatrixXd& x,
                    const Eigen::VectorXd& beta) {
    LinkState st;
    st.eta = x * beta;
    st.mu.resize(st.eta.size());
    for (Eigen::Index i = 0; i < st.eta.size(); ++i) {
        st.mu(i) = link.g_inv(st.eta(i));
        if (!std::isfinite(st.mu(i)) || !link.mu_valid(st.mu(i))) st.valid = false;
    }
    return st;
}

} // namespace

Family family_from_string(const std::string& id) {
    Family f;
    f.id = id;
    if (id == "gaussian") {
        f.b = [](double t) { return 0.5 * t * t; };
        f.b_prime = [](double t) { return t; };
        f.b_double_prime = [](double) { return 1.0; };
        f.theta_of_mu = [](double mu) { return mu; };
        f.canonical_link = "identity";
        f.dispersion_fixed = false;
        f.in_support = [](double) { return true; };
        f.unit_deviance = [](double y, double mu) { return (y - mu) * (y - mu); };
        return f;
    }
    if (id == "binomial") {
        f.b = [](double t) { return std::log1p(std::exp(t)); };
        f.b_prime = [](double t) { return 1.0 / (1.0 + std::exp(-t)); };
        f.b_double_prime = [](double t) {
            double mu = 1.0 / (1.0 + std::exp(-t));
            return mu * (1.0 - mu);
        };
        f.theta_of_mu = [](double mu) { return std::log(mu / (1.0 - mu)); };
        f.canonical_link = "logit";
        f.dispersion_fixed = true;
        f.in_support = [](double y) { return y >= 0.0 && y <= 1.0; };
        f.unit_deviance = [](double y, double mu) {
            return 2.0 * (xlogy(y, y / mu) + xlogy(1.0 - y, (1.0 - y) / (1.0 - mu)));
        };
        return f;
    }
    if (id == "poisson") {
        f.b = [](double t) { return std::exp(t); };
        f.b_prime = [](double t) { return std::exp(t); };
        f.b_double_prime = [](double t) { return std::exp(t); };
        f.theta_of_mu = [](double mu) { return std::log(mu); };
        f.canonical_link = "log";
        f.dispersion_fixed = true;
        f.in_support = [](double y) { return y >= 0.0; };
        f.unit_deviance = [](double y, double mu) {
            return 2.0 * (xlogy(y, y / mu) - (y - mu));
        };
        return f;
    }
    if (id == "gamma") {
        f.b = [](double t) { return -std::log(-t); };
        f.b_prime = [](double t) { return -1.0 / t; };
        f.b_double_prime = [](double t) { return 1.0 / (t * t); };
        f.theta_of_mu = [](double mu) { return -1.0 / mu; };
        f.canonical_link = "inverse";
        f.dispersion_fixed = false;
        f.in_support = [](double y) { return y > 0.0; };
        f.unit_deviance = [](double y, double mu) {
            return 2.0 * (-std::log(y / mu) + (y - mu) / mu);
        };
        return f;
    }
    throw UsageError("unknown family '" + id + "'");
}

LinkSpec link_from_string(const std::string& id) {
    LinkSpec l;
    l.id = id;
    if (id == "identity") {
        l.g = [](double mu) { return mu; };
        l.g_inv = [](double eta) { return eta; };
        l.g_prime = [](double) { return 1.0; };
        l.mu_valid = [](double) { return true; };
        return l;
    }
    if (id == "log") {
        l.g = [](double mu) { return std::log(mu); };
        l.g_inv = [](double eta) { return std::exp(eta); };
        l.g_prime = [](double mu) { return 1.0 / mu; };
        l.mu_valid = [](double mu) { return mu > 0.0; };
        return l;
    }
    if (id == "logit") {
        l.g = [](double mu) { return std::log(mu / (1.0 - mu)); };
        l.g_inv = [](double eta) { return 1.0 / (1.0 + std::exp(-eta)); };
        l.g_prime = [](double mu) { return 1.0 / (mu * (1.0 - mu)); };
        l.mu_valid = [](double mu) { return mu > 0.0 && mu < 1.0; };
        return l;
    }
    if (id == "inverse") {
        l.g = [](double mu) { return 1.0 / mu; };
        l.g_inv = [](double eta) { return 1.0 / eta; };
        l.g_prime = [](double mu) { return -1.0 / (mu * mu); };
        l.mu_valid = [](double mu) { return mu > 0.0; };
        return l;
    }
    throw UsageError("unknown link '" + id + "'");
}

LinkSpec canonical_link(const Family& family) {
    return link_from_string(family.canonical_link);
}

double glm_deviance(const Family& family, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& mu, const Eigen::VectorXd& prior_weights) {
    Eigen::VectorXd pw = ones_like(prior_weights, y.size());
    double dev = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i)
        dev += pw(i) * family.unit_deviance(y(i), mu(i));
    return dev;
}

Eigen::VectorXd glm_gradient(const Family& family, const LinkSpec& link,
                             const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                             const Eigen::VectorXd& beta, double phi,
                             const Eigen::VectorXd& prior_weights) {
    Eigen::VectorXd pw = ones_like(prior_weights, y.size());
    LinkState st = eval_link(link, x, beta);
    if (!st.valid) throw NonFiniteEvaluation("glm_gradient: mean out of range");
    Eigen::VectorXd scale(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        // dtheta/deta = 1 / (b''(theta) g'(mu)); the chain rule factor h'.
        double theta = family.theta_of_mu(st.mu(i));
        double hp = 1.0 / (family.b_double_prime(theta) * link.g_prime(st.mu(i)));
        scale(i) = pw(i) * hp * (y(i) - st.mu(i)) / phi;
    }
    return x.transpose() * scale;
}

double glm_log_likelihood(const Family& family, const LinkSpec& link,
                          const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& beta, double phi,
                          const Eigen::VectorXd& prior_weights) {
    Eigen::VectorXd pw = ones_like(prior_weights, y.size());
    LinkState st = eval_link(link, x, beta);
    if (!st.valid) throw NonFiniteEvaluation("glm_log_likelihood: mean out of range");
    double ll = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        double theta = family.theta_of_mu(st.mu(i));
        ll += pw(i) * (y(i) * theta - family.b(theta)) / phi;
    }
    return ll;
}

GlmFit irls_fit(const Family& family, const LinkSpec& link, const Eigen::MatrixXd& x,
                const Eigen::VectorXd& y, const SolverOptions& opts,
                const Eigen::VectorXd& init, const Eigen::VectorXd& prior_weights) {
    const Eigen::Index n = x.rows();
    const Eigen::Index q = x.cols();
    if (y.size() != n) throw Error("irls_fit: x rows and y length differ");
    if (n <= q) throw Error("irls_fit: need more observations than coefficients");
    Eigen::VectorXd pw = ones_like(prior_weights, n);
    for (Eigen::Index i = 0; i < n; ++i)
        if (!family.in_support(y(i)))
            throw Error("irls_fit: y(" + std::to_string(i) + ") outside the " +
                        family.id + " support");

    GlmFit fit;
    fit.beta_hat = init.size() > 0 ? init : Eigen::VectorXd::Zero(q);
    if (init.size() > 0 && init.size() != q)
        throw Error("irls_fit: init length does not match coefficient count");

    LinkState st = eval_link(link, x, fit.beta_hat);
    double dev;
    if (!st.valid) {
        // Invalid start (gamma at beta = 0): seed the first weighted solve
        // from y-based means instead of a beta. Those means fit y too well
        // to serve as a deviance baseline (for gamma they reproduce y and
        // the deviance is 0), so the baseline is infinite and the first
        // valid step is always accepted.
        st.mu.resize(n);
        st.eta.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            st.mu(i) = mu_start(family, y(i));
            st.eta(i) = link.g(st.mu(i));
        }
        st.valid = true;
        dev = kInf;
    } else {
        dev = glm_deviance(family, y, st.mu, pw);
    }

    Eigen::VectorXd w(n), z(n);
    auto weighted_solve = [&](const LinkState& at) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double gp = link.g_prime(at.mu(i));
            double theta = family.theta_of_mu(at.mu(i));
            double variance = family.b_double_prime(theta);
            w(i) = pw(i) / (variance * gp * gp);
            z(i) = at.eta(i) + gp * (y(i) - at.mu(i));
        }
        Eigen::MatrixXd xtwx = x.transpose() * w.asDiagonal() * x;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(xtwx);
        double lo = eig.eigenvalues().minCoeff();
        double hi = eig.eigenvalues().maxCoeff();
        if (!(lo > 0.0) || hi / lo > kCondLimit)
            throw SingularWeightedSystem("X'WX is singular or too ill-conditioned");
        Eigen::VectorXd rhs = x.transpose() * (w.asDiagonal() * z);
        return Eigen::VectorXd(eig.eigenvectors() *
                               (eig.eigenvalues().cwiseInverse().asDiagonal() *
                                (eig.eigenvectors().transpose() * rhs)));
    };

    for (int it = 1; it <= opts.max_iter; ++it) {
        Eigen::VectorXd proposal = weighted_solve(st);
        Eigen::VectorXd direction = proposal - fit.beta_hat;

        double scale = 1.0;
        double dev_new = kInf;
        bool accepted = false;
        Eigen::VectorXd beta_try;
        LinkState st_try;
        while (scale >= opts.min_step_scale) {
            beta_try = fit.beta_hat + scale * direction;
            st_try = eval_link(link, x, beta_try);
            dev_new = st_try.valid ? glm_deviance(family, y, st_try.mu, pw) : kInf;
            if (st_try.valid && dev_new <= dev) {
                accepted = true;
                break;
            }
            scale *= 0.5;
            ++fit.halvings;
        }
        if (!accepted) {
            fit.status = GlmStatus::max_iter;
            break;
        }

        double dev_prev = dev;
        fit.beta_hat = beta_try;
        st = st_try;
        dev = dev_new;
        fit.iterations = it;
        if (std::abs(dev_prev - dev) / (std::abs(dev) + 0.1) < opts.tol_rel_S) {
            fit.status = GlmStatus::converged;
            break;
        }
        if (it == opts.max_iter) fit.status = GlmStatus::max_iter;
    }

    fit.eta = st.eta;
    fit.mu = st.mu;
    fit.deviance = dev;
    fit.weights.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double gp = link.g_prime(st.mu(i));
        double variance = family.b_double_prime(family.theta_of_mu(st.mu(i)));
        fit.weights(i) = pw(i) / (variance * gp * gp);
    }
    if (link.id == "logit")
        fit.separation_warning = (st.eta.cwiseAbs().maxCoeff() > 30.0);
    if (!family.dispersion_fixed) {
        // Pearson moment estimate of phi.
        double pearson = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double variance = family.b_double_prime(family.theta_of_mu(st.mu(i)));
            double r = y(i) - st.mu(i);
            pearson += pw(i) * r * r / variance;
        }
        fit.dispersion = pearson / static_cast<double>(n - q);
    }
    return fit;
}

} // namespace nlreg
