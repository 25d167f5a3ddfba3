#ifndef NLREG_GLM_HPP
#define NLREG_GLM_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "nlreg/errors.hpp"
#include "nlreg/solvers.hpp"

namespace nlreg {

/// Exponential-family pieces: cumulant b and its derivatives on the natural
/// parameter, plus the canonical link id and how the dispersion is treated.
struct Family {
    std::string id; // gaussian, binomial, poisson, gamma
    std::function<double(double)> b;
    std::function<double(double)> b_prime;        // mean as a function of theta
    std::function<double(double)> b_double_prime; // variance function in theta
    std::function<double(double)> theta_of_mu;    // (b')^{-1}
    std::string canonical_link;
    bool dispersion_fixed = true; // binomial/poisson: phi = 1
    std::function<bool(double)> in_support;
    /// Unit deviance d(y, mu); total deviance is the weighted sum.
    std::function<double(double y, double mu)> unit_deviance;
};

struct LinkSpec {
    std::string id; // identity, log, logit, inverse
    std::function<double(double)> g;
    std::function<double(double)> g_inv;
    std::function<double(double)> g_prime;
    /// Valid eta range check (logit is unrestricted, log/inverse restrict mu).
    std::function<bool(double mu)> mu_valid;
};

enum class GlmStatus { converged, max_iter };

struct GlmFit {
    Eigen::VectorXd beta_hat;
    Eigen::VectorXd eta;
    Eigen::VectorXd mu;
    Eigen::VectorXd weights; // final IRLS working weights W_i
    double deviance = 0.0;
    double dispersion = 1.0; // phi: fixed for binomial/poisson, Pearson otherwise
    int iterations = 0;
    int halvings = 0; // deviance-increase backtracks taken across all iterations
    GlmStatus status = GlmStatus::max_iter;
    bool separation_warning = false; // any |eta| > 30 under logit
};

Family family_from_string(const std::string& id);
LinkSpec link_from_string(const std::string& id);
LinkSpec canonical_link(const Family& family);

/// Fisher-scoring IRLS: beta <- (X'WX)^{-1} X'W z with working response
/// z = eta + g'(mu)(y - mu) and weight W_i = 1 / (b''(theta_i) g'(mu_i)^2 phi)
/// (equivalently h'/(g' phi) with h = (b')^{-1} o g^{-1}). Starts from
/// beta = 0 unless init is non-empty; step-halves whenever the deviance
/// would increase; converges on relative deviance change < opts.tol_rel_S.
///
/// prior_weights (e.g. binomial trial counts) multiply the working weights
/// and the deviance termwise; empty means all ones.
GlmFit irls_fit(const Family& family, const LinkSpec& link,
                const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                const SolverOptions& opts = {},
                const Eigen::VectorXd& init = Eigen::VectorXd(),
                const Eigen::VectorXd& prior_weights = Eigen::VectorXd());

/// Score vector of the log likelihood in beta:
/// X' diag(h'(eta_i) / phi) (y - mu), the exact gradient for any link.
Eigen::VectorXd glm_gradient(const Family& family, const LinkSpec& link,
                             const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                             const Eigen::VectorXd& beta, double phi = 1.0,
                             const Eigen::VectorXd& prior_weights = Eigen::VectorXd());

/// Log likelihood up to terms constant in beta (used by the gradient
/// finite-difference checks and the Newton comparison).
double glm_log_likelihood(const Family& family, const LinkSpec& link,
                          const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& beta, double phi = 1.0,
                          const Eigen::VectorXd& prior_weights = Eigen::VectorXd());

/// Total deviance at fitted means mu.
double glm_deviance(const Family& family, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& mu,
                    const Eigen::VectorXd& prior_weights = Eigen::VectorXd());

} // namespace nlreg

#endif
