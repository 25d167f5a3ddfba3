#ifndef NLREG_BAYES_HPP
#define NLREG_BAYES_HPP

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "nlreg/core.hpp"
#include "nlreg/models.hpp"

namespace nlreg {

struct ChainSpec {
    int iterations = 50000;
    int burn_in = 10000;
    /// Per-coordinate proposal standard deviations for (theta, log sigma);
    /// empty means the default 0.02 * |init| + 1e-3 per coordinate.
    Eigen::VectorXd proposal_sd;
    std::uint64_t seed = 0;
    Eigen::VectorXd init;
    /// Initial sigma; <= 0 means sqrt(S(init)/n).
    double sigma0 = 0.0;
};

struct PosteriorSummary {
    Eigen::VectorXd mean; // theta coordinates, then sigma
    std::vector<std::pair<double, double>> credible_intervals; // 2.5% / 97.5%
    double acceptance_rate = 0.0;
    Eigen::VectorXd ess;
};

/// One post-burn-in sample per row: theta..., sigma, log posterior.
struct Chain {
    Eigen::MatrixXd samples;
    Eigen::VectorXd log_post;
};

struct BayesResult {
    PosteriorSummary summary;
    Chain chain;
};

/// Random-walk Metropolis on (theta, log sigma) for the Gaussian regression
/// likelihood, flat prior on theta over the model domain and log-uniform on
/// sigma. Proposals outside the domain or with non-finite S are rejected.
/// Throws ZeroAcceptance when no post-burn-in proposal both gets accepted
/// and moves the state.
BayesResult metropolis_fit(const ModelSpec& model, const Dataset& data,
                           const ChainSpec& spec);

/// Generic scalar-or-vector random-walk Metropolis on a caller-supplied log
/// target; the regression sampler is this routine with the regression log
/// posterior plugged in. Exposed for distribution-level sampler tests.
Chain metropolis_chain(const std::function<double(const Eigen::VectorXd&)>& log_target,
                       const Eigen::VectorXd& init, const Eigen::VectorXd& proposal_sd,
                       int iterations, int burn_in, std::uint64_t seed,
                       double* acceptance_rate = nullptr);

/// Effective sample size by the initial-positive-sequence estimator on the
/// chain autocorrelations.
double effective_sample_size(const Eigen::VectorXd& draws);

/// Summary statistics (means, equal-tailed 95% intervals, ESS) from a chain.
PosteriorSummary summarize_chain(const Chain& chain, double acceptance_rate);

} // namespace nlreg

#endif
