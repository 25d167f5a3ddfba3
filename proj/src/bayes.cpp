#include "nlreg/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlreg/rng.hpp"

namespace nlreg {

namespace {

const double kLog2Pi = std::log(2.0 * std::acos(-1.0));

double quantile_sorted(const std::vector<double>& sorted, double q) {
    double pos = q * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

} // namespace

Chain metropolis_chain(const std::function<double(const Eigen::VectorXd&)>& log_target,
                       const Eigen::VectorXd& init, const Eigen::VectorXd& proposal_sd,
                       int iterations, int burn_in, std::uint64_t seed,
                       double* acceptance_rate) {
    if (burn_in < 0 || burn_in >= iterations)
        throw Error("metropolis_chain: need 0 <= burn_in < iterations");
    if (proposal_sd.size() != init.size())
        throw Error("metropolis_chain: proposal_sd length mismatch");
    if (!(proposal_sd.array() > 0.0).all())
        throw Error("metropolis_chain: proposal_sd entries must be positive");

    const auto dim = init.size();
    const int kept = iterations - burn_in;
    Chain chain;
    chain.samples.resize(kept, dim);
    chain.log_post.resize(kept);

    CounterRng rng(seed);
    Eigen::VectorXd state = init;
    double lp = log_target(state);
    if (!std::isfinite(lp))
        throw Error("metropolis_chain: log target is not finite at the initial state");

    Eigen::VectorXd proposal(dim);
    long long moves = 0;
    for (int it = 0; it < iterations; ++it) {
        for (Eigen::Index j = 0; j < dim; ++j)
            proposal(j) = state(j) + proposal_sd(j) * rng.next_normal();
        double lp_new = log_target(proposal);
        bool accept = false;
        if (lp_new > -std::numeric_limits<double>::infinity()) {
            double log_u = std::log(rng.next_uniform(0.0, 1.0));
            accept = log_u < lp_new - lp;
        }
        if (accept) {
            // A proposal that rounds to the current state is not a move;
            // degenerate proposal scales must surface as zero acceptance.
            bool changed = false;
            for (Eigen::Index j = 0; j < dim && !changed; ++j)
                changed = proposal(j) != state(j);
            state = proposal;
            lp = lp_new;
            if (it >= burn_in && changed) ++moves;
        }
        if (it >= burn_in) {
            chain.samples.row(it - burn_in) = state;
            chain.log_post(it - burn_in) = lp;
        }
    }
    double rate = static_cast<double>(moves) / static_cast<double>(kept);
    if (acceptance_rate) *acceptance_rate = rate;
    if (moves == 0)
        throw ZeroAcceptance("chain never moved after burn-in; proposal scale degenerate");
    return chain;
}

double effective_sample_size(const Eigen::VectorXd& draws) {
    const auto n = draws.size();
    if (n < 4) return static_cast<double>(n);
    double mean = draws.mean();
    Eigen::VectorXd c = draws.array() - mean;
    double c0 = c.squaredNorm() / static_cast<double>(n);
    if (c0 <= 0.0) return static_cast<double>(n);

    // Geyer initial positive sequence: sum paired autocorrelations while the
    // pair sums stay positive.
    auto rho = [&](Eigen::Index t) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i + t < n; ++i) acc += c(i) * c(i + t);
        return acc / (static_cast<double>(n) * c0);
    };
    double tau = 1.0;
    for (Eigen::Index k = 1; k + 1 < n; k += 2) {
        double pair = rho(k) + rho(k + 1);
        if (pair <= 0.0) break;
        tau += 2.0 * pair;
    }
    double ess = static_cast<double>(n) / tau;
    return std::min(ess, static_cast<double>(n));
}

PosteriorSummary summarize_chain(const Chain& chain, double acceptance_rate) {
    PosteriorSummary s;
    const auto dim = chain.samples.cols();
    const auto n = chain.samples.rows();
    s.mean = chain.samples.colwise().mean();
    s.acceptance_rate = acceptance_rate;
    s.ess.resize(dim);
    s.credible_intervals.reserve(static_cast<std::size_t>(dim));
    std::vector<double> col(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < n; ++i)
            col[static_cast<std::size_t>(i)] = chain.samples(i, j);
        std::sort(col.begin(), col.end());
        s.credible_intervals.emplace_back(quantile_sorted(col, 0.025),
                                          quantile_sorted(col, 0.975));
        s.ess(j) = effective_sample_size(chain.samples.col(j));
    }
    return s;
}

BayesResult metropolis_fit(const ModelSpec& model, const Dataset& data,
                           const ChainSpec& spec) {
    const int p = model.p;
    if (spec.init.size() != p)
        throw Error("metropolis_fit: init length does not match model parameter count");

    double s0 = residual_sum_squares(model, spec.init, data);
    double sigma0 = spec.sigma0 > 0.0
                        ? spec.sigma0
                        : std::sqrt(std::max(s0 / static_cast<double>(data.n()), 1e-12));

    Eigen::VectorXd state0(p + 1);
    state0.head(p) = spec.init;
    state0(p) = std::log(sigma0);

    // Default proposal scale is 2% of each init coordinate plus a floor.
    // The init vector is (theta, sigma0), so the last entry is read off
    // sigma0 even though that coordinate walks in log(sigma).
    Eigen::VectorXd sd = spec.proposal_sd;
    if (sd.size() == 0) {
        sd.resize(p + 1);
        for (int j = 0; j < p; ++j) sd(j) = 0.02 * std::abs(spec.init(j)) + 1e-3;
        sd(p) = 0.02 * sigma0 + 1e-3;
    }
    if (sd.size() != p + 1)
        throw Error("metropolis_fit: proposal_sd must have p+1 entries (theta, log sigma)");

    // Flat prior on theta over the model domain, log-uniform on sigma; in
    // v = log(sigma) coordinates the target is the plain likelihood term.
    ModelSpec m = model;
    Dataset d = data;
    const double n = static_cast<double>(data.n());
    auto log_target = [m, d, n](const Eigen::VectorXd& state) {
        double v = state(state.size() - 1);
        try {
            double s = residual_sum_squares(m, state.head(state.size() - 1), d);
            return -s / (2.0 * std::exp(2.0 * v)) - n * v - 0.5 * n * kLog2Pi;
        } catch (const NonFiniteEvaluation&) {
            return -std::numeric_limits<double>::infinity();
        }
    };

    double rate = 0.0;
    Chain chain = metropolis_chain(log_target, state0, sd, spec.iterations,
                                   spec.burn_in, spec.seed, &rate);
    chain.samples.col(p) = chain.samples.col(p).array().exp(); // v -> sigma

    BayesResult out;
    out.summary = summarize_chain(chain, rate);
    out.chain = std::move(chain);
    return out;
}

} // namespace nlreg
