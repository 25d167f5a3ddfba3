#include "nlreg/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "nlreg/bayes.hpp"
#include "nlreg/csv.hpp"
#include "nlreg/curvature.hpp"
#include "nlreg/glm.hpp"
#include "nlreg/hetero.hpp"
#include "nlreg/inference.hpp"
#include "nlreg/models.hpp"
#include "nlreg/sim.hpp"
#include "nlreg/solvers.hpp"

namespace nlreg {

using json = nlohmann::ordered_json;

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

const char* error_name(const std::exception& e) {
    if (dynamic_cast<const DomainViolation*>(&e)) return "domain_violation";
    if (dynamic_cast<const NonFiniteEvaluation*>(&e)) return "non_finite_evaluation";
    if (dynamic_cast<const NotAvailable*>(&e)) return "not_available";
    if (dynamic_cast<const NotConverged*>(&e)) return "not_converged";
    if (dynamic_cast<const SingularInformation*>(&e)) return "singular_information";
    if (dynamic_cast<const SingularWeightedSystem*>(&e)) return "singular_weighted_system";
    if (dynamic_cast<const GridTooCoarse*>(&e)) return "grid_too_coarse";
    if (dynamic_cast<const DegenerateWeights*>(&e)) return "degenerate_weights";
    if (dynamic_cast<const EmptyNeighborhood*>(&e)) return "empty_neighborhood";
    if (dynamic_cast<const ZeroAcceptance*>(&e)) return "zero_acceptance";
    if (dynamic_cast<const TooManyFailures*>(&e)) return "too_many_failures";
    if (dynamic_cast<const ParseError*>(&e)) return "parse_error";
    if (dynamic_cast<const IoError*>(&e)) return "io_error";
    if (dynamic_cast<const Error*>(&e)) return "error";
    return "internal_error";
}

void emit(const CliConfig& config, const std::string& content, std::ostream& out) {
    if (config.output_path.empty()) {
        out << content;
        return;
    }
    std::ofstream f(config.output_path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + config.output_path + "'");
    f << content;
}

FitResult run_solver(const std::string& solver, const ModelSpec& model,
                     const Dataset& data, const Eigen::VectorXd& init) {
    if (solver == "gn") return gauss_newton(model, data, init);
    if (solver == "nr") return newton_raphson(model, data, init);
    if (solver == "lm") return levenberg_marquardt(model, data, init);
    throw UsageError("--solver must be one of gn, nr, lm");
}

json fit_to_json(const FitResult& fit) {
    json j;
    j["status"] = to_string(fit.status);
    j["converged"] = fit.status == FitStatus::converged;
    j["iterations"] = fit.iterations;
    j["theta_hat"] = vec_to_json(fit.theta_hat);
    j["s_value"] = fit.s_value;
    return j;
}

int cmd_fit(const CliConfig& config, std::ostream& out) {
    ModelSpec model = model_from_string(config.model_id);
    Dataset data = read_csv(config.input_path);
    Eigen::VectorXd init = to_eigen(config.init);

    FitResult fit;
    if (config.variance == "constant") {
        fit = run_solver(config.solver, model, data, init);
    } else if (config.variance == "power_of_mean") {
        VarianceModel vm;
        vm.kind = VarianceKind::power_of_mean;
        vm.gamma = config.gamma;
        fit = gls_fit(model, data, vm, init);
    } else {
        throw UsageError("--variance must be constant or power_of_mean");
    }

    json j;
    j["command"] = "fit";
    j["model"] = config.model_id;
    j["solver"] = config.variance == "constant" ? config.solver : "gls";
    j.update(fit_to_json(fit));
    if (fit.status == FitStatus::converged && data.n() > model.p) {
        InferenceReport rep = build_report(fit, data, config.alpha);
        j["s2"] = rep.s2;
        j["sigma2_mle"] = rep.sigma2_mle;
        json intervals = json::array();
        for (const auto& iv : rep.wald_intervals)
            intervals.push_back(json::array({iv.first, iv.second}));
        j["wald_intervals"] = intervals;
        j["alpha"] = rep.alpha;
    }
    emit(config, j.dump(2) + "\n", out);
    return 0;
}

int cmd_glm(const CliConfig& config, std::ostream& out) {
    Family family = family_from_string(config.family);
    LinkSpec link = config.link.empty() ? canonical_link(family)
                                        : link_from_string(config.link);
    Dataset data = read_csv(config.input_path);
    Eigen::MatrixXd x = data.x;
    if (config.add_intercept) {
        Eigen::MatrixXd with(x.rows(), x.cols() + 1);
        with << Eigen::VectorXd::Ones(x.rows()), x;
        x = with;
    }
    Eigen::VectorXd init = to_eigen(config.init);
    if (init.size() > 0 && init.size() != x.cols())
        throw UsageError("init length " + std::to_string(init.size()) +
                         ", design has " + std::to_string(x.cols()) + " columns");

    GlmFit fit = irls_fit(family, link, x, data.y, SolverOptions{}, init);
    json j;
    j["command"] = "glm";
    j["family"] = family.id;
    j["link"] = link.id;
    j["status"] = fit.status == GlmStatus::converged ? "converged" : "max_iter";
    j["iterations"] = fit.iterations;
    j["beta_hat"] = vec_to_json(fit.beta_hat);
    j["deviance"] = fit.deviance;
    j["dispersion"] = fit.dispersion;
    j["separation_warning"] = fit.separation_warning;
    emit(config, j.dump(2) + "\n", out);
    return 0;
}

int cmd_region(const CliConfig& config, std::ostream& out) {
    ModelSpec model = model_from_string(config.model_id);
    Dataset data = read_csv(config.input_path);
    Eigen::VectorXd init = to_eigen(config.init);
    FitResult fit = run_solver(config.solver, model, data, init);
    if (fit.status != FitStatus::converged)
        throw NotConverged(std::string("fit status ") + to_string(fit.status));
    InferenceReport rep = build_report(fit, data, config.alpha);

    if (!config.membership_only && model.p != 2)
        throw Error("boundary grid requires p=2; use --membership-only");

    ConfidenceRegion region;
    if (config.region_kind == "wald") {
        region = wald_region(fit, rep, config.alpha);
    } else {
        GridSpec grid;
        if (config.membership_only) {
            grid.resolution = 0;
        } else if (config.rect.size() == 4) {
            grid.theta1_lo = config.rect[0];
            grid.theta1_hi = config.rect[1];
            grid.theta2_lo = config.rect[2];
            grid.theta2_hi = config.rect[3];
            grid.resolution = config.grid_resolution;
        } else {
            double se1 = std::sqrt(rep.covariance(0, 0));
            double se2 = std::sqrt(rep.covariance(1, 1));
            grid.theta1_lo = fit.theta_hat(0) - 4.0 * se1;
            grid.theta1_hi = fit.theta_hat(0) + 4.0 * se1;
            grid.theta2_lo = fit.theta_hat(1) - 4.0 * se2;
            grid.theta2_hi = fit.theta_hat(1) + 4.0 * se2;
            grid.resolution = config.grid_resolution;
        }
        region = likelihood_region(fit, model, data, config.alpha, grid, config.exact_c);
    }

    if (config.membership_only) {
        json j;
        j["command"] = "region";
        j["kind"] = to_string(region.kind);
        j["level"] = region.level;
        j["threshold"] = region.threshold;
        j["theta_hat"] = vec_to_json(fit.theta_hat);
        j["contains_theta_hat"] = region.contains(fit.theta_hat);
        emit(config, j.dump(2) + "\n", out);
        return 0;
    }

    json meta;
    meta["kind"] = to_string(region.kind);
    meta["level"] = region.level;
    meta["threshold"] = region.threshold;
    std::ostringstream csv;
    csv << "# " << meta.dump() << "\n";
    csv << "theta1,theta2\n";
    for (const auto& pt : region.boundary_grid)
        csv << format_double(pt(0)) << "," << format_double(pt(1)) << "\n";
    emit(config, csv.str(), out);
    return 0;
}

int cmd_curvature(const CliConfig& config, std::ostream& out) {
    ModelSpec model = model_from_string(config.model_id);
    Dataset data = read_csv(config.input_path);
    Eigen::VectorXd init = to_eigen(config.init);
    FitResult fit = run_solver(config.solver, model, data, init);
    if (fit.status != FitStatus::converged)
        throw NotConverged(std::string("fit status ") + to_string(fit.status));

    CurvatureReport rep = rms_curvatures(model, data, fit.theta_hat, config.alpha,
                                         config.directions);
    json j;
    j["command"] = "curvature";
    j["model"] = config.model_id;
    j["theta_hat"] = vec_to_json(fit.theta_hat);
    j["rms_intrinsic"] = rep.rms_intrinsic;
    j["rms_parameter_effects"] = rep.rms_parameter_effects;
    j["scaling_radius"] = rep.scaling_radius;
    j["alpha"] = rep.alpha;
    j["directions_used"] = rep.directions_used;
    emit(config, j.dump(2) + "\n", out);
    return 0;
}

int cmd_smooth(const CliConfig& config, std::ostream& out) {
    Dataset data = read_csv(config.input_path);
    KernelSpec spec;
    spec.bandwidth = config.bandwidth;
    if (config.kernel == "gaussian")
        spec.kernel = KernelKind::gaussian;
    else if (config.kernel == "epanechnikov")
        spec.kernel = KernelKind::epanechnikov;
    else
        throw UsageError("--kernel must be gaussian or epanechnikov");

    std::ostringstream csv;
    csv << "query_x,estimate\n";
    for (double q : config.query_points)
        csv << format_double(q) << "," << format_double(nadaraya_watson(q, data, spec))
            << "\n";
    emit(config, csv.str(), out);
    return 0;
}

int cmd_bayes(const CliConfig& config, std::ostream& out) {
    ModelSpec model = model_from_string(config.model_id);
    Dataset data = read_csv(config.input_path);
    ChainSpec spec;
    spec.iterations = config.iterations;
    spec.burn_in = config.burn_in;
    spec.seed = config.seed;
    spec.init = to_eigen(config.init);
    spec.proposal_sd = to_eigen(config.proposal_sd);

    BayesResult res = metropolis_fit(model, data, spec);
    if (!config.chain_out.empty()) {
        std::ofstream f(config.chain_out, std::ios::binary);
        if (!f) throw IoError("cannot write '" + config.chain_out + "'");
        f << "iteration";
        for (int j = 0; j < model.p; ++j) f << ",theta" << (j + 1);
        f << ",sigma,log_post\n";
        for (Eigen::Index i = 0; i < res.chain.samples.rows(); ++i) {
            f << (config.burn_in + i);
            for (Eigen::Index j = 0; j < res.chain.samples.cols(); ++j)
                f << "," << format_double(res.chain.samples(i, j));
            f << "," << format_double(res.chain.log_post(i)) << "\n";
        }
    }

    json j;
    j["command"] = "bayes";
    j["model"] = config.model_id;
    j["iterations"] = config.iterations;
    j["burn_in"] = config.burn_in;
    j["seed"] = config.seed;
    j["mean"] = vec_to_json(res.summary.mean);
    json intervals = json::array();
    for (const auto& iv : res.summary.credible_intervals)
        intervals.push_back(json::array({iv.first, iv.second}));
    j["credible_intervals"] = intervals;
    j["acceptance_rate"] = res.summary.acceptance_rate;
    j["ess"] = vec_to_json(res.summary.ess);
    emit(config, j.dump(2) + "\n", out);
    return 0;
}

int cmd_simulate(const CliConfig& config, std::ostream& out) {
    GeneratorSpec spec;
    if (config.generator == "mm_gamma")
        spec.kind = GeneratorKind::mm_gamma;
    else if (config.generator == "mm_normal")
        spec.kind = GeneratorKind::mm_normal;
    else
        throw UsageError("--generator must be mm_gamma or mm_normal");
    spec.n = config.n;
    spec.seed = config.seed;
    spec.theta_star = to_eigen(config.theta_star);

    Dataset data = generate(spec);
    std::ostringstream csv;
    csv << "x,y\n";
    for (Eigen::Index i = 0; i < data.n(); ++i)
        csv << format_double(data.x(i, 0)) << "," << format_double(data.y(i)) << "\n";
    emit(config, csv.str(), out);
    return 0;
}

int cmd_coverage(const CliConfig& config, std::ostream& out) {
    RegionKind kind =
        config.region_kind == "wald" ? RegionKind::wald : RegionKind::likelihood;
    CoverageResult res =
        coverage_experiment(kind, config.n, config.reps, config.alpha, config.seed);
    json j;
    j["command"] = "coverage";
    j["kind"] = to_string(kind);
    j["n"] = config.n;
    j["reps"] = config.reps;
    j["nominal"] = res.nominal;
    j["empirical"] = res.empirical;
    j["replications"] = res.replications;
    j["failures"] = res.failures;
    j["mc_stderr"] = res.mc_stderr;
    emit(config, j.dump(2) + "\n", out);
    return 0;
}

int cmd_table1(const CliConfig& config, std::ostream& out) {
    Table1Report report = table1_experiment(config.seed);
    json cells = json::array();
    for (const auto& cell : report.cells) {
        json c;
        c["method"] = cell.method;
        c["init"] = json::array({cell.init(0), cell.init(1)});
        c["converged"] = cell.converged;
        c["estimate"] = json::array({cell.estimate(0), cell.estimate(1)});
        c["interval_theta1"] = json::array({cell.lo(0), cell.hi(0)});
        c["interval_theta2"] = json::array({cell.lo(1), cell.hi(1)});
        if (!cell.note.empty()) c["note"] = cell.note;
        cells.push_back(c);
    }
    json j;
    j["command"] = "table1";
    j["seed"] = config.seed;
    j["cells"] = cells;
    emit(config, j.dump(2) + "\n", out);
    return 0;
}

int cmd_figure1(const CliConfig& config, std::ostream& out) {
    Figure1Report rep = figure1_experiment(config.n, config.seed, config.alpha);
    auto grid_json = [](const std::vector<Eigen::Vector2d>& pts) {
        json arr = json::array();
        for (const auto& p : pts) arr.push_back(json::array({p(0), p(1)}));
        return arr;
    };
    json j;
    j["command"] = "figure1";
    j["n"] = config.n;
    j["seed"] = config.seed;
    j["theta_hat"] = json::array({rep.theta_hat(0), rep.theta_hat(1)});
    j["wald_area"] = rep.wald_area;
    j["sym_diff_area"] = rep.sym_diff_area;
    j["sym_diff_fraction"] = rep.sym_diff_fraction;
    j["wald_boundary"] = grid_json(rep.wald_boundary);
    j["likelihood_boundary"] = grid_json(rep.likelihood_boundary);
    emit(config, j.dump(2) + "\n", out);
    return 0;
}

} // namespace

CliConfig parse_args(const std::vector<std::string>& args) {
    CliConfig config;
    CLI::App app{"nonlinear regression toolkit"};
    app.require_subcommand(1);

    auto add_data = [&](CLI::App* cmd) {
        cmd->add_option("--data,-d", config.input_path, "input CSV (last column is y)")
            ->required();
    };
    auto add_model = [&](CLI::App* cmd) {
        cmd->add_option("--model,-m", config.model_id, "model id")->required();
    };
    auto add_init = [&](CLI::App* cmd, bool required) {
        auto* opt = cmd->add_option("--init", config.init,
                                    "comma-separated initial parameter values")
                        ->delimiter(',');
        if (required) opt->required();
    };
    auto add_alpha = [&](CLI::App* cmd) {
        cmd->add_option("--alpha", config.alpha, "significance level (default 0.05)");
    };
    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", config.seed, "PRNG seed (required)")
            ->required();
    };
    auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("--output,-o", config.output_path,
                        "write output to this file instead of stdout");
    };
    auto add_solver = [&](CLI::App* cmd) {
        cmd->add_option("--solver", config.solver, "gn, nr, or lm (default gn)");
    };

    CLI::App* fit = app.add_subcommand("fit", "least-squares fit of a catalog model");
    add_data(fit);
    add_model(fit);
    add_init(fit, true);
    add_solver(fit);
    add_alpha(fit);
    fit->add_option("--variance", config.variance,
                    "constant (default) or power_of_mean for iterated GLS");
    fit->add_option("--gamma", config.gamma, "variance power for power_of_mean");
    add_output(fit);

    CLI::App* glm = app.add_subcommand("glm", "IRLS fit of a generalized linear model");
    add_data(glm);
    glm->add_option("--family", config.family, "gaussian, binomial, poisson, gamma")
        ->required();
    glm->add_option("--link", config.link, "identity, log, logit, inverse (default canonical)");
    glm->add_flag("--add-intercept", config.add_intercept,
                  "prepend a column of ones to the design");
    add_init(glm, false);
    add_output(glm);

    CLI::App* region = app.add_subcommand("region", "confidence region for a fitted model");
    add_data(region);
    add_model(region);
    add_init(region, true);
    add_solver(region);
    add_alpha(region);
    region->add_option("--kind", config.region_kind, "wald or likelihood (default)");
    region->add_flag("--membership-only", config.membership_only,
                     "report threshold/summary JSON, no boundary grid");
    region->add_option("--exact-c", config.exact_c,
                       "exact-region multiplier c: region is S(theta) <= c*S(theta_hat)");
    region->add_option("--resolution", config.grid_resolution,
                       "contour grid resolution (default 200)");
    region->add_option("--rect", config.rect,
                       "contour rectangle t1lo,t1hi,t2lo,t2hi (default +/-4 SE)")
        ->delimiter(',');
    add_output(region);

    CLI::App* curvature = app.add_subcommand("curvature", "relative curvature summaries");
    add_data(curvature);
    add_model(curvature);
    add_init(curvature, true);
    add_solver(curvature);
    add_alpha(curvature);
    curvature->add_option("--directions", config.directions,
                          "direction count for the RMS average (default 4096)");
    add_output(curvature);

    CLI::App* smooth = app.add_subcommand("smooth", "Nadaraya-Watson kernel smoother");
    add_data(smooth);
    smooth->add_option("--bandwidth", config.bandwidth, "kernel bandwidth")->required();
    smooth->add_option("--kernel", config.kernel, "gaussian (default) or epanechnikov");
    smooth->add_option("--query", config.query_points, "comma-separated query points")
        ->delimiter(',')
        ->required();
    add_output(smooth);

    CLI::App* bayes = app.add_subcommand("bayes", "random-walk Metropolis posterior");
    add_data(bayes);
    add_model(bayes);
    add_init(bayes, true);
    add_seed(bayes);
    bayes->add_option("--iterations", config.iterations, "chain length (default 50000)");
    bayes->add_option("--burn-in", config.burn_in, "discarded prefix (default 10000)");
    bayes->add_option("--proposal-sd", config.proposal_sd,
                      "per-coordinate proposal sd (theta..., log sigma)")
        ->delimiter(',');
    bayes->add_option("--chain-out", config.chain_out, "write the chain CSV here");
    add_output(bayes);

    CLI::App* simulate = app.add_subcommand("simulate", "draw a synthetic dataset");
    simulate->add_option("--generator", config.generator, "mm_normal (default) or mm_gamma");
    simulate->add_option("--n", config.n, "observation count (default 100)");
    simulate->add_option("--theta-star", config.theta_star,
                         "true parameters (default per generator)")
        ->delimiter(',');
    add_seed(simulate);
    add_output(simulate);

    CLI::App* coverage = app.add_subcommand("coverage", "region coverage experiment");
    coverage->add_option("--kind", config.region_kind, "wald or likelihood (default)");
    coverage->add_option("--n", config.n, "observations per replication (default 100)");
    coverage->add_option("--reps", config.reps, "replications (default 500)");
    add_alpha(coverage);
    add_seed(coverage);
    add_output(coverage);

    CLI::App* table1 = app.add_subcommand(
        "table1", "good-vs-bad start comparison, NLS and Bayes, gamma-noise data");
    add_seed(table1);
    add_output(table1);

    CLI::App* figure1 = app.add_subcommand(
        "figure1", "Wald vs likelihood region boundaries and area difference");
    figure1->add_option("--n", config.n, "observation count (default 100)");
    add_alpha(figure1);
    add_seed(figure1);
    add_output(figure1);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    CLI::App* sub = app.get_subcommands().front();
    config.command = sub->get_name();
    const CLI::Option* seed_opt = sub->get_option_no_throw("--seed");
    config.has_seed = seed_opt != nullptr && seed_opt->count() > 0;

    if (!(config.alpha > 0.0 && config.alpha < 1.0))
        throw UsageError("--alpha must be in (0,1)");
    if (config.command == "fit" || config.command == "region" ||
        config.command == "curvature" || config.command == "bayes") {
        ModelSpec model = model_from_string(config.model_id);
        if (static_cast<int>(config.init.size()) != model.p)
            throw UsageError("init length " + std::to_string(config.init.size()) +
                             ", model requires " + std::to_string(model.p));
    }
    if (!config.rect.empty() && config.rect.size() != 4)
        throw UsageError("--rect needs exactly 4 values: t1lo,t1hi,t2lo,t2hi");
    if (config.command == "bayes" &&
        !(config.burn_in >= 0 && config.burn_in < config.iterations))
        throw UsageError("--burn-in must be in [0, --iterations)");
    if (config.command == "coverage" && config.reps < 100)
        throw UsageError("--reps must be at least 100");
    if (config.command == "simulate" && config.n < 1)
        throw UsageError("--n must be at least 1");
    return config;
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
    (void)err;
    if (config.command == "fit") return cmd_fit(config, out);
    if (config.command == "glm") return cmd_glm(config, out);
    if (config.command == "region") return cmd_region(config, out);
    if (config.command == "curvature") return cmd_curvature(config, out);
    if (config.command == "smooth") return cmd_smooth(config, out);
    if (config.command == "bayes") return cmd_bayes(config, out);
    if (config.command == "simulate") return cmd_simulate(config, out);
    if (config.command == "coverage") return cmd_coverage(config, out);
    if (config.command == "table1") return cmd_table1(config, out);
    if (config.command == "figure1") return cmd_figure1(config, out);
    throw UsageError("unknown command '" + config.command + "'");
}

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
    CliConfig config;
    try {
        config = parse_args(args);
    } catch (const HelpRequested& h) {
        out << h.text;
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }
    try {
        return run(config, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        json j;
        j["error"] = error_name(e);
        j["message"] = e.what();
        err << j.dump() << "\n";
        return 1;
    }
}

} // namespace nlreg
