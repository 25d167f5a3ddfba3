#ifndef NLREG_CLI_HPP
#define NLREG_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nlreg {

/// Parsed command line for the nlfit tool. Flags are validated in
/// parse_args; run() only sees well-formed configs.
struct CliConfig {
    std::string command; // fit glm region curvature smooth bayes simulate
                         // coverage table1 figure1
    std::string input_path;
    std::string model_id;
    std::vector<double> init;
    double alpha = 0.05;
    std::string format = "json"; // json or csv where a choice exists
    std::string solver = "gn";   // gn, nr, lm
    bool has_seed = false;
    std::uint64_t seed = 0;
    std::string output_path; // empty = stdout

    // glm
    std::string family;
    std::string link; // empty = canonical
    bool add_intercept = false;

    // region
    std::string region_kind = "likelihood";
    bool membership_only = false;
    double exact_c = 0.0; // exact-region multiplier, 0 = standard threshold
    int grid_resolution = 200;
    std::vector<double> rect; // t1lo,t1hi,t2lo,t2hi; empty = theta_hat +/- 4 SE

    // smooth
    std::string kernel = "gaussian";
    double bandwidth = 1.0;
    std::vector<double> query_points;

    // bayes
    int iterations = 50000;
    int burn_in = 10000;
    std::vector<double> proposal_sd;
    std::string chain_out; // optional CSV path for the raw chain

    // curvature
    int directions = 4096;

    // simulate / coverage / figure1
    std::string generator = "mm_normal";
    int n = 100;
    std::vector<double> theta_star;
    int reps = 500;

    // hetero fit
    std::string variance = "constant";
    double gamma = 0.0;
};

/// Thrown when the user asked for --help; carries the text to print.
struct HelpRequested {
    std::string text;
};

/// Throws UsageError with the offending flag and expectation, or
/// HelpRequested for --help.
CliConfig parse_args(const std::vector<std::string>& args);

/// Dispatches to the library. Returns the process exit code: 0 success,
/// 1 computation failure (machine-readable JSON error on err), 2 usage.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

/// Full entry point: parse + run + error mapping. main() is a one-liner
/// around this so tests can drive it in-process.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

} // namespace nlreg

#endif
