#ifndef NLREG_MODELS_HPP
#define NLREG_MODELS_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "nlreg/core.hpp"
#include "nlreg/errors.hpp"

namespace nlreg {

/// A scalar-response regression function f(x, theta) with analytic first
/// derivatives and, where worthwhile, analytic second derivatives.
///
/// The callables take one predictor row (length k) and the full parameter
/// vector. gradient/hessian fill a caller-provided dense buffer to avoid
/// per-observation allocation in solver loops.
struct ModelSpec {
    std::string name;
    int p = 0;
    bool has_analytic_hessian = false;

    /// Returns false (and a reason, if `why` is non-null) when x/theta fall
    /// outside the model's domain, e.g. x <= 0 for log-x models.
    std::function<bool(const Eigen::VectorXd& theta, const Eigen::VectorXd& xrow,
                       std::string* why)>
        in_domain;

    std::function<double(const Eigen::VectorXd& theta, const Eigen::VectorXd& xrow)>
        value;

    std::function<void(const Eigen::VectorXd& theta, const Eigen::VectorXd& xrow,
                       Eigen::VectorXd& grad)>
        gradient;

    /// Only callable when has_analytic_hessian; fills a p x p matrix.
    std::function<void(const Eigen::VectorXd& theta, const Eigen::VectorXd& xrow,
                       Eigen::MatrixXd& hess)>
        hessian;
};

/// f(x, theta) with domain and finiteness checks. Throws DomainViolation when
/// in_domain fails, NonFiniteEvaluation when the value is NaN/inf.
double evaluate(const ModelSpec& model, const Eigen::VectorXd& theta,
                const Eigen::VectorXd& xrow);

/// Analytic gradient with the same checks applied to every component.
Eigen::VectorXd analytic_gradient(const ModelSpec& model, const Eigen::VectorXd& theta,
                                  const Eigen::VectorXd& xrow);

/// Per-observation analytic second-derivative matrices. Throws NotAvailable
/// when the model has no closed-form Hessian; callers that only need an
/// approximation should fall back to finite_diff_second_array.
SecondDerivArray analytic_second(const ModelSpec& model, const Eigen::VectorXd& theta,
                                 const Dataset& data);

/// Catalog lookup by stable id. Recognised ids:
///   michaelis_menten, michaelis_menten_reciprocal, beverton_holt,
///   exponential, negative_exponential, asymptotic, power, logarithmic,
///   logistic, gompertz, log_logistic, weibull1, weibull2,
///   linear, polynomial<d> (e.g. polynomial3).
/// "rectangular_hyperbola" is accepted as an alias for michaelis_menten.
/// Throws UsageError on an unknown id.
ModelSpec model_from_string(const std::string& id);

/// All canonical catalog ids, in a stable order (excludes aliases, includes
/// polynomial2 and polynomial3 as representatives of the family).
std::vector<std::string> catalog_ids();

} // namespace nlreg

#endif
