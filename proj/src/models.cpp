#include "nlreg/models.hpp"

#include <cmath>
#include <cstdio>

namespace nlreg {

namespace {

// Conservative pole guard: reject denominators this close to zero so line
// searches cannot step through a singularity.
constexpr double kPoleGuard = 1e-12;

bool finite_all(const Eigen::VectorXd& v) { return v.allFinite(); }

std::string describe(const char* what) { return std::string(what); }

ModelSpec michaelis_menten_spec() {
    ModelSpec m;
    m.name = "michaelis_menten";
    m.p = 2;
    m.has_analytic_hessian = true;
    m.in_domain = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, std::string* why) {
        if (std::abs(t(1) + x(0)) <= kPoleGuard) {
            if (why) *why = describe("theta2 + x is zero (pole)");
            return false;
        }
        return true;
    };
    m.value = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x) {
        return t(0) * x(0) / (t(1) + x(0));
    };
    m.gradient = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        double d = t(1) + x(0);
        g(0) = x(0) / d;
        g(1) = -t(0) * x(0) / (d * d);
    };
    m.hessian = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::MatrixXd& h) {
        double d = t(1) + x(0);
        h(0, 0) = 0.0;
        h(0, 1) = h(1, 0) = -x(0) / (d * d);
        h(1, 1) = 2.0 * t(0) * x(0) / (d * d * d);
    };
    return m;
}

// Same mean curve as michaelis_menten under theta = (1/b1, b2/b1); kept as
// its own id because curvature diagnostics distinguish parameterizations.
ModelSpec michaelis_menten_reciprocal_spec() {
    ModelSpec m;
    m.name = "michaelis_menten_reciprocal";
    m.p = 2;
    m.has_analytic_hessian = true;
    m.in_domain = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, std::string* why) {
        if (std::abs(t(0) * x(0) + t(1)) <= kPoleGuard) {
            if (why) *why = describe("b1*x + b2 is zero (pole)");
            return false;
        }
        return true;
    };
    m.value = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x) {
        return x(0) / (t(0) * x(0) + t(1));
    };
    m.gradient = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        double d = t(0) * x(0) + t(1);
        g(0) = -x(0) * x(0) / (d * d);
        g(1) = -x(0) / (d * d);
    };
    m.hessian = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::MatrixXd& h) {
        double d = t(0) * x(0) + t(1);
        double d3 = d * d * d;
        h(0, 0) = 2.0 * x(0) * x(0) * x(0) / d3;
        h(0, 1) = h(1, 0) = 2.0 * x(0) * x(0) / d3;
        h(1, 1) = 2.0 * x(0) / d3;
    };
    return m;
}

ModelSpec beverton_holt_spec() {
    ModelSpec m;
    m.name = "beverton_holt";
    m.p = 2; // (alpha, beta)
    m.has_analytic_hessian = true;
    m.in_domain = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, std::string* why) {
        if (std::abs(t(1)) <= kPoleGuard) {
            if (why) *why = describe("beta is zero");
            return false;
        }
        if (std::abs(1.0 + x(0) / t(1)) <= kPoleGuard) {
            if (why) *why = describe("1 + x/beta is zero (pole)");
            return false;
        }
        return true;
    };
    m.value = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x) {
        return t(0) * x(0) / (1.0 + x(0) / t(1));
    };
    m.gradient = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        double d = 1.0 + x(0) / t(1);
        g(0) = x(0) / d;
        g(1) = t(0) * x(0) * x(0) / (t(1) * t(1) * d * d);
    };
    m.hessian = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::MatrixXd& h) {
        double b = t(1), d = 1.0 + x(0) / b;
        h(0, 0) = 0.0;
        h(0, 1) = h(1, 0) = x(0) * x(0) / (b * b * d * d);
        h(1, 1) = -2.0 * t(0) * x(0) * x(0) / (b * b * b * d * d * d);
    };
    return m;
}

ModelSpec exponential_spec() {
    ModelSpec m;
    m.name = "exponential";
    m.p = 2;
    m.has_analytic_hessian = true;
    m.in_domain = [](const Eigen::VectorXd&, const Eigen::VectorXd&, std::string*) {
        return true; // overflow surfaces as NonFiniteEvaluation
    };
    m.value = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x) {
        return t(0) * std::exp(t(1) * x(0));
    };
    m.gradient = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        double e = std::exp(t(1) * x(0));
        g(0) = e;
        g(1) = t(0) * x(0) * e;
    };
    m.hessian = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::MatrixXd& h) {
        double e = std::exp(t(1) * x(0));
        h(0, 0) = 0.0;
        h(0, 1) = h(1, 0) = x(0) * e;
        h(1, 1) = t(0) * x(0) * x(0) * e;
    };
    return m;
}

ModelSpec negative_exponential_spec() {
    ModelSpec m;
    m.name = "negative_exponential";
    m.p = 2;
    m.has_analytic_hessian = true;
    m.in_domain = [](const Eigen::VectorXd&, const Eigen::VectorXd&, std::string*) {
        return true;
    };
    m.value = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x) {
        return t(0) * (1.0 - std::exp(-t(1) * x(0)));
    };
    m.gradient = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        double e = std::exp(-t(1) * x(0));
        g(0) = 1.0 - e;
        g(1) = t(0) * x(0) * e;
    };
    m.hessian = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::MatrixXd& h) {
        double e = std::exp(-t(1) * x(0));
        h(0, 0) = 0.0;
        h(0, 1) = h(1, 0) = x(0) * e;
        h(1, 1) = -t(0) * x(0) * x(0) * e;
    };
    return m;
}

ModelSpec asymptotic_spec() {
    ModelSpec m;
    m.name = "asymptotic";
    m.p = 3; // f = t1 - (t1 - t2) exp(-t3 x)
    m.has_analytic_hessian = true;
    m.in_domain = [](const Eigen::VectorXd&, const Eigen::VectorXd&, std::string*) {
        return true;
    };
    m.value = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x) {
        return t(0) - (t(0) - t(1)) * std::exp(-t(2) * x(0));
    };
    m.gradient = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        double e = std::exp(-t(2) * x(0));
        g(0) = 1.0 - e;
        g(1) = e;
        g(2) = (t(0) - t(1)) * x(0) * e;
    };
    m.hessian = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::MatrixXd& h) {
        double e = std::exp(-t(2) * x(0));
        h.setZero();
        h(0, 2) = h(2, 0) = x(0) * e;
        h(1, 2) = h(2, 1) = -x(0) * e;
        h(2, 2) = -(t(0) - t(1)) * x(0) * x(0) * e;
    };
    return m;
}

ModelSpec power_spec() {
    ModelSpec m;
    m.name = "power";
    m.p = 2; // f = t1 x^t2, x > 0
    m.has_analytic_hessian = true;
    m.in_domain = [](const Eigen::VectorXd&, const Eigen::VectorXd& x, std::string* why) {
        if (x(0) <= 0.0) {
            if (why) *why = describe("power model requires x > 0");
            return false;
        }
        return true;
    };
    m.value = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x) {
        return t(0) * std::pow(x(0), t(1));
    };
    m.gradient = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        double xp = std::pow(x(0), t(1)), lx = std::log(x(0));
        g(0) = xp;
        g(1) = t(0) * xp * lx;
    };
    m.hessian = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::MatrixXd& h) {
        double xp = std::pow(x(0), t(1)), lx = std::log(x(0));
        h(0, 0) = 0.0;
        h(0, 1) = h(1, 0) = xp * lx;
        h(1, 1) = t(0) * xp * lx * lx;
    };
    return m;
}

ModelSpec logarithmic_spec() {
    ModelSpec m;
    m.name = "logarithmic";
    m.p = 2; // f = t1 + t2 log(x), linear in theta
    m.has_analytic_hessian = true;
    m.in_domain = [](const Eigen::VectorXd&, const Eigen::VectorXd& x, std::string* why) {
        if (x(0) <= 0.0) {
            if (why) *why = describe("logarithmic model requires x > 0");
            return false;
        }
        return true;
    };
    m.value = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x) {
        return t(0) + t(1) * std::log(x(0));
    };
    m.gradient = [](const Eigen::VectorXd&, const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        g(0) = 1.0;
        g(1) = std::log(x(0));
    };
    m.hessian = [](const Eigen::VectorXd&, const Eigen::VectorXd&, Eigen::MatrixXd& h) {
        h.setZero();
    };
    return m;
}

ModelSpec logistic_spec() {
    ModelSpec m;
    m.name = "logistic";
    m.p = 4; // f = t1 + (t2 - t1) / (1 + exp(t3 (x - t4)))
    m.has_analytic_hessian = false;
    m.in_domain = [](const Eigen::VectorXd&, const Eigen::VectorXd&, std::string*) {
        return true;
    };
    m.value = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x) {
        double d = 1.0 + std::exp(t(2) * (x(0) - t(3)));
        return t(0) + (t(1) - t(0)) / d;
    };
    m.gradient = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        double u = t(2) * (x(0) - t(3));
        double e = std::exp(u), d = 1.0 + e;
        g(0) = 1.0 - 1.0 / d;
        g(1) = 1.0 / d;
        g(2) = -(t(1) - t(0)) * e * (x(0) - t(3)) / (d * d);
        g(3) = (t(1) - t(0)) * t(2) * e / (d * d);
    };
    return m;
}

ModelSpec gompertz_spec() {
    ModelSpec m;
    m.name = "gompertz";
    m.p = 4; // f = t1 + (t2 - t1) exp(-exp(t3 (x - t4)))
    m.has_analytic_hessian = false;
    m.in_domain = [](const Eigen::VectorXd&, const Eigen::VectorXd&, std::string*) {
        return true;
    };
    m.value = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x) {
        return t(0) + (t(1) - t(0)) * std::exp(-std::exp(t(2) * (x(0) - t(3))));
    };
    m.gradient = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        double v = std::exp(t(2) * (x(0) - t(3)));
        double w = std::exp(-v);
        g(0) = 1.0 - w;
        g(1) = w;
        g(2) = -(t(1) - t(0)) * (x(0) - t(3)) * v * w;
        g(3) = (t(1) - t(0)) * t(2) * v * w;
    };
    return m;
}

ModelSpec log_logistic_spec() {
    ModelSpec m;
    m.name = "log_logistic";
    m.p = 4; // f = t1 + (t2 - t1) / (1 + exp(t3 (log x - log t4)))
    m.has_analytic_hessian = false;
    m.in_domain = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, std::string* why) {
        if (x(0) <= 0.0) {
            if (why) *why = describe("log_logistic model requires x > 0");
            return false;
        }
        if (t(3) <= 0.0) {
            if (why) *why = describe("log_logistic model requires theta4 > 0");
            return false;
        }
        return true;
    };
    m.value = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x) {
        double d = 1.0 + std::exp(t(2) * (std::log(x(0)) - std::log(t(3))));
        return t(0) + (t(1) - t(0)) / d;
    };
    m.gradient = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        double lu = std::log(x(0)) - std::log(t(3));
        double e = std::exp(t(2) * lu), d = 1.0 + e;
        g(0) = 1.0 - 1.0 / d;
        g(1) = 1.0 / d;
        g(2) = -(t(1) - t(0)) * e * lu / (d * d);
        g(3) = (t(1) - t(0)) * t(2) * e / (t(3) * d * d);
    };
    return m;
}

ModelSpec weibull1_spec() {
    ModelSpec m;
    m.name = "weibull1";
    m.p = 4; // f = t1 + (t4 - t1) (1 - exp(-exp(t2 (log x - log t3))))
    m.has_analytic_hessian = false;
    m.in_domain = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, std::string* why) {
        if (x(0) <= 0.0) {
            if (why) *why = describe("weibull1 model requires x > 0");
            return false;
        }
        if (t(2) <= 0.0) {
            if (why) *why = describe("weibull1 model requires theta3 > 0");
            return false;
        }
        return true;
    };
    m.value = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x) {
        double v = std::exp(t(1) * (std::log(x(0)) - std::log(t(2))));
        return t(0) + (t(3) - t(0)) * (1.0 - std::exp(-v));
    };
    m.gradient = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        double lu = std::log(x(0)) - std::log(t(2));
        double v = std::exp(t(1) * lu);
        double w = std::exp(-v);
        g(0) = w;
        g(1) = (t(3) - t(0)) * v * w * lu;
        g(2) = -(t(3) - t(0)) * v * w * t(1) / t(2);
        g(3) = 1.0 - w;
    };
    return m;
}

ModelSpec weibull2_spec() {
    ModelSpec m;
    m.name = "weibull2";
    m.p = 4; // f = t1 + (t4 - t1) exp(-exp(t2 (log x - log t3)))
    m.has_analytic_hessian = false;
    m.in_domain = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, std::string* why) {
        if (x(0) <= 0.0) {
            if (why) *why = describe("weibull2 model requires x > 0");
            return false;
        }
        if (t(2) <= 0.0) {
            if (why) *why = describe("weibull2 model requires theta3 > 0");
            return false;
        }
        return true;
    };
    m.value = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x) {
        double v = std::exp(t(1) * (std::log(x(0)) - std::log(t(2))));
        return t(0) + (t(3) - t(0)) * std::exp(-v);
    };
    m.gradient = [](const Eigen::VectorXd& t, const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        double lu = std::log(x(0)) - std::log(t(2));
        double v = std::exp(t(1) * lu);
        double w = std::exp(-v);
        g(0) = 1.0 - w;
        g(1) = -(t(3) - t(0)) * v * w * lu;
        g(2) = (t(3) - t(0)) * v * w * t(1) / t(2);
        g(3) = w;
    };
    return m;
}

ModelSpec polynomial_spec(int degree) {
    ModelSpec m;
    m.name = degree == 1 ? "linear" : "polynomial" + std::to_string(degree);
    m.p = degree + 1;
    m.has_analytic_hessian = true;
    m.in_domain = [](const Eigen::VectorXd&, const Eigen::VectorXd&, std::string*) {
        return true;
    };
    m.value = [degree](const Eigen::VectorXd& t, const Eigen::VectorXd& x) {
        double acc = t(degree); // Horner
        for (int j = degree - 1; j >= 0; --j) acc = acc * x(0) + t(j);
        return acc;
    };
    m.gradient = [degree](const Eigen::VectorXd&, const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        double pw = 1.0;
        for (int j = 0; j <= degree; ++j) {
            g(j) = pw;
            pw *= x(0);
        }
    };
    m.hessian = [](const Eigen::VectorXd&, const Eigen::VectorXd&, Eigen::MatrixXd& h) {
        h.setZero();
    };
    return m;
}

} // namespace

double evaluate(const ModelSpec& model, const Eigen::VectorXd& theta,
                const Eigen::VectorXd& xrow) {
    if (theta.size() != model.p)
        throw Error(model.name + ": theta has length " + std::to_string(theta.size()) +
                    ", expected " + std::to_string(model.p));
    std::string why;
    if (!model.in_domain(theta, xrow, &why))
        throw DomainViolation(model.name + ": " + why);
    double v = model.value(theta, xrow);
    if (!std::isfinite(v))
        throw NonFiniteEvaluation(model.name + ": non-finite value at x=" +
                                  std::to_string(xrow(0)));
    return v;
}

Eigen::VectorXd analytic_gradient(const ModelSpec& model, const Eigen::VectorXd& theta,
                                  const Eigen::VectorXd& xrow) {
    if (theta.size() != model.p)
        throw Error(model.name + ": theta has length " + std::to_string(theta.size()) +
                    ", expected " + std::to_string(model.p));
    std::string why;
    if (!model.in_domain(theta, xrow, &why))
        throw DomainViolation(model.name + ": " + why);
    Eigen::VectorXd g(model.p);
    model.gradient(theta, xrow, g);
    if (!finite_all(g))
        throw NonFiniteEvaluation(model.name + ": non-finite gradient");
    return g;
}

SecondDerivArray analytic_second(const ModelSpec& model, const Eigen::VectorXd& theta,
                                 const Dataset& data) {
    if (!model.has_analytic_hessian)
        throw NotAvailable(model.name + ": no closed-form second derivatives");
    SecondDerivArray out(static_cast<std::size_t>(data.n()),
                         Eigen::MatrixXd(model.p, model.p));
    std::string why;
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        Eigen::VectorXd xrow = data.x.row(i);
        if (!model.in_domain(theta, xrow, &why))
            throw DomainViolation(model.name + ": " + why);
        auto& h = out[static_cast<std::size_t>(i)];
        model.hessian(theta, xrow, h);
        if (!h.allFinite())
            throw NonFiniteEvaluation(model.name + ": non-finite second derivatives");
    }
    return out;
}

ModelSpec model_from_string(const std::string& id) {
    if (id == "michaelis_menten" || id == "rectangular_hyperbola")
        return michaelis_menten_spec();
    if (id == "michaelis_menten_reciprocal") return michaelis_menten_reciprocal_spec();
    if (id == "beverton_holt") return beverton_holt_spec();
    if (id == "exponential") return exponential_spec();
    if (id == "negative_exponential") return negative_exponential_spec();
    if (id == "asymptotic") return asymptotic_spec();
    if (id == "power") return power_spec();
    if (id == "logarithmic") return logarithmic_spec();
    if (id == "logistic") return logistic_spec();
    if (id == "gompertz") return gompertz_spec();
    if (id == "log_logistic") return log_logistic_spec();
    if (id == "weibull1") return weibull1_spec();
    if (id == "weibull2") return weibull2_spec();
    if (id == "linear") return polynomial_spec(1);
    if (id.rfind("polynomial", 0) == 0) {
        int degree = 0;
        if (std::sscanf(id.c_str(), "polynomial%d", &degree) == 1 && degree >= 1 &&
            degree <= 12 && id == "polynomial" + std::to_string(degree))
            return polynomial_spec(degree);
    }
    throw UsageError("unknown model id '" + id + "'");
}

std::vector<std::string> catalog_ids() {
    return {
        "michaelis_menten", "michaelis_menten_reciprocal", "beverton_holt",
        "exponential", "negative_exponential", "asymptotic", "power",
        "logarithmic", "logistic", "gompertz", "log_logistic", "weibull1",
        "weibull2", "linear", "polynomial2", "polynomial3",
    };
}

} // namespace nlreg
