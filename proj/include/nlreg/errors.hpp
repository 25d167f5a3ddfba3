#ifndef NLREG_ERRORS_HPP
#define NLREG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nlreg {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A model evaluation produced NaN/inf, or was requested at an invalid
/// parameter point. Signals an invalid parameter point to solvers.
class NonFiniteEvaluation : public Error {
public:
    using Error::Error;
};

/// The (theta, x) pair is outside the model's valid domain. Subtype of
/// NonFiniteEvaluation so callers guarding against bad parameter points
/// catch both.
class DomainViolation : public NonFiniteEvaluation {
public:
    using NonFiniteEvaluation::NonFiniteEvaluation;
};

/// Requested analytic second derivatives for a model that does not
/// provide them; use finite differences instead.
class NotAvailable : public Error {
public:
    using Error::Error;
};

class NotConverged : public Error {
public:
    using Error::Error;
};

/// J^T J (or X^T W X) is numerically singular.
class SingularInformation : public Error {
public:
    using Error::Error;
};

class SingularWeightedSystem : public Error {
public:
    using Error::Error;
};

/// Likelihood-contour grid showed no sign change of S - threshold.
class GridTooCoarse : public Error {
public:
    using Error::Error;
};

/// A refreshed GLS weight is non-finite.
class DegenerateWeights : public Error {
public:
    using Error::Error;
};

/// Compact kernel with no data point within bandwidth of the query.
class EmptyNeighborhood : public Error {
public:
    using Error::Error;
};

/// Metropolis chain accepted no move after burn-in.
class ZeroAcceptance : public Error {
public:
    using Error::Error;
};

/// More than the allowed fraction of replications failed to fit.
class TooManyFailures : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error(msg), line(line), column(column) {}
    int line;
    int column;
};

/// Bad command-line usage; maps to exit code 2.
class UsageError : public Error {
public:
    using Error::Error;
};

} // namespace nlreg

#endif
