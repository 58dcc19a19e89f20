#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace tailkit {

/// Parameter outside the admissible range of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The dependence constant D vanishes, so the leading-order term carries no information.
class DegenerateLeadingCoefficient : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A closed form that needs power-law modulation received a custom evaluator.
class ModulationNotPolynomial : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A dependence variant lacks the evaluator an operation needs.
class MissingEvaluator : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct QuadratureDiagnostics {
    int panels = 0;
    double estimated_rel_error = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double log_shift = 0.0;
};

/// Adaptive quadrature could not reach the requested tolerance.
class QuadratureFailure : public std::runtime_error {
public:
    QuadratureFailure(const std::string& what, QuadratureDiagnostics diag)
        : std::runtime_error(what + " (panels=" + std::to_string(diag.panels) +
                             ", rel_err=" + format_error(diag.estimated_rel_error) + ")"),
          diagnostics_(diag) {}

    const QuadratureDiagnostics& diagnostics() const noexcept { return diagnostics_; }

private:
    static std::string format_error(double e) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", e);
        return buf;
    }

    QuadratureDiagnostics diagnostics_;
};

namespace detail {

inline void require(bool ok, const std::string& message) {
    if (!ok) {
        throw DomainError(message);
    }
}

}  // namespace detail
}  // namespace tailkit
