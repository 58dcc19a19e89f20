#pragma once

// Core domain types: Weibull-type tails, dependence specifications, the
// product saddle constants and the log-space carrier for asymptotic forms.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace tailkit {

using LogModulation = std::function<double(double)>;

/// Survival tail g(x) * exp(-L x^p) with g regularly varying of index alpha.
///
/// The default modulation is the power law g(u) = C u^alpha. A custom
/// modulation is supplied as u -> log g(u) together with its declared index.
class WeibullTypeTail {
public:
    WeibullTypeTail(double C, double alpha, double L, double p) : C_(C), alpha_(alpha), L_(L), p_(p) {
        detail::require(C > 0.0 && std::isfinite(C), "WeibullTypeTail: C must be positive");
        detail::require(std::isfinite(alpha), "WeibullTypeTail: alpha must be finite");
        detail::require(L > 0.0 && std::isfinite(L), "WeibullTypeTail: L must be positive");
        detail::require(p > 0.0 && std::isfinite(p), "WeibullTypeTail: p must be positive");
    }

    WeibullTypeTail(LogModulation log_g, double alpha, double L, double p) : WeibullTypeTail(1.0, alpha, L, p) {
        detail::require(static_cast<bool>(log_g), "WeibullTypeTail: empty modulation evaluator");
        log_g_ = std::move(log_g);
    }

    double C() const noexcept { return C_; }
    double alpha() const noexcept { return alpha_; }
    double L() const noexcept { return L_; }
    double p() const noexcept { return p_; }
    bool is_power_law() const noexcept { return !log_g_; }

    double log_g(double u) const {
        if (log_g_) return log_g_(u);
        return std::log(C_) + alpha_ * std::log(u);
    }

    /// log of g(x) exp(-L x^p); the asymptotic tail, not a normalized law.
    double log_survival(double x) const { return log_g(x) - L_ * std::pow(x, p_); }

    /// Asymptotic tail clipped to a probability, usable as a proxy marginal.
    double cdf_proxy(double x) const {
        if (x <= 0.0) return 0.0;
        const double s = log_survival(x);
        return s >= 0.0 ? 0.0 : -std::expm1(s);
    }

private:
    double C_;
    double alpha_;
    double L_;
    double p_;
    LogModulation log_g_;
};

inline WeibullTypeTail make_weibull_tail(double C, double alpha, double L, double p) {
    return WeibullTypeTail(C, alpha, L, p);
}

/// Numerical admissibility report for a modulation function on a geometric grid.
struct ModulationCheck {
    std::vector<double> grid;
    std::vector<double> regular_variation_gap;  // |log g(2u) - log g(u) - alpha ln 2|
    bool regularly_varying = false;
    bool ultimately_monotone = false;
};

/// Checks |log g(2u) - log g(u) - alpha ln 2| -> 0 and monotonicity of g on
/// u = start * 2^k, k = 0..points-1. Only falsification is meaningful.
inline ModulationCheck check_modulation(const WeibullTypeTail& tail, double start = 10.0, int points = 30,
                                        double tolerance = 1e-3) {
    detail::require(start > 0.0 && points >= 3, "check_modulation: bad grid");
    ModulationCheck out;
    for (int k = 0; k < points; ++k) {
        const double u = start * std::ldexp(1.0, k);
        out.grid.push_back(u);
        out.regular_variation_gap.push_back(
            std::abs(tail.log_g(2.0 * u) - tail.log_g(u) - tail.alpha() * std::log(2.0)));
    }
    out.regularly_varying = out.regular_variation_gap.back() < tolerance;

    // monotone on the upper half of the grid
    const std::size_t from = out.grid.size() / 2;
    int sign = 0;
    bool monotone = true;
    for (std::size_t k = from; k + 1 < out.grid.size(); ++k) {
        const double d = tail.log_g(out.grid[k + 1]) - tail.log_g(out.grid[k]);
        const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
        if (s != 0) {
            if (sign != 0 && s != sign) monotone = false;
            sign = s;
        }
    }
    out.ultimately_monotone = monotone;
    return out;
}

/// Saddle constants of the product X1 X2.
struct ProductConstants {
    double A;
    double B;
    double rate_exponent;
    double p1;
    double p2;

    /// Saddle location A x^{p1/(p1+p2)}.
    double z(double x) const { return A * w(x); }
    /// Window base x^{p1/(p1+p2)}.
    double w(double x) const { return std::pow(x, p1 / (p1 + p2)); }
};

inline ProductConstants product_constants(const WeibullTypeTail& t1, const WeibullTypeTail& t2) {
    const double p1 = t1.p(), p2 = t2.p(), L1 = t1.L(), L2 = t2.L();
    const double A = std::pow((p1 * L1) / (p2 * L2), 1.0 / (p1 + p2));
    const double B = L1 * std::pow(A, -p1) + L2 * std::pow(A, p2);
    return {A, B, p1 * p2 / (p1 + p2), p1, p2};
}

// ---------------------------------------------------------------------------
// Dependence

using CopulaFactor = std::function<double(double x, double y)>;

struct Independent {};

struct Fgm {
    double tau;
};

struct Envelope {
    double K1 = 0.0;
    double K2 = 1.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
};

struct Window {
    double a1;
    double a2;
};

struct CustomDependence {
    double D = 1.0;
    double q1 = 0.0;
    double q2 = 0.0;
    /// c(x, y) with P(X1 > x/y | X2 = y) = P(X1 > x/y) c(x, y).
    CopulaFactor c;
    Envelope envelope;
    std::optional<Window> window;
    /// Optional exact conditional law for sampling: (uniform v, y) -> X1 given X2 = y.
    std::function<double(double v, double y)> conditional_quantile;
};

struct CanonicalDependence {
    double D;
    double q1;
    double q2;
};

class DependenceSpec {
public:
    using Variant = std::variant<Independent, Fgm, CustomDependence>;

    DependenceSpec() : v_(Independent{}) {}

    static DependenceSpec independent() { return DependenceSpec(); }

    static DependenceSpec fgm(double tau) {
        detail::require(tau >= -1.0 && tau <= 1.0, "DependenceSpec: FGM tau must lie in [-1, 1]");
        DependenceSpec d;
        d.v_ = Fgm{tau};
        return d;
    }

    static DependenceSpec custom(CustomDependence c) {
        detail::require(c.D > 0.0, "DependenceSpec: custom D must be positive");
        detail::require(c.envelope.K2 > 0.0 && c.envelope.K1 >= 0.0,
                        "DependenceSpec: envelope needs K1 >= 0 and K2 > 0");
        if (c.window) {
            detail::require(c.window->a1 > 0.0 && c.window->a1 < c.window->a2,
                            "DependenceSpec: window needs 0 < a1 < a2");
        }
        DependenceSpec d;
        d.v_ = std::move(c);
        return d;
    }

    const Variant& variant() const noexcept { return v_; }
    bool is_independent() const noexcept { return std::holds_alternative<Independent>(v_); }

    /// (D, q1, q2) of the limit c(x, y) ~ D x^{q1} y^{q2 - q1}.
    CanonicalDependence canonical() const {
        if (const auto* f = std::get_if<Fgm>(&v_)) return {1.0 - f->tau, 0.0, 0.0};
        if (const auto* c = std::get_if<CustomDependence>(&v_)) return {c->D, c->q1, c->q2};
        return {1.0, 0.0, 0.0};
    }

private:
    Variant v_;
};

// ---------------------------------------------------------------------------
// Asymptotic forms

struct LogEvaluation {
    double log_prob;
    bool pre_asymptotic;
};

/// log S(x) = log_prefactor + kappa ln x + modulation(x) - rate x^exponent.
///
/// The optional modulation carries non-power-law factors such as
/// log g1(x/z_x) + log g2(z_x); it may also be empty.
class AsymptoticForm {
public:
    AsymptoticForm(double log_prefactor, double kappa, double rate, double exponent,
                   LogModulation modulation = {}, double validity_threshold = 5.0)
        : log_prefactor_(log_prefactor),
          kappa_(kappa),
          rate_(rate),
          exponent_(exponent),
          modulation_(std::move(modulation)),
          validity_threshold_(validity_threshold) {
        detail::require(std::isfinite(log_prefactor), "AsymptoticForm: log prefactor must be finite");
        detail::require(std::isfinite(kappa), "AsymptoticForm: polynomial exponent must be finite");
        detail::require(rate > 0.0 && std::isfinite(rate), "AsymptoticForm: rate must be positive");
        detail::require(exponent > 0.0 && std::isfinite(exponent), "AsymptoticForm: exponent must be positive");
        detail::require(validity_threshold > 0.0, "AsymptoticForm: validity threshold must be positive");
    }

    double log_prefactor() const noexcept { return log_prefactor_; }
    double kappa() const noexcept { return kappa_; }
    double rate() const noexcept { return rate_; }
    double exponent() const noexcept { return exponent_; }
    double validity_threshold() const noexcept { return validity_threshold_; }
    bool has_modulation() const noexcept { return static_cast<bool>(modulation_); }
    const LogModulation& modulation() const noexcept { return modulation_; }

    double log_value(double x) const {
        detail::require(x > 0.0, "AsymptoticForm: x must be positive");
        double v = log_prefactor_ + kappa_ * std::log(x) - rate_ * std::pow(x, exponent_);
        if (modulation_) v += modulation_(x);
        return v;
    }

    /// d/dx of log_value, modulation differentiated numerically.
    double log_derivative(double x) const {
        double d = kappa_ / x - rate_ * exponent_ * std::pow(x, exponent_ - 1.0);
        if (modulation_) {
            const double h = 1e-5 * x;
            d += (modulation_(x + h) - modulation_(x - h)) / (2.0 * h);
        }
        return d;
    }

    AsymptoticForm with_shift(double log_factor, double kappa_increment) const {
        return AsymptoticForm(log_prefactor_ + log_factor, kappa_ + kappa_increment, rate_, exponent_, modulation_,
                              validity_threshold_);
    }

    AsymptoticForm with_threshold(double threshold) const {
        return AsymptoticForm(log_prefactor_, kappa_, rate_, exponent_, modulation_, threshold);
    }

private:
    double log_prefactor_;
    double kappa_;
    double rate_;
    double exponent_;
    LogModulation modulation_;
    double validity_threshold_;
};

/// Log of the asymptotic right-hand side, flagged when rate x^r is below the validity threshold.
inline LogEvaluation eval_log_survival(const AsymptoticForm& form, double x) {
    if (!(x > 0.0)) {
        throw DomainError("eval_log_survival: x must be positive");
    }
    const bool pre = form.rate() * std::pow(x, form.exponent()) < form.validity_threshold();
    return {form.log_value(x), pre};
}

/// Point beyond which a modulation-free form is strictly decreasing.
inline double decreasing_onset(const AsymptoticForm& form) {
    if (form.kappa() <= 0.0) return 0.0;
    return std::pow(form.kappa() / (form.rate() * form.exponent()), 1.0 / form.exponent());
}

/// Reinterprets a modulation-free form as the Weibull-type tail it describes.
inline WeibullTypeTail as_weibull_tail(const AsymptoticForm& form) {
    if (form.has_modulation()) {
        throw ModulationNotPolynomial("as_weibull_tail: form carries a modulation evaluator");
    }
    return WeibullTypeTail(std::exp(form.log_prefactor()), form.kappa(), form.rate(), form.exponent());
}

}  // namespace tailkit
