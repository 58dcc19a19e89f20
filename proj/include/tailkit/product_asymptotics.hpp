#pragma once

// Closed-form tail asymptotics for products of Weibull-type risks.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "tail_model.hpp"

namespace tailkit {

namespace detail {

inline void require_power_law(const WeibullTypeTail& t, const char* op) {
    if (!t.is_power_law()) {
        throw ModulationNotPolynomial(std::string(op) + ": tail has a custom modulation evaluator");
    }
}

}  // namespace detail

/// Tail of X1 X2 under the dependence model c(x, y) ~ D x^{q1} y^{q2-q1}.
///
/// The modulation factor g1(x/z_x) g2(z_x) is kept as an evaluator, so any
/// regularly varying g is accepted.
inline AsymptoticForm product_tail_dependent(const WeibullTypeTail& t1, const WeibullTypeTail& t2,
                                             const DependenceSpec& dep) {
    const auto [D, q1, q2] = dep.canonical();
    if (!(D > 0.0)) {
        throw DegenerateLeadingCoefficient("product_tail_dependent: D = 0, leading term vanishes");
    }
    const auto k = product_constants(t1, t2);
    const double p1 = t1.p(), p2 = t2.p(), L2 = t2.L();
    const double log_pref = std::log(D) + 0.5 * std::log(2.0 * std::numbers::pi * p2 * L2 / (p1 + p2)) +
                            (p2 / 2.0 + q2 - q1) * std::log(k.A);
    const double kappa = (2.0 * p2 * q1 + 2.0 * p1 * q2 + p1 * p2) / (2.0 * (p1 + p2));
    auto modulation = [t1, t2, k](double x) {
        const double z = k.z(x);
        return t1.log_g(x / z) + t2.log_g(z);
    };
    return AsymptoticForm(log_pref, kappa, k.B, k.rate_exponent, modulation);
}

/// Independent product of power-law tails, collapsed to a pure power form.
inline AsymptoticForm product_tail_polynomial(const WeibullTypeTail& t1, const WeibullTypeTail& t2) {
    detail::require_power_law(t1, "product_tail_polynomial");
    detail::require_power_law(t2, "product_tail_polynomial");
    const auto k = product_constants(t1, t2);
    const double p1 = t1.p(), p2 = t2.p(), L2 = t2.L();
    const double a1 = t1.alpha(), a2 = t2.alpha();
    const double log_pref = 0.5 * std::log(2.0 * std::numbers::pi * p2 * L2 / (p1 + p2)) + std::log(t1.C()) +
                            std::log(t2.C()) + (p2 / 2.0 + a2 - a1) * std::log(k.A);
    const double kappa = (2.0 * p2 * a1 + 2.0 * p1 * a2 + p1 * p2) / (2.0 * (p1 + p2));
    return AsymptoticForm(log_pref, kappa, k.B, k.rate_exponent);
}

inline constexpr int kMaxFold = 64;

/// Tail of the product of m i.i.d. copies of a power-law Weibull-type risk.
inline AsymptoticForm m_fold_product_tail(const WeibullTypeTail& t, int m) {
    if (m < 1 || m > kMaxFold) {
        throw DomainError("m_fold_product_tail: m must lie in [1, 64]");
    }
    detail::require_power_law(t, "m_fold_product_tail");
    const double md = m;
    const double log_pref =
        -0.5 * std::log(md) + 0.5 * (md - 1.0) * std::log(2.0 * std::numbers::pi * t.L()) + md * std::log(t.C());
    const double kappa = (2.0 * md * t.alpha() + (md - 1.0) * t.p()) / (2.0 * md);
    return AsymptoticForm(log_pref, kappa, md * t.L(), t.p() / md);
}

/// Density of X1 X2 (independent, power-law tails): L1 p1 A^{-p1} x^{r-1} times the survival form.
inline AsymptoticForm product_pdf_asymptotic(const WeibullTypeTail& t1, const WeibullTypeTail& t2) {
    const auto survival = product_tail_polynomial(t1, t2);
    const auto k = product_constants(t1, t2);
    const double log_factor = std::log(t1.L() * t1.p()) - t1.p() * std::log(k.A);
    return survival.with_shift(log_factor, k.rate_exponent - 1.0);
}

/// P(X1 X2 > x) for a standard bivariate Gaussian pair with correlation rho.
inline AsymptoticForm gaussian_product_tail(double rho) {
    if (!(rho > -1.0 && rho < 1.0)) {
        throw DomainError("gaussian_product_tail: rho must lie in (-1, 1)");
    }
    return AsymptoticForm(std::log1p(rho) - 0.5 * std::log(2.0 * std::numbers::pi), -0.5, 1.0 / (1.0 + rho), 1.0);
}

// ---------------------------------------------------------------------------
// Finite-x check of the dependence limit condition

struct DependenceCheckReport {
    std::vector<double> x_grid;
    std::vector<double> max_deviation;
    bool verdict = false;
};

struct DependenceCheckOptions {
    /// Overrides the window (a1, a2); default (A/2, 2A) or the custom spec's own window.
    std::optional<Window> window;
    int mesh_points = 512;
    /// Marginal cdfs used to build the FGM factor; defaults to the clipped asymptotic tails.
    std::function<double(double)> cdf1;
    std::function<double(double)> cdf2;
};

/// sup over y in [a1 w_x, a2 w_x] of |c(x, y) - D x^{q1} y^{q2-q1}| for every x in the grid.
/// The verdict is true when the sequence is non-increasing and its last value is below tolerance.
inline DependenceCheckReport check_dependence_condition(const DependenceSpec& dep, const WeibullTypeTail& t1,
                                                        const WeibullTypeTail& t2, const std::vector<double>& x_grid,
                                                        double tolerance, const DependenceCheckOptions& opts = {}) {
    detail::require(!x_grid.empty(), "check_dependence_condition: empty x grid");
    detail::require(opts.mesh_points >= 2, "check_dependence_condition: mesh needs at least two points");
    const auto k = product_constants(t1, t2);
    const auto [D, q1, q2] = dep.canonical();

    CopulaFactor c;
    Window window{k.A / 2.0, 2.0 * k.A};
    if (std::holds_alternative<Independent>(dep.variant())) {
        c = [](double, double) { return 1.0; };
    } else if (const auto* f = std::get_if<Fgm>(&dep.variant())) {
        auto F1 = opts.cdf1 ? opts.cdf1 : [t1](double u) { return t1.cdf_proxy(u); };
        auto F2 = opts.cdf2 ? opts.cdf2 : [t2](double u) { return t2.cdf_proxy(u); };
        const double tau = f->tau;
        c = [=](double x, double y) { return 1.0 + tau * F1(x / y) * (1.0 - 2.0 * F2(y)); };
    } else {
        const auto& custom = std::get<CustomDependence>(dep.variant());
        if (!custom.c) {
            throw MissingEvaluator("check_dependence_condition: custom dependence has no c evaluator");
        }
        c = custom.c;
        if (custom.window) window = *custom.window;
    }
    if (opts.window) window = *opts.window;
    detail::require(window.a1 > 0.0 && window.a1 < window.a2, "check_dependence_condition: window needs 0 < a1 < a2");

    DependenceCheckReport report;
    report.x_grid = x_grid;
    for (double x : x_grid) {
        detail::require(x > 0.0, "check_dependence_condition: grid values must be positive");
        const double lo = std::log(window.a1 * k.w(x));
        const double hi = std::log(window.a2 * k.w(x));
        double sup = 0.0;
        for (int i = 0; i < opts.mesh_points; ++i) {
            const double y = std::exp(lo + (hi - lo) * i / (opts.mesh_points - 1));
            const double target = D * std::pow(x, q1) * std::pow(y, q2 - q1);
            sup = std::max(sup, std::abs(c(x, y) - target));
        }
        report.max_deviation.push_back(sup);
    }
    bool non_increasing = true;
    for (std::size_t i = 1; i < report.max_deviation.size(); ++i) {
        if (report.max_deviation[i] > report.max_deviation[i - 1]) non_increasing = false;
    }
    report.verdict = non_increasing && report.max_deviation.back() < tolerance;
    return report;
}

}  // namespace tailkit
