#pragma once

// Saddle-point machinery behind the product-tail closed forms: the exponent
// psi_x(y) = L1 (x/y)^{p1} + L2 y^{p2}, its minimizer, and a leading-order
// Laplace approximation, plus a comparison harness against quadrature.

#include <cmath>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "product_asymptotics.hpp"
#include "quadrature.hpp"
#include "tail_model.hpp"

namespace tailkit {

/// psi normalized so that its minimizer sits at y = 1.
struct SaddleSpec {
    double L1;
    double p1;
    double L2;
    double p2;
    double A;

    double a() const { return L1 * std::pow(A, -p1); }
    double b() const { return L2 * std::pow(A, p2); }

    double psi(double y) const { return a() * std::pow(y, -p1) + b() * std::pow(y, p2); }
    double psi_prime_at1() const { return -p1 * a() + p2 * b(); }
    double psi2_at1() const { return p1 * (p1 + 1.0) * a() + p2 * (p2 - 1.0) * b(); }
};

inline SaddleSpec make_saddle(double L1, double p1, double L2, double p2) {
    detail::require(L1 > 0.0 && p1 > 0.0 && L2 > 0.0 && p2 > 0.0, "make_saddle: parameters must be positive");
    return {L1, p1, L2, p2, std::pow((p1 * L1) / (p2 * L2), 1.0 / (p1 + p2))};
}

inline SaddleSpec make_saddle(const WeibullTypeTail& t1, const WeibullTypeTail& t2) {
    return make_saddle(t1.L(), t1.p(), t2.L(), t2.p());
}

/// Unnormalized psi_x(y) = L1 (x/y)^{p1} + L2 y^{p2}.
inline double psi_value(const SaddleSpec& s, double x, double y) {
    if (!(x > 0.0 && y > 0.0)) {
        throw DomainError("psi_value: x and y must be positive");
    }
    return s.L1 * std::pow(x / y, s.p1) + s.L2 * std::pow(y, s.p2);
}

struct PsiMinimum {
    double argmin;
    double value;
};

/// Numeric minimizer of psi_x over (0, inf).
///
/// Golden-section search on ln y over the closed-form saddle guess +- 5,
/// then Newton steps on d psi / d ln y = 0 (psi alone is flat to rounding
/// within a relative window of order sqrt(eps) around the minimum).
inline PsiMinimum minimize_psi(const SaddleSpec& s, double x, double tolerance = 1e-12) {
    detail::require(x > 0.0, "minimize_psi: x must be positive");
    const double centre = std::log(s.A) + s.p1 / (s.p1 + s.p2) * std::log(x);
    const double lx = std::log(x);
    // terms of psi in u = ln y
    const auto left = [&](double u) { return s.L1 * std::exp(s.p1 * (lx - u)); };
    const auto right = [&](double u) { return s.L2 * std::exp(s.p2 * u); };
    const auto f = [&](double u) { return left(u) + right(u); };

    double a = centre - 5.0, b = centre + 5.0;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tolerance) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    double u = 0.5 * (a + b);
    for (int it = 0; it < 20; ++it) {
        const double g = -s.p1 * left(u) + s.p2 * right(u);
        const double h = s.p1 * s.p1 * left(u) + s.p2 * s.p2 * right(u);
        const double step = g / h;
        u -= step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(u))) break;
    }
    return {std::exp(u), f(u)};
}

/// Leading-order Laplace estimate of log ∫_0^inf y^{kappa_m} exp(-lambda psi(y)) dy.
inline double laplace_log_integral(double kappa_m, const SaddleSpec& s, double lambda) {
    (void)kappa_m;  // the minimizer is y = 1, where y^{kappa_m} = 1
    if (!(lambda > 0.0)) {
        throw DomainError("laplace_log_integral: lambda must be positive");
    }
    return 0.5 * std::log(2.0 * std::numbers::pi / (lambda * s.psi2_at1())) - lambda * s.psi(1.0);
}

/// The same integral by adaptive quadrature on u = ln y.
inline double laplace_exact_log_integral(double kappa_m, const SaddleSpec& s, double lambda,
                                         const quad::Options& opts = {}) {
    detail::require(lambda > 0.0, "laplace_exact_log_integral: lambda must be positive");
    const auto log_f = [&](double u) {
        const double rate = s.a() * std::exp(-s.p1 * u) + s.b() * std::exp(s.p2 * u);
        if (!std::isfinite(rate)) return special::kNegInf;
        return (kappa_m + 1.0) * u - lambda * rate;
    };
    return quad::integrate_log(log_f, opts).log_value;
}

struct LaplaceRow {
    double x;
    double log_quadrature;
    double log_asymptotic;
    double gap;
};

struct LaplaceReport {
    std::vector<LaplaceRow> rows;
    bool gaps_decreasing = false;
};

/// Compares the independent product closed form with direct quadrature of the
/// windowless integrand L2 p2 ∫ y^{p2-1} g1(x/y) g2(y) exp(-psi_x(y)) dy.
inline LaplaceReport laplace_consistency_check(const WeibullTypeTail& t1, const WeibullTypeTail& t2,
                                               const std::vector<double>& x_grid, const quad::Options& opts = {}) {
    const auto form = product_tail_polynomial(t1, t2);
    LaplaceReport report;
    for (double x : x_grid) {
        detail::require(x > 0.0, "laplace_consistency_check: grid values must be positive");
        const double lx = std::log(x);
        const auto log_f = [&](double u) {
            const double rate = t1.L() * std::exp(t1.p() * (lx - u)) + t2.L() * std::exp(t2.p() * u);
            if (!std::isfinite(rate)) return special::kNegInf;
            return std::log(t2.L() * t2.p()) + t2.p() * u + t1.log_g(std::exp(lx - u)) + t2.log_g(std::exp(u)) -
                   rate;
        };
        const double exact = quad::integrate_log(log_f, opts).log_value;
        const double asym = form.log_value(x);
        report.rows.push_back({x, exact, asym, std::abs(exact - asym)});
    }
    report.gaps_decreasing = true;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        if (!(report.rows[i].gap < report.rows[i - 1].gap)) report.gaps_decreasing = false;
    }
    return report;
}

}  // namespace tailkit
