#pragma once

// Log-space special functions shared by the oracle and the closed forms.

#include <cmath>
#include <limits>
#include <numbers>

namespace tailkit::special {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(e^a + e^b) without overflow.
inline double log_add_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(-std::abs(a - b)));
}

/// log(1 - e^a) for a <= 0.
inline double log1m_exp(double a) {
    if (a > -std::numbers::ln2) {
        return std::log(-std::expm1(a));
    }
    return std::log1p(-std::exp(a));
}

inline double log_normal_pdf(double z) {
    return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi);
}

/// log of the standard normal survival function, accurate far into both tails.
inline double log_normal_sf(double z) {
    if (z < 0.0) {
        return std::log1p(-0.5 * std::erfc(-z / std::numbers::sqrt2));
    }
    if (z < 20.0) {
        return std::log(0.5 * std::erfc(z / std::numbers::sqrt2));
    }
    // Mills ratio continued fraction R(z) = 1/(z+1/(z+2/(z+3/(z+...))))
    double tail = z;
    for (int k = 40; k >= 1; --k) {
        tail = z + k / tail;
    }
    return log_normal_pdf(z) - std::log(tail);
}

inline double log_normal_cdf(double z) { return log_normal_sf(-z); }

inline double normal_sf(double z) { return std::exp(log_normal_sf(z)); }

namespace detail {

// Series for the lower regularized gamma, valid for x < a + 1.
inline double log_gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 1000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return -x + a * std::log(x) - std::lgamma(a) + std::log(sum);
}

// Lentz continued fraction for the upper regularized gamma, valid for x >= a + 1.
inline double log_gamma_q_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return -x + a * std::log(x) - std::lgamma(a) + std::log(h);
}

}  // namespace detail

/// log Q(a, x), the regularized upper incomplete gamma function.
inline double log_gamma_q(double a, double x) {
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) {
        return log1m_exp(detail::log_gamma_p_series(a, x));
    }
    return detail::log_gamma_q_fraction(a, x);
}

/// log P(a, x), the regularized lower incomplete gamma function.
inline double log_gamma_p(double a, double x) {
    if (x <= 0.0) return kNegInf;
    if (x < a + 1.0) {
        return detail::log_gamma_p_series(a, x);
    }
    return log1m_exp(detail::log_gamma_q_fraction(a, x));
}

}  // namespace tailkit::special
