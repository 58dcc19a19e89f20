#pragma once

// Brownian supremum over a random horizon, elliptical and scaled elliptical
// joint tails, the EGHD specialization and weak tail dependence coefficients.

#include <cmath>
#include <numbers>
#include <optional>
#include <variant>

#include "errors.hpp"
#include "product_asymptotics.hpp"
#include "quadrature.hpp"
#include "tail_model.hpp"

namespace tailkit {

// ---------------------------------------------------------------------------
// Modified Bessel function of the third kind

inline constexpr double kMaxBesselOrder = 50.0;

/// log K_nu(z) from K_nu(z) = ∫_0^inf exp(-z cosh t) cosh(nu t) dt.
///
/// The integrand is shifted by its peak and integrated by tanh-sinh on
/// [0, t*] and [t*, T], T being where it has fallen 60 log-units below the peak.
inline double log_bessel_k(double nu, double z) {
    if (!(nu >= 0.0 && nu <= kMaxBesselOrder) || !(z > 0.0) || !std::isfinite(z)) {
        throw DomainError("bessel_k: requires 0 <= nu <= 50 and z > 0");
    }
    // log of exp(-z (cosh t - 1)) cosh(nu t)
    const auto log_f = [nu, z](double t) {
        const double nt = nu * t;
        const double log_cosh = nt + std::log1p(std::exp(-2.0 * nt)) - std::numbers::ln2;
        return -z * (std::cosh(t) - 1.0) + log_cosh;
    };

    double peak_t = 0.0;
    if (nu * nu > z) {
        // root of nu tanh(nu t) = z sinh t on (0, asinh(nu/z)]
        double lo = 0.0, hi = std::asinh(nu / z);
        for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (nu * std::tanh(nu * mid) > z * std::sinh(mid)) lo = mid;
            else hi = mid;
        }
        peak_t = 0.5 * (lo + hi);
    }
    const double peak = log_f(peak_t);

    double step = std::max(1.0, peak_t);
    double upper = peak_t + step;
    while (log_f(upper) > peak - 60.0) {
        upper += step;
        step *= 2.0;
    }
    double lo = peak_t, hi = upper;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (log_f(mid) > peak - 60.0) lo = mid;
        else hi = mid;
    }
    upper = hi;

    const auto shifted = [&](double t) { return std::exp(log_f(t) - peak); };
    double sum = 0.0;
    if (peak_t > 0.0) sum += quad::tanh_sinh(shifted, 0.0, peak_t);
    sum += quad::tanh_sinh(shifted, peak_t, upper);
    return -z + peak + std::log(sum);
}

inline double bessel_k(double nu, double z) { return std::exp(log_bessel_k(nu, z)); }

// ---------------------------------------------------------------------------
// Generalized inverse Gaussian

struct GigParams {
    double lambda;
    double delta;
    double alpha;
};

inline void validate(const GigParams& g) {
    detail::require(std::isfinite(g.lambda), "GigParams: lambda must be finite");
    detail::require(g.delta > 0.0, "GigParams: delta must be positive");
    detail::require(g.alpha > 0.0, "GigParams: alpha must be positive");
    detail::require(std::abs(g.lambda) <= kMaxBesselOrder, "GigParams: |lambda| must not exceed 50");
}

inline double log_gig_constant(const GigParams& g) {
    validate(g);
    // K_{-nu} = K_nu
    return 0.5 * g.lambda * std::log(g.alpha * g.alpha / (g.delta * g.delta)) - std::numbers::ln2 -
           log_bessel_k(std::abs(g.lambda), g.delta * g.alpha);
}

/// c(lambda, delta^2, alpha^2) = (alpha^2/delta^2)^{lambda/2} / (2 K_lambda(delta alpha)).
inline double gig_constant(const GigParams& g) { return std::exp(log_gig_constant(g)); }

/// Tail of S where S^2 is GIG: c (2/alpha^2) x^{2 lambda - 2} exp(-alpha^2 x^2 / 2).
inline WeibullTypeTail gig_sqrt_tail(const GigParams& g) {
    return WeibullTypeTail(2.0 * gig_constant(g) / (g.alpha * g.alpha), 2.0 * g.lambda - 2.0,
                           0.5 * g.alpha * g.alpha, 2.0);
}

/// Radius of a bivariate standard Gaussian vector: P(R > x) = exp(-x^2/2).
inline WeibullTypeTail gaussian_radial_tail() { return WeibullTypeTail(1.0, 0.0, 0.5, 2.0); }

// ---------------------------------------------------------------------------
// Brownian supremum over a random horizon

/// P(sup_{[0,T]} B > x) for a horizon T with Weibull-type tail.
///
/// Realized as the product sqrt(T) |N(0,1)|: sqrt(T) has tail g(x^2) exp(-L x^{2p})
/// and |N(0,1)| has tail sqrt(2/pi) u^{-1} exp(-u^2/2).
inline AsymptoticForm bm_sup_tail(const WeibullTypeTail& time_tail) {
    const WeibullTypeTail half_normal(std::sqrt(2.0 / std::numbers::pi), -1.0, 0.5, 2.0);
    if (time_tail.is_power_law()) {
        const WeibullTypeTail root(time_tail.C(), 2.0 * time_tail.alpha(), time_tail.L(), 2.0 * time_tail.p());
        return product_tail_polynomial(root, half_normal);
    }
    const WeibullTypeTail root([time_tail](double u) { return time_tail.log_g(u * u); }, 2.0 * time_tail.alpha(),
                               time_tail.L(), 2.0 * time_tail.p());
    return product_tail_dependent(root, half_normal, DependenceSpec::independent());
}

/// Closed display (2/(1+p))^{1/2} g(A x^{2/(1+p)}) exp(-(1/(2A) + L A^p) x^{2p/(1+p)}),
/// A = (2Lp)^{-1/(1+p)}; an independent route to bm_sup_tail.
inline AsymptoticForm bm_sup_closed_form(const WeibullTypeTail& time_tail) {
    const double L = time_tail.L(), p = time_tail.p();
    const double A = std::pow(2.0 * L * p, -1.0 / (1.0 + p));
    const double rate = 1.0 / (2.0 * A) + L * std::pow(A, p);
    auto modulation = [time_tail, A, p](double x) { return time_tail.log_g(A * std::pow(x, 2.0 / (1.0 + p))); };
    return AsymptoticForm(0.5 * std::log(2.0 / (1.0 + p)), 0.0, rate, 2.0 * p / (1.0 + p), modulation);
}

// ---------------------------------------------------------------------------
// Elliptical joint tails

inline double c_rho(double rho) { return 2.0 / (1.0 + rho); }

/// (1-rho^2)^{3/2} / (1-rho)^2 in log form, via (1+rho)^{3/2} (1-rho)^{-1/2}.
inline double log_elliptical_shape(double rho) { return 1.5 * std::log1p(rho) - 0.5 * std::log1p(-rho); }

inline void require_rho(double rho, const char* op) {
    if (!(rho > -1.0 && rho < 1.0)) {
        throw DomainError(std::string(op) + ": rho must lie in (-1, 1)");
    }
}

/// P(X1 > x, X2 > x) for R (U1, rho U1 + sqrt(1-rho^2) U2) with Weibull-type radius R.
/// The Gumbel scaling function of R is w(x) = L p x^{p-1}.
inline AsymptoticForm elliptical_joint_tail(const WeibullTypeTail& radial, double rho) {
    require_rho(rho, "elliptical_joint_tail");
    const double c = c_rho(rho);
    const double L = radial.L(), p = radial.p();
    const double log_c = std::log(c);
    // sqrt(c)/(2 pi) * shape / (x w(sqrt(c) x)) * P(R > sqrt(c) x)
    double log_pref = 0.5 * log_c - std::log(2.0 * std::numbers::pi) + log_elliptical_shape(rho) -
                      std::log(L * p) - 0.5 * (p - 1.0) * log_c;
    double kappa = -p;
    const double rate = L * std::pow(c, p / 2.0);
    if (radial.is_power_law()) {
        log_pref += std::log(radial.C()) + 0.5 * radial.alpha() * log_c;
        kappa += radial.alpha();
        return AsymptoticForm(log_pref, kappa, rate, p);
    }
    const double root_c = std::sqrt(c);
    return AsymptoticForm(log_pref, kappa, rate, p, [radial, root_c](double x) { return radial.log_g(root_c * x); });
}

/// Bivariate elliptical vector scaled by S, with (R, S) FGM-coupled.
/// Index 1 refers to the radius R and index 2 to the scale S.
struct EllipticalSpec {
    double rho;
    WeibullTypeTail radial;
    std::optional<WeibullTypeTail> scale;
    double tau = 0.0;

    double c() const { return c_rho(rho); }
};

inline AsymptoticForm scaled_elliptical_joint_tail(const EllipticalSpec& spec) {
    require_rho(spec.rho, "scaled_elliptical_joint_tail");
    detail::require(spec.tau >= -1.0 && spec.tau <= 1.0, "scaled_elliptical_joint_tail: tau must lie in [-1, 1]");
    if (!spec.scale) {
        throw DomainError("scaled_elliptical_joint_tail: scale tail is required");
    }
    if (!(spec.tau < 1.0)) {
        throw DegenerateLeadingCoefficient("scaled_elliptical_joint_tail: tau = 1 gives D = 0");
    }
    const WeibullTypeTail& r = spec.radial;
    const WeibullTypeTail& s = *spec.scale;
    const auto k = product_constants(r, s);
    const double p1 = r.p(), L1 = r.L(), p2 = s.p(), L2 = s.L();
    const double c = spec.c();
    const double log_c = std::log(c);
    const double sum = p1 + p2;
    const double rr = p1 * p2 / sum;

    const double log_pref = std::log1p(-spec.tau) + log_elliptical_shape(spec.rho) +
                            0.5 * std::log(p2 * L2 / (2.0 * std::numbers::pi * sum)) + (1.0 - rr / 4.0) * log_c -
                            std::log(p1 * L1) + (p2 / 2.0 + p1) * std::log(k.A);
    const double radial_shift = std::pow(c, p2 / (2.0 * sum));
    const double scale_shift = std::pow(c, p1 / (2.0 * sum));
    auto modulation = [r, s, k, radial_shift, scale_shift](double x) {
        const double z = k.z(x);
        return r.log_g(radial_shift * x / z) + s.log_g(scale_shift * z);
    };
    return AsymptoticForm(log_pref, -rr / 2.0, k.B * std::pow(c, rr / 2.0), rr, modulation);
}

/// Closed form of the EGHD joint tail P(Y1 > x, Y2 > x).
inline AsymptoticForm eghd_joint_tail(const GigParams& gig, double rho) {
    validate(gig);
    require_rho(rho, "eghd_joint_tail");
    const double c = c_rho(rho);
    const double lambda = gig.lambda;
    const double log_pref = log_gig_constant(gig) - 0.5 * std::log(2.0 * std::numbers::pi) + 1.5 * std::log1p(rho) -
                            0.5 * std::log1p(-rho) + (-lambda - 1.5) * std::log(gig.alpha) +
                            (2.0 * lambda + 1.0) / 4.0 * std::log(c);
    return AsymptoticForm(log_pref, (2.0 * lambda - 3.0) / 2.0, gig.alpha * std::sqrt(c), 1.0);
}

// ---------------------------------------------------------------------------
// Weak tail dependence

struct ThetaForm {
    double rho;
    double theta;
};

struct ProductForm {
    double rho;
    double p1;
    double p2;
};

struct EghdForm {
    double rho;
};

using TailDependenceVariant = std::variant<ThetaForm, ProductForm, EghdForm>;

/// Exponent e in chi = 2 ((1+rho)/2)^e - 1.
inline double chi_exponent(const TailDependenceVariant& v) {
    if (const auto* t = std::get_if<ThetaForm>(&v)) {
        detail::require(t->theta >= 0.0 && std::isfinite(t->theta), "weak_tail_dependence: theta must be >= 0");
        return t->theta / 2.0;
    }
    if (const auto* p = std::get_if<ProductForm>(&v)) {
        detail::require(p->p1 > 0.0 && p->p2 > 0.0, "weak_tail_dependence: p1, p2 must be positive");
        return p->p1 * p->p2 / (2.0 * (p->p1 + p->p2));
    }
    return 0.5;
}

inline double weak_tail_dependence(const TailDependenceVariant& v) {
    const double rho = std::visit([](const auto& f) { return f.rho; }, v);
    require_rho(rho, "weak_tail_dependence");
    return 2.0 * std::pow((1.0 + rho) / 2.0, chi_exponent(v)) - 1.0;
}

}  // namespace tailkit
