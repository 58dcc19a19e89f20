#pragma once

// Ground truth for the closed forms: exact laws, log-space quadrature of the
// product survival and density integrals, Brownian-supremum quadrature,
// plain Monte Carlo and ratio sweeps.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "applications.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "special_functions.hpp"
#include "tail_model.hpp"

namespace tailkit {

struct Exponential {
    double rate;
};

/// S(x) = exp(-L x^p).
struct WeibullDist {
    double L;
    double p;
};

struct GammaDist {
    double shape;
    double scale;
};

/// Law of |N(0, 1)|.
struct HalfNormal {};

/// Law of S where S^2 is GIG(lambda, delta^2, alpha^2).
struct GigSqrt {
    GigParams params;
};

namespace detail {

// Cumulative mass of a density in u = ln x on a uniform grid, from below and
// from above, for inverting the cdf one panel at a time.
class CumulativeTable {
public:
    CumulativeTable() = default;

    template <class LogG>
    CumulativeTable(const LogG& log_g, double a, double b, int n) : g_(log_g), u_(n + 1) {
        std::vector<double> mass(n);
        for (int i = 0; i <= n; ++i) u_[i] = a + (b - a) * i / n;
        for (int i = 0; i < n; ++i) mass[i] = panel(u_[i], u_[i + 1]);
        lower_.assign(n + 1, 0.0);
        upper_.assign(n + 1, 0.0);
        for (int i = 0; i < n; ++i) lower_[i + 1] = lower_[i] + mass[i];
        for (int i = n; i > 0; --i) upper_[i - 1] = upper_[i] + mass[i - 1];
        total_ = lower_[n];
    }

    bool empty() const noexcept { return u_.empty(); }
    double floor() const noexcept { return std::min(upper_[upper_.size() - 2], lower_[1]) / total_; }

    /// ln x with P(X > x) = q.
    double invert_survival(double q) const {
        if (q <= 0.5) {
            const double target = q * total_;
            const auto it = std::upper_bound(upper_.rbegin(), upper_.rend(), target);
            const std::size_t i = upper_.size() - 1 - static_cast<std::size_t>(it - upper_.rbegin());
            const double rest = target - upper_[i + 1];
            return solve(i, [&](double u) { return panel(u, u_[i + 1]) - rest; }, -1.0);
        }
        const double target = (1.0 - q) * total_;
        const auto it = std::upper_bound(lower_.begin(), lower_.end(), target);
        const std::size_t i = static_cast<std::size_t>(it - lower_.begin()) - 1;
        const double rest = target - lower_[i];
        return solve(i, [&](double u) { return panel(u_[i], u) - rest; }, 1.0);
    }

private:
    double panel(double a, double b) const {
        if (b <= a) return 0.0;
        return quad::detail::kronrod15([&](double u) { return std::exp(g_(u)); }, a, b).value;
    }

    // Safeguarded Newton on [u_i, u_{i+1}] for a monotone residual with slope sign * g(u).
    template <class F>
    double solve(std::size_t i, const F& residual, double sign) const {
        double lo = u_[i], hi = u_[std::min(i + 1, u_.size() - 1)];
        double u = 0.5 * (lo + hi);
        for (int it = 0; it < 60; ++it) {
            const double r = residual(u);
            if (r * sign > 0.0) hi = u;
            else lo = u;
            double next = u - r / (sign * std::exp(g_(u)));
            if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
            if (std::abs(next - u) < 1e-13 * (1.0 + std::abs(u))) return next;
            u = next;
        }
        return u;
    }

    std::function<double(double)> g_;
    std::vector<double> u_;
    std::vector<double> lower_;
    std::vector<double> upper_;
    double total_ = 1.0;
};

}  // namespace detail

class OracleDistribution {
public:
    using Law = std::variant<Exponential, WeibullDist, GammaDist, HalfNormal, GigSqrt>;

    explicit OracleDistribution(Law law) : law_(law) {
        if (const auto* e = std::get_if<Exponential>(&law_)) {
            detail::require(e->rate > 0.0, "Exponential: rate must be positive");
        } else if (const auto* w = std::get_if<WeibullDist>(&law_)) {
            detail::require(w->L > 0.0 && w->p > 0.0, "WeibullDist: L and p must be positive");
        } else if (const auto* g = std::get_if<GammaDist>(&law_)) {
            detail::require(g->shape > 0.0 && g->scale > 0.0, "GammaDist: shape and scale must be positive");
        } else if (const auto* s = std::get_if<GigSqrt>(&law_)) {
            validate(s->params);
            log_gig_c_ = log_gig_constant(s->params);
            build_gig_table(*s);
        }
    }

    static OracleDistribution exponential(double rate) { return OracleDistribution(Exponential{rate}); }
    static OracleDistribution weibull(double L, double p) { return OracleDistribution(WeibullDist{L, p}); }
    static OracleDistribution gamma(double shape, double scale) { return OracleDistribution(GammaDist{shape, scale}); }
    static OracleDistribution half_normal() { return OracleDistribution(HalfNormal{}); }
    static OracleDistribution gig_sqrt(GigParams g) { return OracleDistribution(GigSqrt{g}); }

    const Law& law() const noexcept { return law_; }

    double log_survival(double x) const {
        if (x <= 0.0) return 0.0;
        return std::visit([&](const auto& d) { return log_survival_impl(d, x); }, law_);
    }

    double log_density(double x) const {
        if (x <= 0.0) return special::kNegInf;
        return std::visit([&](const auto& d) { return log_density_impl(d, x); }, law_);
    }

    double survival(double x) const { return std::exp(log_survival(x)); }
    double density(double x) const { return std::exp(log_density(x)); }

    double cdf(double x) const {
        if (x <= 0.0) return 0.0;
        if (const auto* g = std::get_if<GigSqrt>(&law_)) {
                const double lower = log_lower_gig(*g, x);
            if (lower < -std::numbers::ln2) return std::exp(lower);
            return -std::expm1(log_survival(x));
        }
        if (const auto* g = std::get_if<GammaDist>(&law_)) {
            return std::exp(special::log_gamma_p(g->shape, x / g->scale));
        }
        return -std::expm1(log_survival(x));
    }

    /// The Weibull-type tail this law is asymptotic to.
    WeibullTypeTail asymptotic_tail() const {
        return std::visit(
            [&](const auto& d) -> WeibullTypeTail {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, Exponential>) {
                    return WeibullTypeTail(1.0, 0.0, d.rate, 1.0);
                } else if constexpr (std::is_same_v<T, WeibullDist>) {
                    return WeibullTypeTail(1.0, 0.0, d.L, d.p);
                } else if constexpr (std::is_same_v<T, GammaDist>) {
                    return WeibullTypeTail(std::exp(-(d.shape - 1.0) * std::log(d.scale) - std::lgamma(d.shape)),
                                           d.shape - 1.0, 1.0 / d.scale, 1.0);
                } else if constexpr (std::is_same_v<T, HalfNormal>) {
                    return WeibullTypeTail(std::sqrt(2.0 / std::numbers::pi), -1.0, 0.5, 2.0);
                } else {
                    return gig_sqrt_tail(d.params);
                }
            },
            law_);
    }

    /// The x with S(x) = q, for q in (0, 1).
    double survival_quantile(double q) const {
        detail::require(q > 0.0 && q < 1.0, "survival_quantile: q must lie in (0, 1)");
        if (const auto* e = std::get_if<Exponential>(&law_)) return -std::log(q) / e->rate;
        if (const auto* w = std::get_if<WeibullDist>(&law_)) return std::pow(-std::log(q) / w->L, 1.0 / w->p);
        if (!gig_table_.empty() && std::min(q, 1.0 - q) > gig_table_.floor()) {
            return std::exp(gig_table_.invert_survival(q));
        }
        return generic_survival_quantile(std::log(q));
    }

    std::string name() const {
        return std::visit(
            [](const auto& d) -> std::string {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, Exponential>) return "exponential";
                else if constexpr (std::is_same_v<T, WeibullDist>) return "weibull";
                else if constexpr (std::is_same_v<T, GammaDist>) return "gamma";
                else if constexpr (std::is_same_v<T, HalfNormal>) return "half_normal";
                else return "gig_sqrt";
            },
            law_);
    }

private:
    static double log_survival_impl(const Exponential& d, double x) { return -d.rate * x; }
    static double log_survival_impl(const WeibullDist& d, double x) { return -d.L * std::pow(x, d.p); }
    static double log_survival_impl(const GammaDist& d, double x) {
        return special::log_gamma_q(d.shape, x / d.scale);
    }
    static double log_survival_impl(const HalfNormal&, double x) {
        return std::numbers::ln2 + special::log_normal_sf(x);
    }
    double log_survival_impl(const GigSqrt& d, double x) const {
        const double lower = log_lower_gig(d, x);
        if (lower < -std::numbers::ln2) return std::log1p(-std::exp(lower));
        quad::Options opts;
        opts.lower = std::log(x);
        opts.upper = std::max(opts.lower, 0.0) + 8.0;
        opts.scan_points = 513;
        return quad::integrate_log([&](double u) { return log_density_impl(d, std::exp(u)) + u; }, opts).log_value;
    }

    static double log_density_impl(const Exponential& d, double x) { return std::log(d.rate) - d.rate * x; }
    static double log_density_impl(const WeibullDist& d, double x) {
        return std::log(d.L * d.p) + (d.p - 1.0) * std::log(x) - d.L * std::pow(x, d.p);
    }
    static double log_density_impl(const GammaDist& d, double x) {
        return (d.shape - 1.0) * std::log(x) - x / d.scale - std::lgamma(d.shape) - d.shape * std::log(d.scale);
    }
    static double log_density_impl(const HalfNormal&, double x) {
        return std::numbers::ln2 + special::log_normal_pdf(x);
    }
    double log_density_impl(const GigSqrt& d, double s) const {
        const auto& g = d.params;
        return std::numbers::ln2 + log_gig_c_ + (2.0 * g.lambda - 1.0) * std::log(s) -
               0.5 * (g.delta * g.delta / (s * s) + g.alpha * g.alpha * s * s);
    }

    double log_lower_gig(const GigSqrt& d, double x) const {
        quad::Options opts;
        opts.upper = std::log(x);
        opts.lower = std::min(opts.upper, 0.0) - 12.0;
        opts.scan_points = 513;
        return quad::integrate_log([&](double u) { return log_density_impl(d, std::exp(u)) + u; }, opts).log_value;
    }

    // Safeguarded Newton on ln x for ln(-log S(x)) = ln(-target).
    double generic_survival_quantile(double target) const {
        const double goal = std::log(-target);
        double lo = -40.0, hi = 40.0;
        while (log_survival(std::exp(lo)) < target) lo -= 10.0;
        while (log_survival(std::exp(hi)) > target) hi += 10.0;
        double u = 0.5 * (lo + hi);
        double last = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(u)); ++it) {
            const double x = std::exp(u);
            const double ls = log_survival(x);
            const double g = std::log(-ls) - goal;
            if (g < 0.0) lo = u;
            else hi = u;
            if (std::abs(g) < 1e-13) break;
            // d ln(-log S) / d ln x = x f(x) / (S(x) (-log S(x)))
            const double slope = std::exp(std::log(x) + log_density(x) - ls - std::log(-ls));
            double next = u - g / slope;
            if (!(next > lo && next < hi) || !std::isfinite(next) || std::abs(g) > 0.5 * last) next = 0.5 * (lo + hi);
            last = std::abs(g);
            u = next;
        }
        return std::exp(u);
    }

    void build_gig_table(const GigSqrt& d) {
        const auto& g = d.params;
        const double log_c = log_gig_c_;
        const auto log_g = [g, log_c](double u) {
            const double s = std::exp(u);
            return std::numbers::ln2 + log_c + 2.0 * g.lambda * u - 0.5 * (g.delta * g.delta / (s * s) + g.alpha * g.alpha * s * s);
        };
        quad::Options opts;
        opts.lower = -40.0;
        opts.upper = 40.0;
        opts.scan_points = 8001;
        double arg = 0.0;
        double peak = special::kNegInf;
        for (int i = 0; i < opts.scan_points; ++i) {
            const double u = opts.lower + (opts.upper - opts.lower) * i / (opts.scan_points - 1);
            if (log_g(u) > peak) {
                peak = log_g(u);
                arg = u;
            }
        }
        double a = arg, b = arg;
        while (log_g(a) > peak - 60.0 && a > opts.lower) a -= 0.05;
        while (log_g(b) > peak - 60.0 && b < opts.upper) b += 0.05;
        gig_table_ = detail::CumulativeTable(log_g, a, b, 2048);
    }

    Law law_;
    double log_gig_c_ = 0.0;
    detail::CumulativeTable gig_table_;
};

// ---------------------------------------------------------------------------
// Quadrature oracles

namespace detail {

inline quad::Options product_range(double x, quad::Options opts) {
    // the mass of X2 sits near y ~ x^{p1/(p1+p2)}; the default range covers u in [-60, 60]
    const double lx = std::log(x);
    opts.lower = std::min(opts.lower, -std::abs(lx) - 10.0);
    opts.upper = std::max(opts.upper, std::abs(lx) + 10.0);
    return opts;
}

}  // namespace detail

/// log P(X1 X2 > x) = log ∫ c(x, y) S1(x/y) dF2(y), integrated on u = ln y.
inline double survival_product_quadrature(const OracleDistribution& d1, const OracleDistribution& d2,
                                          const DependenceSpec& dep, double x, const quad::Options& opts = {}) {
    if (!(x >= 0.0)) throw DomainError("survival_product_quadrature: x must be non-negative");
    if (x == 0.0) return 0.0;

    std::function<double(double, double)> log_c;
    if (const auto* f = std::get_if<Fgm>(&dep.variant())) {
        const double tau = f->tau;
        log_c = [&d1, &d2, tau](double xy, double y) {
            const double c = 1.0 + tau * d1.cdf(xy) * (1.0 - 2.0 * d2.cdf(y));
            return c > 0.0 ? std::log(c) : special::kNegInf;
        };
    } else if (const auto* c = std::get_if<CustomDependence>(&dep.variant())) {
        if (!c->c) throw MissingEvaluator("survival_product_quadrature: custom dependence has no c evaluator");
        const CopulaFactor factor = c->c;
        log_c = [factor, x](double, double y) {
            const double v = factor(x, y);
            return v > 0.0 ? std::log(v) : special::kNegInf;
        };
    }

    const double lx = std::log(x);
    const auto log_f = [&](double u) {
        const double y = std::exp(u);
        const double xy = std::exp(lx - u);
        double v = d1.log_survival(xy) + d2.log_density(y) + u;
        if (v == special::kNegInf) return v;
        if (log_c) v += log_c(xy, y);
        return v;
    };
    return quad::integrate_log(log_f, detail::product_range(x, opts)).log_value;
}

/// log h(x) with h(x) = ∫ f1(x/y) (1/y) f2(y) dy (independent pair).
inline double density_product_quadrature(const OracleDistribution& d1, const OracleDistribution& d2, double x,
                                         const quad::Options& opts = {}) {
    if (!(x > 0.0)) throw DomainError("density_product_quadrature: x must be positive");
    const double lx = std::log(x);
    const auto log_f = [&](double u) {
        const double a = d1.log_density(std::exp(lx - u));
        if (a == special::kNegInf) return a;
        return a + d2.log_density(std::exp(u));
    };
    return quad::integrate_log(log_f, detail::product_range(x, opts)).log_value;
}

/// log P(X1 X2 > x) for standard Gaussians with correlation rho, conditioning on X2 = y
/// over both half-lines.
inline double gaussian_product_quadrature(double rho, double x, const quad::Options& opts = {}) {
    if (!(rho > -1.0 && rho < 1.0)) throw DomainError("gaussian_product_quadrature: rho must lie in (-1, 1)");
    if (!(x > 0.0)) throw DomainError("gaussian_product_quadrature: x must be positive");
    const double s = std::sqrt(1.0 - rho * rho);
    // y = e^u > 0: need X1 > x/y, X1 | y ~ N(rho y, 1 - rho^2)
    const auto positive = [&](double u) {
        const double y = std::exp(u);
        return special::log_normal_sf((x / y - rho * y) / s) + special::log_normal_pdf(y) + u;
    };
    // y = -e^u < 0: need X1 < x/y
    const auto negative = [&](double u) {
        const double y = -std::exp(u);
        return special::log_normal_cdf((x / y - rho * y) / s) + special::log_normal_pdf(y) + u;
    };
    const auto range = detail::product_range(x, opts);
    return special::log_add_exp(quad::integrate_log(positive, range).log_value,
                                quad::integrate_log(negative, range).log_value);
}

/// log P(sup_{[0,T]} B > x) = log ∫ 2 Phi_bar(x / sqrt(t)) dF_T(t).
inline double bm_sup_quadrature(const OracleDistribution& time, double x, const quad::Options& opts = {}) {
    if (!(x > 0.0)) throw DomainError("bm_sup_quadrature: x must be positive");
    const auto log_f = [&](double u) {
        const double ld = time.log_density(std::exp(u));
        if (ld == special::kNegInf) return ld;
        return std::numbers::ln2 + special::log_normal_sf(x * std::exp(-0.5 * u)) + ld + u;
    };
    return quad::integrate_log(log_f, detail::product_range(x, opts)).log_value;
}

// ---------------------------------------------------------------------------
// Monte Carlo

struct McEstimate {
    double estimate;
    double standard_error;
};

inline constexpr long kMinMcSamples = 1000;

/// Plain Monte Carlo estimate of P(X1 X2 > x); deterministic for a fixed seed.
/// FGM pairs are drawn by inverting the conditional law of F1(X1) given X2.
inline McEstimate mc_product_tail(const OracleDistribution& d1, const OracleDistribution& d2,
                                  const DependenceSpec& dep, double x, long n, std::uint64_t seed) {
    if (n < kMinMcSamples) throw DomainError("mc_product_tail: n must be at least 1000");
    if (!(x >= 0.0)) throw DomainError("mc_product_tail: x must be non-negative");
    if (x == 0.0) return {1.0, 0.0};

    const auto* fgm = std::get_if<Fgm>(&dep.variant());
    const auto* custom = std::get_if<CustomDependence>(&dep.variant());
    if (custom && !custom->conditional_quantile) {
        throw MissingEvaluator("mc_product_tail: custom dependence needs a conditional quantile");
    }

    SplitMix64 rng(seed);
    long hits = 0;
    for (long i = 0; i < n; ++i) {
        const double s2 = rng.uniform();
        const double y = d2.survival_quantile(s2);
        const double w = rng.uniform();
        double x1;
        if (fgm) {
            // G(v) = v (1 - k + k v) is the conditional cdf of V = F1(X1), k = tau (1 - 2 F2(y))
            const double k = fgm->tau * (2.0 * s2 - 1.0);
            const double v = 2.0 * w / ((1.0 - k) + std::sqrt((1.0 - k) * (1.0 - k) + 4.0 * k * w));
            const double s1 = std::clamp(1.0 - v, 1e-300, 1.0 - 1e-16);
            x1 = d1.survival_quantile(s1);
        } else if (custom) {
            x1 = custom->conditional_quantile(w, y);
        } else {
            x1 = d1.survival_quantile(w);
        }
        if (x1 * y > x) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

// ---------------------------------------------------------------------------
// Ratio sweeps

struct RatioRow {
    double x;
    double log_exact;
    double log_asymptotic;
    double ratio;
    double abs_log_gap;
    bool pre_asymptotic;
    std::optional<std::string> error;
};

using LogOracle = std::function<double(double)>;

/// One row per x, rows computed independently on up to `threads` workers and
/// returned in grid order. Oracle failures are recorded on the row.
inline std::vector<RatioRow> ratio_sweep(const AsymptoticForm& form, const LogOracle& oracle,
                                         const std::vector<double>& x_grid, unsigned threads = 1) {
    if (x_grid.empty()) throw DomainError("ratio_sweep: empty grid");
    for (std::size_t i = 1; i < x_grid.size(); ++i) {
        if (!(x_grid[i] > x_grid[i - 1])) throw DomainError("ratio_sweep: grid must be strictly increasing");
    }
    std::vector<RatioRow> rows(x_grid.size());
    const auto compute = [&](std::size_t i) {
        RatioRow& row = rows[i];
        row.x = x_grid[i];
        try {
            const auto asym = eval_log_survival(form, row.x);
            row.log_asymptotic = asym.log_prob;
            row.pre_asymptotic = asym.pre_asymptotic;
            row.log_exact = oracle(row.x);
            row.ratio = std::exp(row.log_exact - row.log_asymptotic);
            row.abs_log_gap = std::abs(row.log_exact - row.log_asymptotic);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(x_grid.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) compute(i);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < rows.size(); i = next++) compute(i);
        });
    }
    pool.clear();
    return rows;
}

}  // namespace tailkit
