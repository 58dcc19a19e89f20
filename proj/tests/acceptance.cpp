// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "tailkit/tailkit.hpp"

using namespace tailkit;

namespace {

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
    std::printf("%s [%2d] %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
    if (!ok) ++failures;
}

std::string format(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Runs a criterion, turning unexpected exceptions into a failure line.
void criterion(int id, const char* title, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [ok, detail] = body();
        report(id, title, ok, detail);
    } catch (const std::exception& e) {
        report(id, title, false, std::string("exception: ") + e.what());
    }
}

const auto exp1 = OracleDistribution::exponential(1.0);

}  // namespace

int main() {
    criterion(1, "saddle constants", [] {
        SplitMix64 rng(11);
        const auto draw = [&] { return 0.2 + 4.8 * rng.uniform(); };
        double worst_arg = 0.0, worst_val = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double p1 = draw(), L1 = draw(), p2 = draw(), L2 = draw();
            const auto s = make_saddle(L1, p1, L2, p2);
            const WeibullTypeTail t1(1.0, 0.0, L1, p1), t2(1.0, 0.0, L2, p2);
            const auto k = product_constants(t1, t2);
            for (double x : {10.0, 1e3}) {
                const auto m = minimize_psi(s, x);
                worst_arg = std::max(worst_arg, rel(m.argmin, k.z(x)));
                worst_val = std::max(worst_val, rel(m.value, k.B * std::pow(x, k.rate_exponent)));
            }
        }
        return std::pair{worst_arg < 1e-8 && worst_val < 1e-10,
                         format("max argmin rel err %.3g, max minimum rel err %.3g", worst_arg, worst_val)};
    });

    criterion(2, "exponential closed-form oracle", [] {
        double worst = 0.0;
        for (double x : {1.0, 4.0, 25.0, 100.0}) {
            const double exact = 2.0 * std::sqrt(x) * std::cyl_bessel_k(1.0, 2.0 * std::sqrt(x));
            const double q = survival_product_quadrature(exp1, exp1, DependenceSpec::independent(), x);
            worst = std::max(worst, std::abs(std::expm1(q - std::log(exact))));
        }
        return std::pair{worst < 1e-8, format("max rel err %.3g vs 2 sqrt(x) K1(2 sqrt(x))", worst)};
    });

    criterion(3, "product tail convergence rate", [] {
        const auto form = product_tail_polynomial(exp1.asymptotic_tail(), exp1.asymptotic_tail());
        bool ok = true;
        double prev = INFINITY;
        std::string detail;
        for (double x : {100.0, 400.0, 2500.0}) {
            const double q = survival_product_quadrature(exp1, exp1, DependenceSpec::independent(), x);
            const double gap = std::abs(std::expm1(q - form.log_value(x)));
            const double predicted = 3.0 / (16.0 * std::sqrt(x));
            ok = ok && std::abs(gap / predicted - 1.0) <= 0.2 && gap < prev;
            prev = gap;
            detail += format("x=%g gap %.4g (predicted %.4g) ", x, gap, predicted);
        }
        return std::pair{ok, detail};
    });

    criterion(4, "FGM leading factor", [] {
        const double x = 1e4;
        const double indep = survival_product_quadrature(exp1, exp1, DependenceSpec::independent(), x);
        bool ok = true;
        std::string detail;
        for (double tau : {-0.5, 0.5}) {
            const double ratio = std::exp(survival_product_quadrature(exp1, exp1, DependenceSpec::fgm(tau), x) - indep);
            ok = ok && rel(ratio, 1.0 - tau) < 0.02;
            detail += format("tau=%g ratio %.6g (target %g) ", tau, ratio, 1.0 - tau);
        }
        return std::pair{ok, detail};
    });

    criterion(5, "Gaussian product", [] {
        bool ok = true;
        double at50 = 0.0;
        std::string detail;
        for (double rho : {0.0, 0.5}) {
            const auto form = gaussian_product_tail(rho);
            double prev = INFINITY;
            for (double x : {10.0, 25.0, 50.0}) {
                const double gap = std::abs(std::expm1(gaussian_product_quadrature(rho, x) - form.log_value(x)));
                ok = ok && gap < prev;
                prev = gap;
                if (rho == 0.0 && x == 50.0) at50 = gap;
            }
            detail += format("rho=%g final gap %.4g ", rho, prev);
        }
        return std::pair{ok && at50 < 0.05, detail};
    });

    criterion(6, "product density", [] {
        const double x = 1e4;
        const double q = density_product_quadrature(exp1, exp1, x);
        const auto form = product_pdf_asymptotic(exp1.asymptotic_tail(), exp1.asymptotic_tail());
        const double gap = std::abs(std::expm1(q - form.log_value(x)));
        const double exact = std::log(2.0 * std::cyl_bessel_k(0.0, 2.0 * std::sqrt(x)));
        const double err = std::abs(std::expm1(q - exact));
        return std::pair{gap < 0.01 && err < 1e-8, format("|ratio-1| %.4g, quadrature vs 2 K0 rel err %.3g", gap, err)};
    });

    criterion(7, "Laplace engine", [] {
        const auto s = make_saddle(1.0, 1.0, 1.0, 1.0);
        double errs[3];
        const double lambdas[3] = {100.0, 1000.0, 10000.0};
        for (int i = 0; i < 3; ++i) {
            errs[i] = std::abs(
                std::expm1(laplace_log_integral(0.0, s, lambdas[i]) - laplace_exact_log_integral(0.0, s, lambdas[i])));
        }
        const double r1 = errs[0] / errs[1], r2 = errs[1] / errs[2];
        const bool ok = errs[0] < 0.01 && errs[1] < 0.001 && r1 >= 8 && r1 <= 12 && r2 >= 8 && r2 <= 12;
        return std::pair{ok, format("rel err %.4g at 100, %.4g at 1000, ratio %.4g", errs[0], errs[1], r1)};
    });

    criterion(8, "algebraic identities", [] {
        SplitMix64 rng(23);
        const auto in = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
        double worst = 0.0;
        // discrepancy in units of the log value's magnitude
        const auto gap = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
        const auto compare = [&](const AsymptoticForm& a, const AsymptoticForm& b) {
            for (double x : {2.0, 50.0, 1e3, 1e5}) worst = std::max(worst, gap(a.log_value(x), b.log_value(x)));
        };
        for (int i = 0; i < 20; ++i) {
            const WeibullTypeTail t1(in(0.1, 5), in(-2, 2), in(0.2, 5), in(0.2, 5));
            const WeibullTypeTail t2(in(0.1, 5), in(-2, 2), in(0.2, 5), in(0.2, 5));
            CustomDependence unit;
            unit.D = 1.0;
            compare(product_tail_dependent(t1, t2, DependenceSpec::custom(unit)), product_tail_polynomial(t1, t2));
            compare(m_fold_product_tail(t1, 2), product_tail_polynomial(t1, t1));

            // Gamma(shape a, scale l) pair against the worked closed form
            const double a = in(0.2, 6), l = in(0.2, 5);
            const auto gamma = OracleDistribution::gamma(a, l).asymptotic_tail();
            const auto mfold = m_fold_product_tail(gamma, 2);
            const double m = 2.0;
            for (double x : {2.0, 50.0, 1e3, 1e5}) {
                const double display = 0.5 * std::log(std::pow(2.0 * std::numbers::pi, m - 1) / (m * std::pow(l, m - 1))) -
                                       (m * a - m) * std::log(l) - m * std::lgamma(a) +
                                       (2 * m * a - m - 1) / (2 * m) * std::log(x) - m / l * std::pow(x, 1.0 / m);
                worst = std::max(worst, gap(mfold.log_value(x), display));
            }
        }
        return std::pair{worst < 1e-12, format("max scaled log discrepancy %.3g", worst)};
    });

    criterion(9, "Brownian supremum", [] {
        double worst_q = 0.0, worst_f = 0.0;
        const auto form = bm_sup_tail(exp1.asymptotic_tail());
        for (double x : {1.0, 5.0, 10.0}) {
            const double target = -std::numbers::sqrt2 * x;
            worst_q = std::max(worst_q, std::abs(bm_sup_quadrature(exp1, x) - target));
            worst_f = std::max(worst_f, std::abs(form.log_value(x) - target));
        }
        const bool ok = worst_q < 1e-9 && worst_f < 1e-12 && std::abs(form.log_prefactor()) < 1e-12 &&
                        std::abs(form.rate() - std::numbers::sqrt2) < 1e-12;
        return std::pair{ok, format("quadrature err %.3g, closed form err %.3g", worst_q, worst_f)};
    });

    criterion(10, "EGHD joint tail", [] {
        double worst = 0.0;
        for (const GigParams g : {GigParams{1.0, 1.0, 1.0}, GigParams{-0.7, 2.0, 1.5}, GigParams{2.5, 0.5, 0.8}}) {
            for (double rho : {0.0, 0.5}) {
                const auto general =
                    scaled_elliptical_joint_tail({rho, gaussian_radial_tail(), gig_sqrt_tail(g), 0.0});
                const auto closed = eghd_joint_tail(g, rho);
                for (double x : {5.0, 10.0, 20.0}) {
                    worst = std::max(worst, std::abs(general.log_value(x) - closed.log_value(x)));
                }
            }
        }
        const double chi = weak_tail_dependence(EghdForm{0.0});
        const double chi_err = std::abs(chi - (std::numbers::sqrt2 - 1.0));
        const double k_half = rel(bessel_k(0.5, 2.0), std::sqrt(std::numbers::pi / 4.0) * std::exp(-2.0));
        const double k1 = rel(bessel_k(1.0, 4.0), 0.01248349888726843);
        const bool ok = worst < 1e-10 && chi_err < 1e-12 && k_half < 1e-10 && k1 < 1e-8;
        char buf[256];
        std::snprintf(buf, sizeof buf, "max log gap %.3g, chi err %.3g, K1/2 err %.3g, K1 err %.3g", worst, chi_err,
                      k_half, k1);
        return std::pair{ok, std::string(buf)};
    });

    criterion(11, "Monte Carlo validation", [] {
        const auto start = std::chrono::steady_clock::now();
        bool ok = true;
        std::string detail;
        const double x = 4.0;
        for (const auto& [name, dep] : {std::pair{"indep", DependenceSpec::independent()},
                                        std::pair{"fgm-0.5", DependenceSpec::fgm(-0.5)},
                                        std::pair{"fgm+0.5", DependenceSpec::fgm(0.5)}}) {
            const auto mc = mc_product_tail(exp1, exp1, dep, x, 1000000, 2024);
            const double q = std::exp(survival_product_quadrature(exp1, exp1, dep, x));
            const double z = std::abs(mc.estimate - q) / mc.standard_error;
            ok = ok && z < 3.0;
            detail += std::string(name) + format(" z=%.2f ", z);
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return std::pair{ok && secs < 30.0, detail + format("runtime %.2fs", secs)};
    });

    criterion(12, "dependence condition checker", [] {
        const auto t = exp1.asymptotic_tail();
        const std::vector<double> grid{1e2, 1e3, 1e4, 1e5, 1e6};
        DependenceCheckOptions opts;
        opts.cdf1 = [](double u) { return exp1.cdf(u); };
        opts.cdf2 = opts.cdf1;
        const auto good = check_dependence_condition(DependenceSpec::fgm(0.3), t, t, grid, 0.01, opts);

        CustomDependence wrong;
        wrong.D = 1.0;
        wrong.c = [](double x, double y) { return 1.0 + 0.3 * exp1.cdf(x / y) * (1.0 - 2.0 * exp1.cdf(y)); };
        const auto bad = check_dependence_condition(DependenceSpec::custom(wrong), t, t, grid, 0.01);
        const bool ok = good.verdict && good.max_deviation.back() < 0.01 && !bad.verdict;
        return std::pair{ok, format("tau=0.3 final deviation %.3g, wrong-D final deviation %.3g",
                                    good.max_deviation.back(), bad.max_deviation.back())};
    });

    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
