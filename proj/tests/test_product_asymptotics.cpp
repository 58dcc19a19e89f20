#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tailkit/tailkit.hpp"

using namespace tailkit;

namespace {

const WeibullTypeTail unit = make_weibull_tail(1, 0, 1, 1);
const double kUnitAt100 = 0.5 * std::log(std::numbers::pi) + 0.25 * std::log(100.0) - 20.0;

WeibullTypeTail gamma_tail(double shape, double scale) { return OracleDistribution::gamma(shape, scale).asymptotic_tail(); }

}  // namespace

TEST(ProductTail, DependentExamples) {
    const auto indep = product_tail_dependent(unit, unit, DependenceSpec::independent());
    EXPECT_NEAR(indep.log_value(100.0), kUnitAt100, 1e-12);
    const auto fgm = product_tail_dependent(unit, unit, DependenceSpec::fgm(0.5));
    EXPECT_NEAR(fgm.log_value(100.0), kUnitAt100 + std::log(0.5), 1e-12);
    EXPECT_NEAR(fgm.log_value(100.0), -18.9695, 5e-5);
    EXPECT_THROW(product_tail_dependent(unit, unit, DependenceSpec::fgm(1.0)), DegenerateLeadingCoefficient);
}

TEST(ProductTail, PolynomialExamples) {
    EXPECT_NEAR(product_tail_polynomial(unit, unit).log_value(100.0), -18.276342510578277, 1e-12);
    const auto g = gamma_tail(2.0, 1.0);
    EXPECT_NEAR(product_tail_polynomial(g, unit).log_value(100.0),
                product_tail_dependent(g, unit, DependenceSpec::independent()).log_value(100.0), 1e-12);
    const WeibullTypeTail custom([](double u) { return std::log(std::log(u + 3.0)); }, 0.0, 1.0, 1.0);
    EXPECT_THROW(product_tail_polynomial(custom, unit), ModulationNotPolynomial);
}

TEST(ProductTail, CustomModulationEnters) {
    const WeibullTypeTail custom([](double u) { return std::log(std::log(u + 3.0)); }, 0.0, 1.0, 1.0);
    const auto f = product_tail_dependent(custom, unit, DependenceSpec::independent());
    const auto base = product_tail_polynomial(unit, unit);
    const auto k = product_constants(custom, unit);
    for (double x : {10.0, 1e3, 1e5}) {
        EXPECT_NEAR(f.log_value(x) - base.log_value(x), std::log(std::log(x / k.z(x) + 3.0)), 1e-12);
    }
}

TEST(ProductTail, SpecializationIdentities) {
    SplitMix64 rng(31);
    const auto in = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
    for (int i = 0; i < 25; ++i) {
        const auto t1 = make_weibull_tail(in(0.1, 4), in(-2, 2), in(0.2, 4), in(0.2, 4));
        const auto t2 = make_weibull_tail(in(0.1, 4), in(-2, 2), in(0.2, 4), in(0.2, 4));
        const auto dep = product_tail_dependent(t1, t2, DependenceSpec::independent());
        const auto poly = product_tail_polynomial(t1, t2);
        const auto self = product_tail_polynomial(t1, t1);
        const auto fold = m_fold_product_tail(t1, 2);
        const double tau = in(-0.99, 0.99);
        const auto fgm = product_tail_dependent(t1, t2, DependenceSpec::fgm(tau));
        for (double x : {10.0, 1e2, 1e3, 1e4}) {
            const double scale = std::max(1.0, std::abs(poly.log_value(x)));
            EXPECT_LT(std::abs(dep.log_value(x) - poly.log_value(x)) / scale, 1e-12);
            EXPECT_LT(std::abs(fold.log_value(x) - self.log_value(x)) / std::max(1.0, std::abs(self.log_value(x))),
                      1e-12);
            EXPECT_NEAR((fgm.log_value(x) - dep.log_value(x)) / scale, std::log1p(-tau) / scale, 1e-12);
        }
    }
}

TEST(MFold, Examples) {
    const auto t = make_weibull_tail(2.0, 0.5, 1.5, 0.7);
    const auto one = m_fold_product_tail(t, 1);
    EXPECT_NEAR(one.log_prefactor(), std::log(2.0), 1e-15);
    EXPECT_NEAR(one.kappa(), 0.5, 1e-15);
    EXPECT_NEAR(one.rate(), 1.5, 1e-15);
    EXPECT_NEAR(one.exponent(), 0.7, 1e-15);

    EXPECT_NEAR(m_fold_product_tail(unit, 2).log_value(100.0), kUnitAt100, 1e-12);
    const double three = -0.5 * std::log(3.0) + std::log(2.0 * std::numbers::pi) + std::log(1000.0) / 3.0 - 30.0;
    EXPECT_NEAR(m_fold_product_tail(unit, 3).log_value(1000.0), three, 1e-12);
    EXPECT_NEAR(three, -26.408843984930664, 1e-12);

    EXPECT_THROW(m_fold_product_tail(unit, 0), DomainError);
    EXPECT_THROW(m_fold_product_tail(unit, 65), DomainError);
    EXPECT_TRUE(std::isfinite(m_fold_product_tail(unit, 64).log_value(1e10)));
}

TEST(MFold, GammaWorkedForm) {
    SplitMix64 rng(41);
    for (int i = 0; i < 20; ++i) {
        const double a = 0.3 + 5.0 * rng.uniform(), l = 0.3 + 4.0 * rng.uniform();
        const int m = 2 + static_cast<int>(rng.next() % 4);
        const auto f = m_fold_product_tail(gamma_tail(a, l), m);
        for (double x : {5.0, 100.0, 1e4}) {
            const double display = 0.5 * ((m - 1) * std::log(2.0 * std::numbers::pi / l) - std::log(m)) -
                                   (m * a - m) * std::log(l) - m * std::lgamma(a) +
                                   (2.0 * m * a - m - 1.0) / (2.0 * m) * std::log(x) - m / l * std::pow(x, 1.0 / m);
            EXPECT_LT(std::abs(f.log_value(x) - display) / std::max(1.0, std::abs(display)), 1e-12);
        }
    }
}

TEST(ProductPdf, Examples) {
    const auto pdf = product_pdf_asymptotic(unit, unit);
    EXPECT_NEAR(pdf.log_value(100.0), 0.5 * std::log(std::numbers::pi) - 0.25 * std::log(100.0) - 20.0, 1e-12);

    const double L = 0.7, p = 1.6;
    const auto t = make_weibull_tail(1.3, 0.4, L, p);
    const auto sym_pdf = product_pdf_asymptotic(t, t);
    const auto sym = product_tail_polynomial(t, t);
    for (double x : {3.0, 30.0, 300.0}) {
        EXPECT_NEAR(sym_pdf.log_value(x) - sym.log_value(x), std::log(L * p) + (p / 2.0 - 1.0) * std::log(x), 1e-12);
    }
}

TEST(ProductPdf, DensityRelation) {
    SplitMix64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto t1 = make_weibull_tail(1.0 + rng.uniform(), rng.uniform(), 0.2 + 3 * rng.uniform(), 0.2 + 3 * rng.uniform());
        const auto t2 = make_weibull_tail(1.0 + rng.uniform(), rng.uniform(), 0.2 + 3 * rng.uniform(), 0.2 + 3 * rng.uniform());
        const auto k = product_constants(t1, t2);
        const auto pdf = product_pdf_asymptotic(t1, t2);
        const auto surv = product_tail_polynomial(t1, t2);
        for (double x : {10.0, 1e3}) {
            const double expected = std::log(t1.L() * t1.p() * std::pow(k.A, -t1.p())) + (k.rate_exponent - 1) * std::log(x);
            EXPECT_NEAR(pdf.log_value(x) - surv.log_value(x), expected, 1e-10);
        }
    }
}

TEST(ProductPdf, GammaWorkedDensity) {
    // h(x) ~ (x^{1/m - 1} / lambda) P(prod > x) for m = 2
    const double a = 2.2, l = 1.7;
    const auto g = gamma_tail(a, l);
    const auto pdf = product_pdf_asymptotic(g, g);
    const auto surv = m_fold_product_tail(g, 2);
    for (double x : {10.0, 1e3, 1e5}) {
        EXPECT_NEAR(pdf.log_value(x), surv.log_value(x) - 0.5 * std::log(x) - std::log(l), 1e-12);
    }
}

TEST(GaussianProduct, Examples) {
    EXPECT_NEAR(gaussian_product_tail(0.0).log_value(10.0), -0.5 * std::log(20.0 * std::numbers::pi) - 10.0, 1e-12);
    EXPECT_NEAR(gaussian_product_tail(0.0).log_value(10.0), -12.070231079701696, 1e-12);
    EXPECT_NEAR(gaussian_product_tail(0.5).log_value(10.0),
                std::log(1.5) - 0.5 * std::log(20.0 * std::numbers::pi) - 20.0 / 3.0, 1e-12);
    EXPECT_NEAR(gaussian_product_tail(0.5).log_value(10.0), -8.3314, 5e-5);
    EXPECT_THROW(gaussian_product_tail(1.0), DomainError);
    EXPECT_THROW(gaussian_product_tail(-1.0), DomainError);
}

TEST(GaussianProduct, OutsideDependenceModel) {
    // the Gaussian pair has rate 1/(1+rho); the product-tail rate of its margins is 1
    const auto half_normal = OracleDistribution::half_normal().asymptotic_tail();
    const double B = product_constants(half_normal, half_normal).B;
    EXPECT_NE(gaussian_product_tail(0.5).rate(), B);
    EXPECT_NEAR(gaussian_product_tail(0.0).rate(), B, 1e-15);
}

TEST(DependenceCheck, Independent) {
    const auto r = check_dependence_condition(DependenceSpec::independent(), unit, unit, {1e2, 1e4}, 1e-6);
    for (double d : r.max_deviation) EXPECT_EQ(d, 0.0);
    EXPECT_TRUE(r.verdict);
}

TEST(DependenceCheck, FgmConverges) {
    const auto e = OracleDistribution::exponential(1.0);
    DependenceCheckOptions opts;
    opts.cdf1 = [e](double u) { return e.cdf(u); };
    opts.cdf2 = opts.cdf1;
    const auto r = check_dependence_condition(DependenceSpec::fgm(0.3), unit, unit, {1e2, 1e4, 1e6}, 0.01, opts);
    ASSERT_EQ(r.max_deviation.size(), 3u);
    EXPECT_GT(r.max_deviation[0], 0.0);
    EXPECT_LE(r.max_deviation[1], r.max_deviation[0]);
    EXPECT_LT(r.max_deviation.back(), 0.01);
    EXPECT_TRUE(r.verdict);
}

TEST(DependenceCheck, WrongCoefficientFails) {
    CustomDependence c;
    c.D = 0.5;
    c.c = [](double, double) { return 1.0; };
    const auto r = check_dependence_condition(DependenceSpec::custom(c), unit, unit, {1e2, 1e4, 1e6}, 0.01);
    EXPECT_FALSE(r.verdict);
    EXPECT_NEAR(r.max_deviation.back(), 0.5, 1e-12);
}

TEST(DependenceCheck, MissingEvaluator) {
    CustomDependence c;
    c.D = 1.0;
    EXPECT_THROW(check_dependence_condition(DependenceSpec::custom(c), unit, unit, {1e2}, 0.01), MissingEvaluator);
}

TEST(DependenceCheck, PowerDependence) {
    // c(x, y) = 2 x^{0.5} y^{-0.25} exactly matches D = 2, q1 = 0.5, q2 = 0.25
    CustomDependence c;
    c.D = 2.0;
    c.q1 = 0.5;
    c.q2 = 0.25;
    c.c = [](double x, double y) { return 2.0 * std::sqrt(x) * std::pow(y, -0.25); };
    const auto r = check_dependence_condition(DependenceSpec::custom(c), unit, unit, {1e2, 1e3}, 1e-6);
    for (double d : r.max_deviation) EXPECT_LT(d, 1e-10);
}
