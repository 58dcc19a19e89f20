#pragma once

// Quadrature on log-scale integrands.
//
// integrate_log() evaluates log ∫ exp(log_f(u)) du over a finite u-range.
// The integrand is shifted by its maximum before exponentiation so that
// integrands spanning hundreds of log-units neither overflow nor underflow.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "errors.hpp"
#include "special_functions.hpp"

namespace tailkit::quad {

struct Options {
    double rel_tol = 1e-10;
    int max_panels = 10000;
    double lower = -60.0;
    double upper = 60.0;
    int scan_points = 2049;
    /// Region where log_f < max - cutoff is treated as zero.
    double log_cutoff = 90.0;
};

struct LogIntegral {
    double log_value = special::kNegInf;
    QuadratureDiagnostics diagnostics;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights at the odd Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel kronrod15(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[j] * pair;
        if (j % 2 == 1) {
            gauss += kGaussWeights[j / 2] * pair;
        }
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

template <class LogF>
double golden_max(const LogF& log_f, double a, double b, double& arg) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = log_f(c);
    double fd = log_f(d);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * (1.0 + std::abs(a)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = log_f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = log_f(d);
        }
    }
    arg = fc > fd ? c : d;
    return std::max(fc, fd);
}

}  // namespace detail

/// log ∫_{opts.lower}^{opts.upper} exp(log_f(u)) du.
template <class LogF>
LogIntegral integrate_log(const LogF& log_f, const Options& opts = {}) {
    LogIntegral result;
    result.diagnostics.lower = opts.lower;
    result.diagnostics.upper = opts.upper;
    if (!(opts.upper > opts.lower)) {
        return result;
    }

    const int n = std::max(opts.scan_points, 3);
    const double step = (opts.upper - opts.lower) / (n - 1);
    std::vector<double> grid(n);
    int best = -1;
    double peak = special::kNegInf;
    for (int i = 0; i < n; ++i) {
        const double u = opts.lower + i * step;
        grid[i] = log_f(u);
        if (std::isnan(grid[i])) {
            throw QuadratureFailure("integrand returned NaN", result.diagnostics);
        }
        if (grid[i] > peak) {
            peak = grid[i];
            best = i;
        }
    }
    if (best < 0 || peak == special::kNegInf) {
        return result;
    }

    double peak_arg = opts.lower + best * step;
    {
        const double a = opts.lower + std::max(best - 1, 0) * step;
        const double b = opts.lower + std::min(best + 1, n - 1) * step;
        double arg = peak_arg;
        const double refined = detail::golden_max(log_f, a, b, arg);
        if (refined > peak) {
            peak = refined;
            peak_arg = arg;
        }
    }

    const double floor = peak - opts.log_cutoff;
    int first = best;
    int last = best;
    for (int i = 0; i < n; ++i) {
        if (grid[i] >= floor) {
            first = std::min(first, i);
            last = std::max(last, i);
        }
    }
    const double lo = opts.lower + std::max(first - 1, 0) * step;
    const double hi = opts.lower + std::min(last + 1, n - 1) * step;

    const auto shifted = [&](double u) {
        const double v = log_f(u);
        return v == special::kNegInf ? 0.0 : std::exp(v - peak);
    };

    std::vector<double> breaks;
    constexpr int kInitialPanels = 16;
    for (int k = 0; k <= kInitialPanels; ++k) {
        breaks.push_back(lo + (hi - lo) * k / kInitialPanels);
    }
    if (peak_arg > lo && peak_arg < hi) {
        breaks.push_back(peak_arg);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    std::priority_queue<detail::Panel> panels;
    double total = 0.0;
    double total_error = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        auto p = detail::kronrod15(shifted, breaks[k], breaks[k + 1]);
        total += p.value;
        total_error += p.error;
        panels.push(p);
    }

    const double min_width = 1e-13 * (hi - lo);
    // rounding in log_f near a large peak bounds the attainable accuracy
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(peak));
    const double tol = std::max(opts.rel_tol, noise);
    while (total_error > tol * std::abs(total)) {
        if (static_cast<int>(panels.size()) >= opts.max_panels) {
            result.diagnostics.panels = static_cast<int>(panels.size());
            result.diagnostics.estimated_rel_error = total_error / std::abs(total);
            result.diagnostics.lower = lo;
            result.diagnostics.upper = hi;
            result.diagnostics.log_shift = peak;
            throw QuadratureFailure("adaptive quadrature hit the panel limit", result.diagnostics);
        }
        const detail::Panel worst = panels.top();
        if (worst.b - worst.a < min_width) {
            break;
        }
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const auto left = detail::kronrod15(shifted, worst.a, mid);
        const auto right = detail::kronrod15(shifted, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    result.diagnostics.panels = static_cast<int>(panels.size());
    result.diagnostics.estimated_rel_error = total > 0.0 ? total_error / total : 0.0;
    result.diagnostics.lower = lo;
    result.diagnostics.upper = hi;
    result.diagnostics.log_shift = peak;
    result.log_value = total > 0.0 ? peak + std::log(total) : special::kNegInf;
    return result;
}

/// Tanh-sinh (double exponential) rule for a smooth integrand on [a, b].
template <class F>
double tanh_sinh(const F& f, double a, double b, double rel_tol = 1e-14, int max_level = 12) {
    constexpr double kTMax = 3.2;
    const double half_pi = std::numbers::pi / 2.0;
    const double width = b - a;

    const auto node = [&](double t) {
        const double s = half_pi * std::sinh(std::abs(t));
        const double e = std::exp(2.0 * s);
        // distance to the nearer endpoint, computed without cancellation
        const double offset = width / (1.0 + e);
        const double x = t >= 0.0 ? b - offset : a + offset;
        const double ch = std::cosh(s);
        const double weight = 0.5 * width * half_pi * std::cosh(t) / (ch * ch);
        if (weight == 0.0 || offset <= 0.0) return 0.0;
        return weight * f(x);
    };

    double h = 1.0;
    double sum = node(0.0);
    for (int k = 1; k <= static_cast<int>(kTMax); ++k) {
        sum += node(k) + node(-k);
    }
    double estimate = h * sum;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        for (double t = h; t <= kTMax; t += 2.0 * h) {
            sum += node(t) + node(-t);
        }
        const double next = h * sum;
        if (level >= 3 && std::abs(next - estimate) <= rel_tol * std::abs(next)) {
            return next;
        }
        estimate = next;
    }
    return estimate;
}

}  // namespace tailkit::quad
