#include "stands/stats.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "stands/errors.hpp"

namespace stands {
namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-15;

// Series expansion of P(a, x), converges fast for x < a + 1.
double lower_gamma_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) = 1 - P(a, x), modified Lentz, for x >= a + 1.
double upper_gamma_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_lower_gamma(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) {
        throw std::invalid_argument(
            fmt::format("regularized_lower_gamma: need a > 0 and x >= 0, got a={} x={}", a, x));
    }
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return lower_gamma_series(a, x);
    return 1.0 - upper_gamma_cf(a, x);
}

double chi_squared_cdf(int dof, double x) {
    if (dof < 1) throw std::invalid_argument(fmt::format("chi_squared_cdf: dof must be >= 1, got {}", dof));
    if (x <= 0.0) return 0.0;
    return regularized_lower_gamma(static_cast<double>(dof) / 2.0, x / 2.0);
}

double chi_squared_quantile(int dof, double alpha) {
    if (dof < 1) {
        throw std::invalid_argument(fmt::format("chi_squared_quantile: dof must be >= 1, got {}", dof));
    }
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw std::invalid_argument(
            fmt::format("chi_squared_quantile: alpha must lie in (0, 1), got {}", alpha));
    }

    double lo = 0.0;
    double hi = static_cast<double>(dof);
    int doublings = 0;
    while (chi_squared_cdf(dof, hi) < alpha) {
        hi *= 2.0;
        if (++doublings > 400) {
            throw NonConvergence(
                fmt::format("chi_squared_quantile: failed to bracket dof={} alpha={}", dof, alpha));
        }
    }
    // Bisect to absolute tolerance 1e-9 in the quantile.
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (chi_squared_cdf(dof, mid) < alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace stands
