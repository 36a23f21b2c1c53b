#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace levysde::quadrature {

struct Result {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive 31-point Gauss-Kronrod on [a, b], split at any interior breakpoints.
/// Orientation is respected: integrate(f, b, a) == -integrate(f, a, b).
template <typename F>
Result integrate(F&& f, double a, double b, double tol = 1e-10, std::span<const double> breakpoints = {}) {
    if (a == b) return {};
    const double sign = a < b ? 1.0 : -1.0;
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);

    std::vector<double> cuts{lo};
    for (double p : breakpoints)
        if (p > lo && p < hi) cuts.push_back(p);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());

    Result out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        // Boost compares the unscaled [-1, 1] error with the scaled tolerance,
        // so narrow pieces never converge; integrate on [-1, 1] directly.
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        const double half = 0.5 * (cuts[i + 1] - cuts[i]);
        auto g = [&](double x) { return f(mid + half * x) * half; };
        double err = 0.0;
        out.value += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, -1.0, 1.0, 20, tol, &err);
        out.error += err;
    }
    out.value *= sign;
    return out;
}

/// Integral of f over [a, b] (0 < a, b) computed in u = ln q, where the
/// integrand becomes f(e^u) e^u. Removes the stiffness of integrands that blow
/// up like powers or logarithms at q -> 0+.
template <typename F>
Result integrate_log(F&& f, double a, double b, double tol = 1e-10, std::span<const double> breakpoints = {}) {
    std::vector<double> log_breaks;
    log_breaks.reserve(breakpoints.size());
    for (double p : breakpoints)
        if (p > 0.0) log_breaks.push_back(std::log(p));
    auto g = [&f](double u) {
        const double q = std::exp(u);
        return f(q) * q;
    };
    return integrate(g, std::log(a), std::log(b), tol, log_breaks);
}

}  // namespace levysde::quadrature
