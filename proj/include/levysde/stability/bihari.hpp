#pragma once

#include "levysde/core/error.hpp"
#include "levysde/core/quadrature.hpp"
#include "levysde/model/modulus.hpp"
#include "levysde/model/osgood.hpp"
#include "levysde/model/rate.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace levysde {

/// G(q) = int_1^q ds / kappa(s) by direct quadrature (negative for q < 1).
inline double bihari_G(const ConcaveModulus& kappa, double q, double tol = 1e-12) {
    if (!(q > 0.0)) throw InputDomainError("G(q) needs q > 0");
    if (q == 1.0) return 0.0;
    return reciprocal_integral(kappa, 1.0, q, tol);
}

/// Tabulated G with its inverse, for repeated evaluation.
///
/// G is tabulated at q = e^u for integer u in [ln floor, -ln floor]; values in
/// between add one local quadrature. Below the floor kappa is its linear chord,
/// so G continues as G(floor) + (floor / kappa(floor)) ln(q / floor). That
/// tail is only used for moduli declared Osgood; for the others the range of G
/// is cut at G(floor), which stands in for G(0+).
class BihariTransform {
public:
    explicit BihariTransform(ConcaveModulus kappa, double tol = 1e-13) : kappa_(std::move(kappa)), tol_(tol) {
        const int lo = static_cast<int>(std::ceil(std::log(kModulusFloor)));
        u_.reserve(static_cast<std::size_t>(2 * -lo + 1));
        for (int u = lo; u <= -lo; ++u) u_.push_back(static_cast<double>(u));
        u_.front() = std::log(kModulusFloor);
        u_.back() = -std::log(kModulusFloor);
        g_.assign(u_.size(), 0.0);
        const auto zero = static_cast<std::size_t>(-lo);  // u_[zero] == 0
        for (std::size_t j = zero; j + 1 < u_.size(); ++j) g_[j + 1] = g_[j] + segment(u_[j], u_[j + 1]);
        for (std::size_t j = zero; j > 0; --j) g_[j - 1] = g_[j] - segment(u_[j - 1], u_[j]);
        floor_slope_ = kModulusFloor / kappa_(kModulusFloor);
    }

    const ConcaveModulus& modulus() const noexcept { return kappa_; }

    /// Infimum of the representable range: -inf for Osgood moduli, G(floor) otherwise.
    double lower_limit() const noexcept {
        return kappa_.declared_osgood() ? -std::numeric_limits<double>::infinity() : g_.front();
    }
    double upper_limit() const noexcept { return g_.back(); }

    /// G(q); q = 0 maps to lower_limit().
    double G(double q) const {
        if (q < 0.0 || std::isnan(q)) throw InputDomainError("G(q) needs q >= 0");
        if (q == 0.0) return lower_limit();
        if (q == 1.0) return 0.0;
        const double u = std::log(q);
        if (u <= u_.front()) {
            if (!kappa_.declared_osgood()) return g_.front();
            return g_.front() + floor_slope_ * (u - u_.front());
        }
        if (u >= u_.back()) return g_.back() + segment(u_.back(), u);
        const std::size_t j = segment_index(u);
        return g_[j] + segment(u_[j], u);
    }

    /// G^-1(x) for x in the closure of G's range.
    double G_inv(double x) const {
        if (std::isnan(x)) throw OutOfDomainError("G^-1 argument is NaN");
        if (x < lower_limit())
            throw OutOfDomainError("G^-1(" + std::to_string(x) + ") is outside Dom(G^-1): G is bounded below by " +
                                   std::to_string(lower_limit()) + " for modulus " + kappa_.name());
        if (x > upper_limit())
            throw OutOfDomainError("G^-1(" + std::to_string(x) + ") exceeds the tabulated range of G");
        if (x == 0.0) return 1.0;
        if (x <= g_.front()) {
            if (!kappa_.declared_osgood()) return 0.0;  // x == G(0+)
            return std::exp(u_.front() + (x - g_.front()) / floor_slope_);
        }
        const auto it = std::upper_bound(g_.begin(), g_.end(), x);
        const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(it - g_.begin()), g_.size() - 1) - 1;
        double lo = u_[j], hi = u_[j + 1];
        if (g_[j] == x) return std::exp(lo);
        if (g_[j + 1] == x) return std::exp(hi);
        auto f = [&](double u) { return g_[j] + segment(u_[j], u) - x; };
        std::uintmax_t iters = 200;
        const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, g_[j] - x, g_[j + 1] - x,
                                                              boost::math::tools::eps_tolerance<double>(52), iters);
        return std::exp(0.5 * (a + b));
    }

    /// G^-1(G(u0) + int_0^t v): the Bihari bound on u(t). u0 = 0 with an Osgood
    /// modulus gives 0.
    double bound(double u0, const Rate& v, double t) const {
        if (!(u0 >= 0.0)) throw InputDomainError("Bihari bound needs u0 >= 0");
        if (!(t >= 0.0)) throw InputDomainError("Bihari bound needs t >= 0");
        if (u0 == 0.0 && kappa_.declared_osgood()) return 0.0;
        return G_inv(G(u0) + v.integral(t));
    }

private:
    double segment(double u_lo, double u_hi) const {
        if (u_lo == u_hi) return 0.0;
        return reciprocal_integral(kappa_, std::exp(u_lo), std::exp(u_hi), tol_);
    }

    std::size_t segment_index(double u) const {
        const auto it = std::upper_bound(u_.begin(), u_.end(), u);
        return static_cast<std::size_t>(it - u_.begin()) - 1;
    }

    ConcaveModulus kappa_;
    double tol_;
    std::vector<double> u_;
    std::vector<double> g_;
    double floor_slope_ = 0.0;
};

inline double bihari_G_inv(const ConcaveModulus& kappa, double x) { return BihariTransform(kappa).G_inv(x); }

/// u(t) <= G^-1(G(u0) + int_0^t v(s) ds) whenever u(t) <= u0 + int_0^t v kappa(u).
inline double bihari_bound(double u0, const Rate& v, const ConcaveModulus& kappa, double t) {
    return BihariTransform(kappa).bound(u0, v, t);
}

/// Inputs and value of one Bihari bound evaluation, for reporting.
struct BihariBound {
    std::string modulus;
    double u0 = 0.0;
    double t = 0.0;
    double v_integral = 0.0;
    double argument = 0.0;  // G(u0) + int v
    double value = 0.0;
    bool in_domain = true;
};

inline BihariBound evaluate_bihari(const BihariTransform& g, double u0, const Rate& v, double t) {
    BihariBound b;
    b.modulus = g.modulus().name();
    b.u0 = u0;
    b.t = t;
    b.v_integral = v.integral(t);
    b.argument = g.G(u0) + b.v_integral;
    try {
        b.value = g.bound(u0, v, t);
    } catch (const OutOfDomainError&) {
        b.in_domain = false;
        b.value = std::numeric_limits<double>::infinity();
    }
    return b;
}

}  // namespace levysde
