#pragma once

#include "levysde/core/error.hpp"
#include "levysde/core/stats.hpp"
#include "levysde/model/modulus.hpp"
#include "levysde/model/osgood.hpp"
#include "levysde/stability/bihari.hpp"

#include <cmath>
#include <string>

namespace levysde {

/// delta(eps) for mean-square stability: the largest delta < eps/2 with
///   int_delta^{eps/2} dq / kappa3(q) >= T,   kappa3 = 16 T sup(lambda) kappa.
struct DeltaCertificate {
    double eps = 0.0;
    double eps1 = 0.0;  // eps / 2
    double delta = 0.0;
    double kappa3_scale = 0.0;  // 16 T sup lambda
    double horizon = 0.0;
    /// int_delta^{eps1} dq / kappa3, re-integrated directly.
    double integral = 0.0;
    std::string kappa3;
};

inline std::string format_kappa3(const ConcaveModulus& kappa, double scale) {
    return format_double(scale) + " * " + kappa.name() + "(q)";
}

struct CertificateOptions {
    /// delta is solved for T (1 + margin) so the emitted certificate clears T
    /// despite root-finding and quadrature error.
    double margin = 1e-9;
    double tol = 1e-13;
};

inline DeltaCertificate delta_for_epsilon(const BihariTransform& g, double horizon, double eps,
                                          const CertificateOptions& opt = {}) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InputDomainError("delta(eps) needs eps > 0");
    if (!(horizon > 0.0)) throw InputDomainError("delta(eps) needs T > 0");
    const ConcaveModulus& kappa = g.modulus();

    DeltaCertificate c;
    c.eps = eps;
    c.eps1 = 0.5 * eps;
    c.horizon = horizon;
    c.kappa3_scale = 16.0 * horizon * kappa.lambda().sup();
    c.kappa3 = format_kappa3(kappa, c.kappa3_scale);
    if (!(c.kappa3_scale > 0.0)) throw NoCertificateError("kappa3 vanishes identically (sup lambda = 0)");

    // int_delta^{eps1} dq/kappa3 = (G(eps1) - G(delta)) / scale
    const double target = c.kappa3_scale * horizon * (1.0 + opt.margin);
    const double x = g.G(c.eps1) - target;
    if (x < g.lower_limit() || (!kappa.declared_osgood() && x <= g.lower_limit()))
        throw NoCertificateError("no delta: int_0^{eps/2} dq/kappa3 < T for modulus " + kappa.name() +
                                 " (not Osgood), eps=" + std::to_string(eps));
    try {
        c.delta = g.G_inv(x);
    } catch (const OutOfDomainError& e) {
        throw NoCertificateError(std::string("no delta for eps=") + std::to_string(eps) + ": " + e.what());
    }
    if (!(c.delta > 0.0)) throw NoCertificateError("delta underflowed to 0 for eps=" + std::to_string(eps));
    c.integral = reciprocal_integral(kappa, c.delta, c.eps1, opt.tol) / c.kappa3_scale;
    if (c.integral < horizon || !(c.delta < c.eps1))
        throw NoCertificateError("delta certificate failed its own re-check for eps=" + std::to_string(eps));
    return c;
}

inline DeltaCertificate delta_for_epsilon(const ConcaveModulus& kappa, double horizon, double eps,
                                          const CertificateOptions& opt = {}) {
    return delta_for_epsilon(BihariTransform(kappa), horizon, eps, opt);
}

}  // namespace levysde
