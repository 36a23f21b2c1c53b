#pragma once

#include "levysde/core/error.hpp"
#include "levysde/core/stats.hpp"
#include "levysde/model/assumption.hpp"
#include "levysde/model/coefficients.hpp"
#include "levysde/model/osgood.hpp"
#include "levysde/noise/noise_bundle.hpp"
#include "levysde/picard/solver.hpp"
#include "levysde/stability/bihari.hpp"
#include "levysde/stability/certificate.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace levysde {

struct StabilityReport {
    double eps = 0.0;
    /// Certificate for eps; empty when none exists (non-Osgood kappa3).
    std::optional<DeltaCertificate> certificate;
    std::string certificate_note;
    /// Estimate of E sup_{s <= T} |X^xi(s) - X^eta(s)|^2 on common noise.
    Estimate gap;
    /// E|xi - eta|^2 and the 4x value the Bihari argument starts from.
    double initial_gap = 0.0;
    double initial_gap_x4 = 0.0;
    /// 4 E|xi - eta|^2 <= delta(eps).
    bool precondition_held = false;
    /// Non-Lipschitz condition verified and kappa Osgood: the delta certificate applies.
    bool certificate_applicable = false;
    std::size_t iterations = 0;
    bool pass = false;
};

struct StabilityOptions {
    SolveOptions solve{};
    bool verify_assumption = true;
    VerifierConfig verifier{};
};

/// Solves for X^xi and X^eta on one noise bundle in lockstep (same number of
/// Picard iterates, each stopping only when both have converged).
inline std::pair<IterateEnsemble, IterateEnsemble> solve_coupled(const CoefficientSet& cx, const CoefficientSet& cy,
                                                                 const std::shared_ptr<const NoiseBundle>& bundle,
                                                                 const SolveOptions& opt, std::size_t* iterations) {
    IterateEnsemble x = IterateEnsemble::initial(cx, bundle);
    IterateEnsemble y = IterateEnsemble::initial(cy, bundle);
    std::size_t k = 0;
    for (; k < opt.max_iter; ++k) {
        IterateEnsemble xn = picard_step(x, cx, opt.par);
        IterateEnsemble yn = picard_step(y, cy, opt.par);
        const double dx = sup_distance(x, xn).mean;
        const double dy = sup_distance(y, yn).mean;
        x = std::move(xn);
        y = std::move(yn);
        if (dx <= opt.tol && dy <= opt.tol) {
            ++k;
            break;
        }
    }
    if (iterations) *iterations = k;
    return {std::move(x), std::move(y)};
}

/// Empirical mean-square stability at one eps: X^xi and X^eta share the noise
/// bundle; pass iff E sup |X^xi - X^eta|^2 <= eps + 5 SE. The report also
/// records whether 4 E|xi - eta|^2 <= delta(eps) held and whether the
/// certificate applies at all (it does not when the non-Lipschitz condition fails).
inline StabilityReport mean_square_stability_test(const CoefficientSet& coeffs, const InitialLaw& xi,
                                                  const InitialLaw& eta, std::shared_ptr<const NoiseBundle> bundle,
                                                  double eps, const StabilityOptions& opt = {}) {
    if (!(eps > 0.0)) throw InputDomainError("stability test needs eps > 0");
    StabilityReport rep;
    rep.eps = eps;

    bool assumption_ok = true;
    if (opt.verify_assumption) assumption_ok = verify_assumption1(coeffs, opt.verifier).pass;

    try {
        rep.certificate = delta_for_epsilon(coeffs.modulus, coeffs.horizon, eps);
    } catch (const NoCertificateError& e) {
        rep.certificate_note = e.what();
    }
    rep.certificate_applicable = assumption_ok && coeffs.modulus.declared_osgood() && rep.certificate.has_value();
    if (!assumption_ok) rep.certificate_note = "non-Lipschitz condition verifier failed; certificate inapplicable";

    CoefficientSet cx = coeffs;
    cx.xi = xi;
    CoefficientSet cy = coeffs;
    cy.xi = eta;
    cx.validate({0.0, coeffs.horizon});
    cy.validate({0.0, coeffs.horizon});

    auto [x, y] = solve_coupled(cx, cy, bundle, opt.solve, &rep.iterations);

    if (xi.is_point_mass() && eta.is_point_mass()) {
        rep.initial_gap = (*xi.point() - *eta.point()).squaredNorm();
    } else {
        std::vector<double> g(x.path_count());
        for (std::size_t p = 0; p < g.size(); ++p) g[p] = (x.initial_value(p) - y.initial_value(p)).squaredNorm();
        rep.initial_gap = estimate(g).mean;
    }
    rep.initial_gap_x4 = 4.0 * rep.initial_gap;
    rep.precondition_held = rep.certificate && rep.initial_gap_x4 <= rep.certificate->delta;

    rep.gap = sup_distance(x, y);
    rep.pass = rep.gap.mean <= eps + 5.0 * rep.gap.se;
    return rep;
}

}  // namespace levysde
