#pragma once

#include "levysde/core/error.hpp"
#include "levysde/core/quadrature.hpp"
#include "levysde/model/modulus.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace levysde {

/// int_lo^hi dq / kappa(q) for 0 < lo, hi, integrated in ln q and split at the
/// modulus' kinks. Oriented: swapping the limits flips the sign.
inline double reciprocal_integral(const ConcaveModulus& kappa, double lo, double hi, double tol = 1e-12) {
    if (!(lo > 0.0) || !(hi > 0.0)) throw InputDomainError("reciprocal integral limits must be positive");
    auto f = [&kappa](double q) {
        const double k = kappa(q);
        if (!(k > 0.0))
            throw ModulusInvalidError("modulus " + kappa.name() + " is not positive at q=" + std::to_string(q));
        return 1.0 / k;
    };
    return quadrature::integrate_log(f, lo, hi, tol, kappa.breakpoints()).value;
}

enum class OsgoodVerdict { Divergent, Convergent };

inline const char* to_string(OsgoodVerdict v) { return v == OsgoodVerdict::Divergent ? "divergent" : "convergent"; }

struct OsgoodOptions {
    /// Tail growth per decade of 1/eps below this reads as bounded.
    double growth_floor = 1e-6;
    /// Successive per-decade growth ratios below this read as geometric decay,
    /// i.e. a convergent tail.
    double decay_ratio = 0.5;
    /// Successive growth ratios equal to this relative tolerance and below one
    /// read as a geometric, hence convergent, tail (q^alpha with alpha near 1).
    double geometric_tol = 1e-6;
    double tol = 1e-12;
};

/// I(eps) = int_eps^1 dq / kappa(q) along a decreasing eps sequence, with a
/// divergence verdict. Numerical evidence only, not a proof.
struct OsgoodEvidence {
    std::vector<double> eps;
    std::vector<double> integral;
    std::vector<double> growth_per_decade;  // between consecutive eps
    double tail_ratio = 0.0;
    double previous_tail_ratio = 0.0;
    OsgoodVerdict verdict = OsgoodVerdict::Convergent;
    std::string note = "numerical evidence from a finite eps sequence, not a proof";
};

inline std::vector<double> default_osgood_eps() { return {1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12}; }

inline OsgoodEvidence check_osgood(const ConcaveModulus& kappa, const std::vector<double>& eps = default_osgood_eps(),
                                   const OsgoodOptions& opt = {}) {
    if (eps.size() < 4) throw InputDomainError("osgood check needs at least four eps values");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0 && eps[i] < 1.0)) throw InputDomainError("osgood eps values must lie in (0, 1)");
        if (i && !(eps[i] < eps[i - 1])) throw InputDomainError("osgood eps sequence must be strictly decreasing");
    }

    OsgoodEvidence ev;
    ev.eps = eps;
    ev.integral.reserve(eps.size());
    // accumulate segment by segment so each quadrature spans a bounded range
    double running = reciprocal_integral(kappa, eps.front(), 1.0, opt.tol);
    ev.integral.push_back(running);
    for (std::size_t i = 1; i < eps.size(); ++i) {
        running += reciprocal_integral(kappa, eps[i], eps[i - 1], opt.tol);
        ev.integral.push_back(running);
        const double decades = std::log10(eps[i - 1] / eps[i]);
        ev.growth_per_decade.push_back((ev.integral[i] - ev.integral[i - 1]) / decades);
    }
    const auto& g = ev.growth_per_decade;
    const std::size_t n = g.size();
    auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
    ev.tail_ratio = ratio(g[n - 1], g[n - 2]);
    ev.previous_tail_ratio = ratio(g[n - 2], g[n - 3]);
    const bool geometric = ev.tail_ratio < 1.0 - opt.geometric_tol &&
                           std::abs(ev.tail_ratio - ev.previous_tail_ratio) <= opt.geometric_tol * ev.tail_ratio;
    ev.verdict = (g[n - 1] >= opt.growth_floor && ev.tail_ratio >= opt.decay_ratio && !geometric)
                     ? OsgoodVerdict::Divergent
                     : OsgoodVerdict::Convergent;
    return ev;
}

}  // namespace levysde
