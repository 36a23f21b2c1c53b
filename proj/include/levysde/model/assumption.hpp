#pragma once

#include "levysde/core/error.hpp"
#include "levysde/core/random.hpp"
#include "levysde/core/types.hpp"
#include "levysde/model/coefficients.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace levysde {

namespace detail {

template <typename Fn>
auto guarded_eval(Fn&& fn, double t, const Vector& y) {
    try {
        auto v = fn();
        if (!v.allFinite()) throw CoefficientEvaluationError("coefficient evaluated to a non-finite value", t, to_string(y));
        return v;
    } catch (const CoefficientEvaluationError&) {
        throw;
    } catch (const std::exception& e) {
        throw CoefficientEvaluationError(std::string("coefficient evaluation failed: ") + e.what(), t, to_string(y));
    }
}

}  // namespace detail

/// Both sides of the non-Lipschitz condition at one (t, y1, y2).
struct Assumption1Terms {
    double lhs = 0.0;  // |b1-b2|^2 + ||s1-s2||^2 + int |F1-F2|^2 nu(dx)
    double rhs = 0.0;  // lambda(t) kappa(|y1-y2|^2)

    double discrepancy() const noexcept { return lhs - rhs; }
};

inline Assumption1Terms assumption1_terms(const CoefficientSet& c, double t, const Vector& y1, const Vector& y2) {
    const Vector b1 = detail::guarded_eval([&] { return c.b(t, y1); }, t, y1);
    const Vector b2 = detail::guarded_eval([&] { return c.b(t, y2); }, t, y2);
    const Matrix s1 = detail::guarded_eval([&] { return c.sigma(t, y1); }, t, y1);
    const Matrix s2 = detail::guarded_eval([&] { return c.sigma(t, y2); }, t, y2);
    double jump = 0.0;
    try {
        jump = c.measure.integrate([&](const Vector& x) { return (c.F(t, y1, x) - c.F(t, y2, x)).squaredNorm(); });
    } catch (const std::exception& e) {
        throw CoefficientEvaluationError(std::string("jump coefficient evaluation failed: ") + e.what(), t,
                                         to_string(y1));
    }
    Assumption1Terms out;
    out.lhs = squared_norm(b1 - b2) + squared_frobenius(s1 - s2) + jump;
    out.rhs = c.modulus.lambda()(t) * c.modulus((y1 - y2).squaredNorm());
    return out;
}

/// LHS - RHS of the non-Lipschitz condition; <= 0 means the pair satisfies it.
inline double assumption1_discrepancy(const CoefficientSet& c, double t, const Vector& y1, const Vector& y2) {
    return assumption1_terms(c, t, y1, y2).discrepancy();
}

struct VerifierConfig {
    std::size_t pair_count = 20000;
    double box_radius = 1.0;
    double near_origin_fraction = 0.3;  // y1 tiny, y2 = 0 or tiny
    double cluster_fraction = 0.3;      // y2 = y1 + tiny offset
    double min_scale = 1e-12;           // smallest relative offset / magnitude sampled
    double tol = 1e-9;
    std::uint64_t seed = 0x5EED;
};

struct SampledPair {
    double t = 0.0;
    Vector y1;
    Vector y2;
    Assumption1Terms terms;
};

struct Assumption1Report {
    bool pass = false;
    double tol = 0.0;
    std::size_t pairs = 0;
    double max_discrepancy = -std::numeric_limits<double>::infinity();
    SampledPair max_discrepancy_pair;
    /// Pair with the largest lhs/rhs ratio; where non-Lipschitz violations
    /// concentrate (near the origin, near the diagonal).
    double worst_ratio = 0.0;
    SampledPair worst_pair;
};

/// Empirical check of the non-Lipschitz condition over sampled (t, y1, y2).
/// Evidence only: passing does not prove the inequality.
inline Assumption1Report verify_assumption1(const CoefficientSet& c, const VerifierConfig& cfg = {}) {
    if (cfg.pair_count == 0 || !(cfg.box_radius > 0.0) || !(cfg.tol >= 0.0))
        throw InputDomainError("verifier config needs pair_count > 0, box_radius > 0, tol >= 0");
    const auto d = static_cast<Eigen::Index>(c.d);
    const double log_min = std::log10(cfg.min_scale);

    auto uniform_box = [&](CounterStream& s) {
        Vector v(d);
        for (Eigen::Index k = 0; k < d; ++k) v[k] = cfg.box_radius * (2.0 * s.uniform() - 1.0);
        return v;
    };
    auto small_vector = [&](CounterStream& s) {
        Vector dir = uniform_box(s);
        const double n = dir.norm();
        if (n == 0.0) dir = Vector::Constant(d, 1.0);
        const double mag = cfg.box_radius * std::pow(10.0, log_min * s.uniform());
        return Vector(dir.normalized() * mag);
    };

    Assumption1Report rep;
    rep.tol = cfg.tol;
    rep.pairs = cfg.pair_count;
    for (std::size_t i = 0; i < cfg.pair_count; ++i) {
        auto s = CounterStream::derive(cfg.seed, StreamPurpose::Verifier, {i});
        SampledPair p;
        p.t = c.horizon * s.uniform();
        const double kind = s.uniform();
        if (kind < cfg.near_origin_fraction) {
            p.y1 = small_vector(s);
            p.y2 = s.uniform() < 0.5 ? Vector::Zero(d) : Vector(small_vector(s));
        } else if (kind < cfg.near_origin_fraction + cfg.cluster_fraction) {
            p.y1 = uniform_box(s);
            p.y2 = p.y1 + small_vector(s);
        } else {
            p.y1 = uniform_box(s);
            p.y2 = uniform_box(s);
        }
        p.terms = assumption1_terms(c, p.t, p.y1, p.y2);

        const double disc = p.terms.discrepancy();
        const double ratio = p.terms.rhs > 0.0   ? p.terms.lhs / p.terms.rhs
                             : p.terms.lhs > 0.0 ? std::numeric_limits<double>::infinity()
                                                 : 0.0;
        if (disc > rep.max_discrepancy) {
            rep.max_discrepancy = disc;
            rep.max_discrepancy_pair = p;
        }
        if (i == 0 || ratio > rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.worst_pair = p;
        }
    }
    rep.pass = rep.max_discrepancy <= cfg.tol;
    return rep;
}

}  // namespace levysde
