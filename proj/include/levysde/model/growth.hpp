#pragma once

#include "levysde/core/error.hpp"
#include "levysde/model/coefficients.hpp"
#include "levysde/noise/time_grid.hpp"

#include <algorithm>
#include <optional>

namespace levysde {

/// K1 with |b|^2 + ||sigma||^2 + int |F|^2 nu <= K1 (1 + |y|^2) on [0, T] x R^d:
///   K1 = max( 2 sup_t (|b(t,0)|^2 + ||sigma(t,0)||^2 + int |F(t,0,x)|^2 nu(dx) + lambda(t) a),
///             2 b sup_t lambda(t) ),
/// where kappa(q) <= a + b q. Suprema are taken over the grid nodes.
inline double growth_constant(const CoefficientSet& c, std::optional<TimeGrid> grid = std::nullopt) {
    if (!c.modulus.domination())
        throw ModulusIncompleteError("modulus " + c.modulus.name() + " has no affine domination constants (a, b)");
    const auto [a, b] = *c.modulus.domination();
    const TimeGrid g = grid.value_or(TimeGrid(c.horizon, 256));
    const Vector zero = Vector::Zero(static_cast<Eigen::Index>(c.d));

    double at_origin = 0.0;
    double lambda_sup = 0.0;
    for (std::size_t i = 0; i < g.nodes(); ++i) {
        const double t = g.time(i);
        const double lam = c.modulus.lambda()(t);
        lambda_sup = std::max(lambda_sup, lam);
        const double v = c.b(t, zero).squaredNorm() + c.sigma(t, zero).squaredNorm() + c.jump_energy(t, zero) + lam * a;
        at_origin = std::max(at_origin, v);
    }
    lambda_sup = std::max(lambda_sup, c.modulus.lambda().sup());
    return std::max(2.0 * at_origin, 2.0 * b * lambda_sup);
}

/// |b|^2 + ||sigma||^2 + int |F|^2 nu at (t, y): the left side of the growth bound.
inline double growth_lhs(const CoefficientSet& c, double t, const Vector& y) {
    return c.b(t, y).squaredNorm() + c.sigma(t, y).squaredNorm() + c.jump_energy(t, y);
}

}  // namespace levysde
