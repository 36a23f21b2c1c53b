#pragma once

#include "levysde/core/error.hpp"
#include "levysde/core/random.hpp"
#include "levysde/core/types.hpp"
#include "levysde/model/modulus.hpp"
#include "levysde/noise/jump_measure.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <string>

namespace levysde {

/// Law of the initial value xi: a point mass, or a sampler with known or
/// unknown second moment E|xi|^2.
class InitialLaw {
public:
    using Sampler = std::function<Vector(CounterStream&)>;

    static InitialLaw point_mass(Vector value) {
        if (!value.allFinite()) throw InputDomainError("initial point mass must be finite");
        InitialLaw law;
        law.dim_ = static_cast<std::size_t>(value.size());
        law.second_moment_ = value.squaredNorm();
        law.point_ = std::move(value);
        return law;
    }

    static InitialLaw point_mass(double value) { return point_mass(Vector::Constant(1, value)); }

    static InitialLaw sampled(std::size_t dim, Sampler sampler, std::optional<double> second_moment = std::nullopt) {
        if (!sampler) throw InputDomainError("initial law sampler is empty");
        InitialLaw law;
        law.dim_ = dim;
        law.sampler_ = std::move(sampler);
        law.second_moment_ = second_moment;
        return law;
    }

    std::size_t dim() const noexcept { return dim_; }
    bool is_point_mass() const noexcept { return point_.has_value(); }
    const std::optional<Vector>& point() const noexcept { return point_; }
    std::optional<double> second_moment() const noexcept { return second_moment_; }

    Vector sample(CounterStream& stream) const {
        if (point_) return *point_;
        Vector v = sampler_(stream);
        if (static_cast<std::size_t>(v.size()) != dim_) throw InputDomainError("initial sampler returned wrong dimension");
        return v;
    }

private:
    InitialLaw() = default;
    std::size_t dim_ = 0;
    std::optional<Vector> point_;
    Sampler sampler_;
    std::optional<double> second_moment_;
};

/// Coefficients b, sigma, F of
///   dX = b(t, X-) dt + sigma(t, X-) dB + int_{|x|<c} F(t, X-, x) Ntilde(dt, dx),  X(0) = xi,
/// together with the driving noise (jump measure, Brownian dimension r) and the
/// modulus kappa, lambda the coefficients are claimed to satisfy.
struct CoefficientSet {
    using Drift = std::function<Vector(double, const Vector&)>;
    using Diffusion = std::function<Matrix(double, const Vector&)>;
    using JumpCoefficient = std::function<Vector(double, const Vector&, const Vector&)>;

    std::string name;
    std::size_t d = 1;
    std::size_t r = 0;
    double horizon = 1.0;
    Drift drift;
    Diffusion diffusion;
    JumpCoefficient jump;
    InitialLaw xi = InitialLaw::point_mass(0.0);
    JumpMeasure measure = JumpMeasure::empty(1.0);
    ConcaveModulus modulus = moduli::linear();

    Vector b(double t, const Vector& y) const { return drift(t, y); }
    Matrix sigma(double t, const Vector& y) const { return diffusion(t, y); }
    Vector F(double t, const Vector& y, const Vector& x) const { return jump(t, y, x); }

    /// int F(t, y, x) nu(dx): the compensator rate of the jump integral.
    Vector jump_compensator(double t, const Vector& y) const {
        return measure.integrate_vector([&](const Vector& x) { return jump(t, y, x); }, d);
    }

    /// int |F(t, y, x)|^2 nu(dx).
    double jump_energy(double t, const Vector& y) const {
        return measure.integrate([&](const Vector& x) { return jump(t, y, x).squaredNorm(); });
    }

    /// Checks dimensions and that b, sigma, F are finite at y = 0 for the given times.
    void validate(std::initializer_list<double> times = {0.0}) const {
        if (!drift || !diffusion || !jump) throw InputDomainError("coefficient set '" + name + "' has empty evaluators");
        if (d == 0) throw InputDomainError("state dimension d must be >= 1");
        if (!(horizon > 0.0)) throw InputDomainError("horizon T must be positive");
        if (xi.dim() != d) throw InputDomainError("initial law dimension does not match d");
        if (!measure.is_empty() && measure.dim() == 0) throw InputDomainError("jump marks need dimension >= 1");
        const Vector zero = Vector::Zero(static_cast<Eigen::Index>(d));
        for (double t : times) {
            const Vector bv = b(t, zero);
            const Matrix sv = sigma(t, zero);
            if (static_cast<std::size_t>(bv.size()) != d || !bv.allFinite())
                throw CoefficientEvaluationError("drift has wrong size or is not finite", t, to_string(zero));
            if (static_cast<std::size_t>(sv.rows()) != d || static_cast<std::size_t>(sv.cols()) != r ||
                !sv.allFinite())
                throw CoefficientEvaluationError("diffusion must be a finite d x r matrix", t, to_string(zero));
            const Vector comp = jump_compensator(t, zero);
            if (!comp.allFinite())
                throw CoefficientEvaluationError("jump coefficient is not finite", t, to_string(zero));
        }
    }
};

/// sigma(t, y) = 0 of shape d x r.
inline CoefficientSet::Diffusion zero_diffusion(std::size_t d, std::size_t r) {
    return [d, r](double, const Vector&) {
        return Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(r)).eval();
    };
}

inline CoefficientSet::JumpCoefficient zero_jump(std::size_t d) {
    return [d](double, const Vector&, const Vector&) { return Vector::Zero(static_cast<Eigen::Index>(d)).eval(); };
}

inline CoefficientSet::Drift zero_drift(std::size_t d) {
    return [d](double, const Vector&) { return Vector::Zero(static_cast<Eigen::Index>(d)).eval(); };
}

}  // namespace levysde
