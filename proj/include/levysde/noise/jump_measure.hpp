#pragma once

#include "levysde/core/error.hpp"
#include "levysde/core/quadrature.hpp"
#include "levysde/core/random.hpp"
#include "levysde/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace levysde {

struct JumpAtom {
    Vector mark;
    double mass = 0.0;
};

/// Finite-activity Levy measure nu restricted to the ball {|x| < c}.
///
/// Three shapes are representable: the empty measure, a finite sum of point
/// masses (all integrals exact), and a bounded density on (-c, c) for scalar
/// marks (integrals by quadrature, sampling by rejection under an envelope).
/// Infinite-activity measures are not representable.
class JumpMeasure {
public:
    enum class Kind { Empty, Atomic, Density };

    using Density = std::function<double(double)>;

    static JumpMeasure empty(double cutoff, std::size_t dim = 1) {
        check_cutoff(cutoff);
        JumpMeasure m(Kind::Empty, cutoff, dim);
        return m;
    }

    static JumpMeasure atomic(double cutoff, std::vector<JumpAtom> atoms) {
        check_cutoff(cutoff);
        if (atoms.empty()) throw InputDomainError("atomic jump measure needs at least one atom (use empty())");
        const auto dim = static_cast<std::size_t>(atoms.front().mark.size());
        if (dim == 0) throw InputDomainError("jump marks must have dimension >= 1");
        JumpMeasure m(Kind::Atomic, cutoff, dim);
        double running = 0.0;
        for (const auto& a : atoms) {
            if (static_cast<std::size_t>(a.mark.size()) != dim)
                throw InputDomainError("jump atoms have inconsistent mark dimensions");
            if (!(a.mass > 0.0) || !std::isfinite(a.mass))
                throw InputDomainError("jump atom mass must be positive and finite");
            if (!a.mark.allFinite() || !(a.mark.norm() < cutoff))
                throw InputDomainError("jump atom mark " + to_string(a.mark) + " violates |x| < c = " +
                                       std::to_string(cutoff));
            running += a.mass;
            m.cumulative_.push_back(running);
        }
        m.atoms_ = std::move(atoms);
        m.total_mass_ = running;
        return m;
    }

    /// Scalar marks on (-c, c) with nu(dx) = density(x) dx. The envelope must
    /// bound the density; the total mass is computed by quadrature.
    static JumpMeasure density(double cutoff, Density density, double envelope, double quad_tol = 1e-10,
                               std::size_t attempt_cap = 100000) {
        check_cutoff(cutoff);
        if (!density) throw InputDomainError("density jump measure needs a density function");
        if (!(envelope > 0.0) || !std::isfinite(envelope))
            throw InputDomainError("rejection envelope must be positive and finite");
        JumpMeasure m(Kind::Density, cutoff, 1);
        m.density_ = std::make_shared<const Density>(std::move(density));
        m.envelope_ = envelope;
        m.quad_tol_ = quad_tol;
        m.attempt_cap_ = attempt_cap;
        const auto& f = *m.density_;
        m.total_mass_ = quadrature::integrate([&f](double x) { return f(x); }, -cutoff, cutoff, quad_tol).value;
        if (!(m.total_mass_ > 0.0) || !std::isfinite(m.total_mass_))
            throw InputDomainError("density jump measure must have positive finite total mass");
        return m;
    }

    Kind kind() const noexcept { return kind_; }
    double cutoff() const noexcept { return cutoff_; }
    std::size_t dim() const noexcept { return dim_; }
    double total_mass() const noexcept { return total_mass_; }
    bool is_empty() const noexcept { return kind_ == Kind::Empty; }
    const std::vector<JumpAtom>& atoms() const noexcept { return atoms_; }
    double envelope() const noexcept { return envelope_; }
    double quadrature_tolerance() const noexcept { return quad_tol_; }
    std::size_t attempt_cap() const noexcept { return attempt_cap_; }

    /// Integral of a scalar function of the mark against nu.
    template <typename F>
    double integrate(F&& f) const {
        switch (kind_) {
            case Kind::Empty:
                return 0.0;
            case Kind::Atomic: {
                double s = 0.0;
                for (const auto& a : atoms_) s += a.mass * f(a.mark);
                return s;
            }
            case Kind::Density: {
                const auto& dens = *density_;
                Vector x(1);
                auto g = [&](double u) {
                    x[0] = u;
                    return f(static_cast<const Vector&>(x)) * dens(u);
                };
                return quadrature::integrate(g, -cutoff_, cutoff_, quad_tol_).value;
            }
        }
        return 0.0;
    }

    /// Integral of a vector-valued function of the mark against nu; out_dim is
    /// the length of f's result.
    template <typename F>
    Vector integrate_vector(F&& f, std::size_t out_dim) const {
        Vector acc = Vector::Zero(static_cast<Eigen::Index>(out_dim));
        switch (kind_) {
            case Kind::Empty:
                break;
            case Kind::Atomic:
                for (const auto& a : atoms_) acc.noalias() += a.mass * f(a.mark);
                break;
            case Kind::Density:
                for (std::size_t k = 0; k < out_dim; ++k)
                    acc[static_cast<Eigen::Index>(k)] =
                        integrate([&](const Vector& x) { return f(x)[static_cast<Eigen::Index>(k)]; });
                break;
        }
        return acc;
    }

    /// Integral of |x|^2 against nu.
    double second_moment() const {
        return integrate([](const Vector& x) { return x.squaredNorm(); });
    }

    /// Integral of x against nu: the drift removed per unit time by compensation.
    Vector compensator_drift() const {
        return integrate_vector([](const Vector& x) { return x; }, dim_);
    }

    /// Draws one mark from nu / nu(total).
    Vector sample_mark(CounterStream& stream) const {
        switch (kind_) {
            case Kind::Empty:
                throw InputDomainError("cannot sample a mark from the empty measure");
            case Kind::Atomic: {
                const double u = stream.uniform() * total_mass_;
                auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
                if (it == cumulative_.end()) --it;
                return atoms_[static_cast<std::size_t>(it - cumulative_.begin())].mark;
            }
            case Kind::Density: {
                const auto& dens = *density_;
                for (std::size_t attempt = 0; attempt < attempt_cap_; ++attempt) {
                    const double x = -cutoff_ + 2.0 * cutoff_ * stream.uniform();
                    if (x <= -cutoff_) continue;
                    const double fx = dens(x);
                    if (fx > envelope_)
                        throw SamplingFailure("density " + std::to_string(fx) + " exceeds rejection envelope " +
                                              std::to_string(envelope_) + " at x=" + std::to_string(x));
                    if (stream.uniform() * envelope_ < fx) {
                        Vector v(1);
                        v[0] = x;
                        return v;
                    }
                }
                throw SamplingFailure("rejection sampling under envelope " + std::to_string(envelope_) +
                                      " exceeded " + std::to_string(attempt_cap_) + " attempts");
            }
        }
        return {};
    }

private:
    JumpMeasure(Kind kind, double cutoff, std::size_t dim) : kind_(kind), cutoff_(cutoff), dim_(dim) {}

    static void check_cutoff(double c) {
        if (!(c > 0.0) || !std::isfinite(c))
            throw InputDomainError("jump cutoff c must satisfy 0 < c < infinity, got " + std::to_string(c));
    }

    Kind kind_;
    double cutoff_;
    std::size_t dim_;
    double total_mass_ = 0.0;
    std::vector<JumpAtom> atoms_;
    std::vector<double> cumulative_;
    std::shared_ptr<const Density> density_;
    double envelope_ = 0.0;
    double quad_tol_ = 1e-10;
    std::size_t attempt_cap_ = 100000;
};

}  // namespace levysde
