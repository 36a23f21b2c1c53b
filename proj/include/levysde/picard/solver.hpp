#pragma once

#include "levysde/core/error.hpp"
#include "levysde/core/parallel.hpp"
#include "levysde/core/stats.hpp"
#include "levysde/model/coefficients.hpp"
#include "levysde/model/growth.hpp"
#include "levysde/noise/noise_bundle.hpp"
#include "levysde/picard/ensemble.hpp"

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace levysde {

/// One successive approximation on the frozen noise:
///   X_k(t_m) = xi + sum_{i<m} b(t_i, X_{k-1}(t_i)) dt + sum_{i<m} sigma(t_i, X_{k-1}(t_i)) dB_i
///            + sum_{tau <= t_m} F(t(tau), X_{k-1}(t(tau)), mark)
///            - sum_{i<m} [int F(t_i, X_{k-1}(t_i), x) nu(dx)] dt,
/// with t(tau) the last node strictly before the jump time tau.
inline IterateEnsemble picard_step(const IterateEnsemble& prev, const CoefficientSet& c, ParallelOptions par = {}) {
    const NoiseBundle& noise = prev.bundle();
    const TimeGrid& grid = noise.grid();
    if (noise.brownian_dim() != c.r) throw ContractError("noise bundle Brownian dimension differs from r");
    if (prev.dim() != c.d) throw ContractError("iterate dimension differs from d");

    IterateEnsemble next(prev.bundle_ptr(), c.d, prev.iterate() + 1);
    const double dt = grid.dt();
    const std::size_t steps = grid.steps();
    const bool has_jumps = !c.measure.is_empty();

    parallel_for(
        prev.path_count(),
        [&](std::size_t p) {
            const PathNoise& pn = noise.path(p);
            Vector x = prev.initial_value(p);
            next.set_initial(p, x);
            next.set(p, 0, x);
            std::size_t j = 0;
            for (std::size_t i = 0; i < steps; ++i) {
                const double t = grid.time(i);
                const Vector y = prev.state(p, i);
                x.noalias() += c.b(t, y) * dt;
                if (c.r) x.noalias() += c.sigma(t, y) * pn.increments.col(static_cast<Eigen::Index>(i));
                if (has_jumps) {
                    x.noalias() -= c.jump_compensator(t, y) * dt;
                    while (j < pn.jumps.size() && grid.node_before(pn.jumps[j].time) == i)
                        x.noalias() += c.F(t, y, pn.jumps[j++].mark);
                }
                if (!x.allFinite()) throw DivergenceError(pn.id, i + 1, next.iterate());
                next.set(p, i + 1, x);
            }
        },
        par);
    return next;
}

/// Per-path sup over grid nodes of |A - B|^2.
inline std::vector<double> sup_squared_differences(const IterateEnsemble& a, const IterateEnsemble& b) {
    if (!a.shares_noise_with(b)) throw ContractError("sup distance needs iterates on the same noise bundle");
    std::vector<double> out(a.path_count(), 0.0);
    for (std::size_t p = 0; p < a.path_count(); ++p) {
        double m = 0.0;
        for (std::size_t i = 0; i < a.nodes(); ++i) m = std::max(m, (a.state(p, i) - b.state(p, i)).squaredNorm());
        out[p] = m;
    }
    return out;
}

/// Monte Carlo estimate of E sup_{t <= T} |A(t) - B(t)|^2 over grid nodes.
inline Estimate sup_distance(const IterateEnsemble& a, const IterateEnsemble& b) {
    const auto per_path = sup_squared_differences(a, b);
    return estimate(per_path);
}

/// Per-node estimate of E|X(t_i)|^2.
struct MomentProfile {
    std::vector<double> mean;
    std::vector<double> se;
};

inline MomentProfile second_moment_profile(const IterateEnsemble& e) {
    MomentProfile prof;
    prof.mean.resize(e.nodes());
    prof.se.resize(e.nodes());
    std::vector<double> col(e.path_count());
    for (std::size_t i = 0; i < e.nodes(); ++i) {
        for (std::size_t p = 0; p < e.path_count(); ++p) col[p] = e.state(p, i).squaredNorm();
        const auto est = estimate(col);
        prof.mean[i] = est.mean;
        prof.se[i] = est.se;
    }
    return prof;
}

enum class SolveVerdict { Converged, MaxIterations, Diverged };

inline const char* to_string(SolveVerdict v) {
    switch (v) {
        case SolveVerdict::Converged: return "converged";
        case SolveVerdict::MaxIterations: return "max-iterations";
        case SolveVerdict::Diverged: return "diverged";
    }
    return "?";
}

/// D(k, k+1) with its standard error.
struct IterateDistance {
    std::size_t k = 0;
    double distance = 0.0;
    double se = 0.0;
};

struct ConvergenceReport {
    std::vector<IterateDistance> successive;
    /// D(n, i) for all kept iterates; empty unless iterates were kept.
    std::vector<std::vector<Estimate>> pairwise;
    /// Per-iterate node profile of E|X_k(t)|^2, k = 0..iterations.
    std::vector<MomentProfile> moments;
    std::size_t iterations = 0;
    SolveVerdict verdict = SolveVerdict::MaxIterations;
    double tol = 0.0;

    double sup_lambda = 0.0;
    std::optional<double> K1;
    /// Moment cap 4(1 + E|xi|^2) exp(4 K1 T^2).
    std::optional<double> C1;
    /// 12 T sup lambda.
    double C2 = 0.0;
    /// C2 kappa(4 C1): linear-in-t cap on E sup |X_{n+k} - X_n|^2.
    std::optional<double> C3;
    double second_moment_xi = 0.0;
    bool horizon_below_one = false;
};

/// Solver failure with the report accumulated before the bad iterate.
class SolverDivergedError : public DivergenceError {
public:
    SolverDivergedError(const DivergenceError& cause, ConvergenceReport report)
        : DivergenceError(cause), report_(std::move(report)) {}
    const ConvergenceReport& report() const noexcept { return report_; }

private:
    ConvergenceReport report_;
};

struct SolveOptions {
    double tol = 1e-6;
    std::size_t max_iter = 50;
    /// Keep every iterate and fill the pairwise D(n, i) table.
    bool keep_iterates = false;
    ParallelOptions par{};
};

struct SolveResult {
    IterateEnsemble solution;
    ConvergenceReport report;
    std::vector<IterateEnsemble> iterates;  // only with keep_iterates
};

/// E|xi|^2: exact when the law says so, otherwise the ensemble average of X_0.
inline double initial_second_moment(const CoefficientSet& c, const IterateEnsemble& x0) {
    if (auto m = c.xi.second_moment()) return *m;
    std::vector<double> v(x0.path_count());
    for (std::size_t p = 0; p < v.size(); ++p) v[p] = x0.initial_value(p).squaredNorm();
    return estimate(v).mean;
}

/// Fills the analytic constants K1, C1, C2, C3 of a report.
inline void fill_constants(ConvergenceReport& rep, const CoefficientSet& c, const TimeGrid& grid, double xi_moment) {
    const double T = c.horizon;
    rep.second_moment_xi = xi_moment;
    rep.sup_lambda = c.modulus.lambda().sup();
    rep.C2 = 12.0 * T * rep.sup_lambda;
    rep.horizon_below_one = T < 1.0;
    if (c.modulus.domination()) {
        rep.K1 = growth_constant(c, grid);
        rep.C1 = 4.0 * (1.0 + xi_moment) * std::exp(4.0 * *rep.K1 * T * T);
        rep.C3 = rep.C2 * c.modulus(4.0 * *rep.C1);
    }
}

/// Picard iteration from X_0 = xi until D(k, k+1) <= tol or k = max_iter.
inline SolveResult solve(const CoefficientSet& c, std::shared_ptr<const NoiseBundle> bundle,
                         const SolveOptions& opt = {}) {
    if (!(opt.tol > 0.0)) throw InputDomainError("solver tolerance must be positive");
    if (!bundle || bundle->path_count() < 2) throw InputDomainError("solver needs at least two paths");
    c.validate({0.0, c.horizon});
    if (std::abs(bundle->grid().horizon() - c.horizon) > 1e-12 * c.horizon)
        throw ContractError("noise bundle horizon differs from the coefficient horizon");

    ConvergenceReport rep;
    rep.tol = opt.tol;
    IterateEnsemble current = IterateEnsemble::initial(c, bundle);
    fill_constants(rep, c, bundle->grid(), initial_second_moment(c, current));
    rep.moments.push_back(second_moment_profile(current));

    std::vector<IterateEnsemble> kept;
    if (opt.keep_iterates) kept.push_back(current);

    for (std::size_t k = 0; k < opt.max_iter; ++k) {
        std::optional<IterateEnsemble> next;
        try {
            next.emplace(picard_step(current, c, opt.par));
        } catch (const DivergenceError& e) {
            rep.verdict = SolveVerdict::Diverged;
            rep.iterations = k;
            throw SolverDivergedError(e, std::move(rep));
        }
        const Estimate dist = sup_distance(current, *next);
        rep.successive.push_back({k, dist.mean, dist.se});
        rep.moments.push_back(second_moment_profile(*next));
        current = std::move(*next);
        rep.iterations = k + 1;
        if (opt.keep_iterates) kept.push_back(current);
        if (dist.mean <= opt.tol) {
            rep.verdict = SolveVerdict::Converged;
            break;
        }
    }

    if (opt.keep_iterates) {
        rep.pairwise.assign(kept.size(), std::vector<Estimate>(kept.size()));
        for (std::size_t n = 0; n < kept.size(); ++n)
            for (std::size_t i = n + 1; i < kept.size(); ++i) {
                rep.pairwise[n][i] = sup_distance(kept[n], kept[i]);
                rep.pairwise[i][n] = rep.pairwise[n][i];
            }
    }
    return {std::move(current), std::move(rep), std::move(kept)};
}

/// Convenience overload: builds the noise bundle for (seed, grid, paths) first.
inline SolveResult solve(const CoefficientSet& c, const TimeGrid& grid, std::size_t paths, std::uint64_t seed,
                         const SolveOptions& opt = {}) {
    auto bundle = std::make_shared<const NoiseBundle>(NoiseBundle::generate(seed, grid, c.r, c.measure, paths, opt.par));
    return solve(c, std::move(bundle), opt);
}

}  // namespace levysde
