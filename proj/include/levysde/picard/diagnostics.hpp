#pragma once

#include "levysde/core/error.hpp"
#include "levysde/core/stats.hpp"
#include "levysde/picard/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <vector>

namespace levysde {

/// E|X_k(t)|^2 <= 4 (1 + E|xi|^2) exp(4 K1 T^2), checked over every iterate and node.
struct MomentBoundReport {
    double bound = 0.0;
    double K1 = 0.0;
    double second_moment_xi = 0.0;
    double empirical_max = 0.0;
    double se_at_max = 0.0;
    std::size_t k_at_max = 0;
    std::size_t node_at_max = 0;
    bool pass = false;
    /// The bound is derived for T >= 1; smaller horizons still evaluate it.
    bool horizon_below_one = false;
};

inline double moment_bound(double xi_moment, double K1, double T) {
    return 4.0 * (1.0 + xi_moment) * std::exp(4.0 * K1 * T * T);
}

/// Pass iff max_k,t of the empirical second moment <= bound + 5 SE.
inline MomentBoundReport moment_bound_check(const ConvergenceReport& rep, const CoefficientSet& c) {
    if (!rep.K1) throw ModulusIncompleteError("moment bound needs K1, i.e. a modulus with (a, b) domination");
    MomentBoundReport out;
    out.K1 = *rep.K1;
    out.second_moment_xi = rep.second_moment_xi;
    out.bound = moment_bound(rep.second_moment_xi, out.K1, c.horizon);
    out.horizon_below_one = c.horizon < 1.0;
    out.pass = true;
    for (std::size_t k = 0; k < rep.moments.size(); ++k) {
        const auto& prof = rep.moments[k];
        for (std::size_t i = 0; i < prof.mean.size(); ++i) {
            if (prof.mean[i] > out.empirical_max || (k == 0 && i == 0)) {
                out.empirical_max = prof.mean[i];
                out.se_at_max = prof.se[i];
                out.k_at_max = k;
                out.node_at_max = i;
            }
            if (prof.mean[i] > out.bound + 5.0 * prof.se[i]) out.pass = false;
        }
    }
    return out;
}

/// Single-ensemble form.
inline MomentBoundReport moment_bound_check(const IterateEnsemble& e, const CoefficientSet& c) {
    ConvergenceReport rep;
    fill_constants(rep, c, e.grid(), initial_second_moment(c, e));
    rep.moments.push_back(second_moment_profile(e));
    auto out = moment_bound_check(rep, c);
    out.k_at_max = e.iterate();
    return out;
}

/// Linear-in-t cap: D(n, n+k) <= C3 T over the kept pairwise table.
struct DifferenceCapReport {
    double cap = 0.0;
    double worst = 0.0;
    bool pass = false;
};

inline DifferenceCapReport difference_cap_check(const ConvergenceReport& rep, double horizon) {
    DifferenceCapReport out;
    if (!rep.C3) throw ModulusIncompleteError("difference cap needs C3, i.e. a modulus with (a, b) domination");
    out.cap = *rep.C3 * horizon;
    out.pass = true;
    for (std::size_t n = 1; n < rep.pairwise.size(); ++n)
        for (std::size_t i = n + 1; i < rep.pairwise.size(); ++i) {
            const auto& e = rep.pairwise[n][i];
            out.worst = std::max(out.worst, e.mean);
            if (e.mean > out.cap + 5.0 * e.se) out.pass = false;
        }
    return out;
}

/// Largest |X(t) - Y(t)| over all paths and nodes; ensembles must line up path by path.
inline double max_trajectory_difference(const IterateEnsemble& a, const IterateEnsemble& b) {
    if (a.path_count() != b.path_count() || a.nodes() != b.nodes() || a.dim() != b.dim())
        throw ContractError("trajectory comparison needs matching shapes");
    double m = 0.0;
    for (std::size_t i = 0; i < a.raw().size(); ++i) m = std::max(m, std::abs(a.raw()[i] - b.raw()[i]));
    return m;
}

struct UniquenessReport {
    /// Same seed, same xi, independent re-run: must be exactly 0.
    double replay_difference = 0.0;
    /// Reversed path order, compared path id by path id: must be exactly 0.
    double permutation_difference = 0.0;
    /// Different seed (sanity inverse): expected nonzero.
    std::optional<double> distinct_seed_difference;
    bool pass = false;
};

/// Deterministic replay of the Picard solve. Two solves from the same seed and
/// initial law must agree bit for bit; so must a solve over a reshuffled path
/// order once paths are matched by id. A nonzero difference is a determinism
/// bug and raises ReplayBrokenError.
inline UniquenessReport pathwise_uniqueness_check(const CoefficientSet& c, const TimeGrid& grid, std::size_t paths,
                                                  std::uint64_t seed, const SolveOptions& opt = {},
                                                  std::optional<std::uint64_t> other_seed = std::nullopt) {
    UniquenessReport out;
    const auto first = solve(c, grid, paths, seed, opt);
    const auto second = solve(c, grid, paths, seed, opt);
    out.replay_difference = max_trajectory_difference(first.solution, second.solution);

    std::vector<std::uint64_t> ids(paths);
    std::iota(ids.begin(), ids.end(), std::uint64_t{0});
    std::reverse(ids.begin(), ids.end());
    auto shuffled_bundle =
        std::make_shared<const NoiseBundle>(NoiseBundle::generate(seed, grid, c.r, c.measure, ids, opt.par));
    // fixed iteration count so both runs perform the same number of steps
    SolveOptions fixed = opt;
    fixed.tol = std::numeric_limits<double>::min();
    fixed.max_iter = first.report.iterations;
    const auto shuffled = solve(c, shuffled_bundle, fixed);
    double perm = 0.0;
    for (std::size_t p = 0; p < paths; ++p) {
        const std::size_t q = paths - 1 - p;
        for (std::size_t i = 0; i < grid.nodes(); ++i)
            perm = std::max(perm, (first.solution.state(p, i) - shuffled.solution.state(q, i)).cwiseAbs().maxCoeff());
    }
    out.permutation_difference = perm;

    if (other_seed) {
        const auto other = solve(c, grid, paths, *other_seed, opt);
        out.distinct_seed_difference = max_trajectory_difference(first.solution, other.solution);
    }

    out.pass = out.replay_difference == 0.0 && out.permutation_difference == 0.0;
    if (!out.pass)
        throw ReplayBrokenError("deterministic replay differs: same-seed " + format_double(out.replay_difference) +
                                ", permuted " + format_double(out.permutation_difference));
    return out;
}

}  // namespace levysde
