#pragma once

#include "levysde/core/error.hpp"
#include "levysde/core/stats.hpp"
#include "levysde/model/coefficients.hpp"
#include "levysde/noise/noise_bundle.hpp"
#include "levysde/picard/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

namespace levysde {

struct RefinementLevel {
    std::size_t steps = 0;
    double dt = 0.0;
    Estimate terminal_mean;  // E X(T), first component
    std::size_t iterations = 0;
};

/// Converged solves of one scenario on successively halved steps, all on the
/// same seed. Brownian node values and jump events are shared between levels,
/// so level differences isolate the discretization error.
struct RefinementStudy {
    std::vector<RefinementLevel> levels;
    std::vector<double> differences;  // mean(level i) - mean(level i + 1)
    std::vector<double> ratios;       // differences[i] / differences[i + 1]
    /// Error constant for the finest level: C dt = 2 |last difference|, which
    /// bounds the Richardson estimate |d| / (ratio - 1) whenever ratio >= 1.5.
    double C = 0.0;

    const RefinementLevel& finest() const { return levels.back(); }
};

inline RefinementStudy refinement_study(const CoefficientSet& c, std::vector<std::size_t> steps, std::size_t paths,
                                        std::uint64_t seed, const SolveOptions& opt = {}) {
    if (steps.size() < 2) throw InputDomainError("refinement study needs at least two levels");
    RefinementStudy s;
    for (std::size_t m : steps) {
        const TimeGrid grid(c.horizon, m);
        auto result = solve(c, grid, paths, seed, opt);
        std::vector<double> terminal(result.solution.path_count());
        for (std::size_t p = 0; p < terminal.size(); ++p) terminal[p] = result.solution.state(p, grid.steps())[0];
        s.levels.push_back({m, grid.dt(), estimate(terminal), result.report.iterations});
    }
    for (std::size_t i = 0; i + 1 < s.levels.size(); ++i)
        s.differences.push_back(s.levels[i].terminal_mean.mean - s.levels[i + 1].terminal_mean.mean);
    for (std::size_t i = 0; i + 1 < s.differences.size(); ++i)
        s.ratios.push_back(s.differences[i + 1] != 0.0 ? s.differences[i] / s.differences[i + 1]
                                                       : std::numeric_limits<double>::quiet_NaN());
    s.C = 2.0 * std::abs(s.differences.back()) / s.finest().dt;
    return s;
}

/// |E X(T) - exact| <= 3 SE + C dt at the finest level, plus first-order
/// ratios in [1.5, 3] between successive level differences. Level differences
/// below round-off (exact schemes) waive the ratio requirement.
struct AnalyticMeanReport {
    double exact = 0.0;
    Estimate estimate;
    double error = 0.0;
    double allowance = 0.0;  // 3 SE + C dt
    double C = 0.0;
    double dt = 0.0;
    std::vector<double> ratios;
    bool ratios_ok = false;
    bool pass = false;
};

inline AnalyticMeanReport analytic_mean_check(const RefinementStudy& s, double exact) {
    AnalyticMeanReport r;
    r.exact = exact;
    r.estimate = s.finest().terminal_mean;
    r.error = std::abs(r.estimate.mean - exact);
    r.C = s.C;
    r.dt = s.finest().dt;
    r.allowance = 3.0 * r.estimate.se + r.C * r.dt;
    r.ratios = s.ratios;
    const double scale = std::max(1.0, std::abs(exact));
    bool exact_scheme = true;
    for (double d : s.differences)
        if (std::abs(d) > 1e-13 * scale) exact_scheme = false;
    r.ratios_ok = exact_scheme;
    if (!exact_scheme) {
        r.ratios_ok = !s.ratios.empty();
        for (double q : s.ratios)
            if (!(q >= 1.5 && q <= 3.0)) r.ratios_ok = false;
    }
    r.pass = r.ratios_ok && r.error <= r.allowance + 1e-13 * scale;
    return r;
}

}  // namespace levysde
