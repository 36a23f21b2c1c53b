#pragma once

#include "levysde/core/error.hpp"
#include "levysde/core/random.hpp"
#include "levysde/core/types.hpp"
#include "levysde/noise/jump_measure.hpp"
#include "levysde/noise/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace levysde {

struct JumpEvent {
    double time = 0.0;
    Vector mark;
};

/// Number of atoms of the Poisson random measure in (0, horizon]: Poisson with
/// mean nu(total) * horizon.
inline std::uint64_t sample_jump_count(const JumpMeasure& measure, double horizon, CounterStream& stream) {
    if (!(horizon >= 0.0)) throw InputDomainError("jump count horizon must be >= 0, got " + std::to_string(horizon));
    const double mean = measure.total_mass() * horizon;
    if (mean == 0.0) return 0;
    std::poisson_distribution<std::uint64_t> poisson(mean);
    return poisson(stream);
}

/// Jump events of the Poisson random measure on (0, T] x {|x| < c}, sorted by
/// time. Count first, then i.i.d. uniform times and i.i.d. marks; only the
/// horizon is used, so every refinement of the grid sees the same events.
inline std::vector<JumpEvent> sample_prm(const JumpMeasure& measure, const TimeGrid& grid, CounterStream& stream) {
    std::vector<JumpEvent> events;
    if (measure.is_empty()) return events;
    const double horizon = grid.horizon();
    const auto n = sample_jump_count(measure, horizon, stream);
    events.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        // 1 - U lies in (0, 1], so times land in (0, T]
        const double t = horizon * (1.0 - stream.uniform());
        events.push_back({t, measure.sample_mark(stream)});
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
    return events;
}

/// Brownian values B(t_i), one column per grid node, r rows.
///
/// Built by dyadic Brownian-bridge refinement: B(T) first, then midpoints level
/// by level, each Gaussian keyed by (component, level, node) off the stream.
/// Node values at a coarse grid are reproduced exactly at every finer grid.
inline Matrix brownian_path(const TimeGrid& grid, std::size_t r, const CounterStream& stream) {
    const std::size_t m = grid.steps();
    Matrix path = Matrix::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(m + 1));
    const double horizon = grid.horizon();
    auto gaussian = [&stream](std::size_t component, unsigned level, std::size_t node) {
        auto s = stream.child({component, level, node});
        std::normal_distribution<double> normal(0.0, 1.0);
        return normal(s);
    };
    for (std::size_t j = 0; j < r; ++j) {
        const auto row = static_cast<Eigen::Index>(j);
        path(row, static_cast<Eigen::Index>(m)) = std::sqrt(horizon) * gaussian(j, 0, 0);
        const unsigned levels = grid.level();
        for (unsigned l = 1; l <= levels; ++l) {
            const std::size_t stride = m >> l;
            const double sd = std::sqrt(horizon / std::ldexp(1.0, static_cast<int>(l) + 1));
            for (std::size_t k = 1; k < (std::size_t{1} << l); k += 2) {
                const auto idx = static_cast<Eigen::Index>(k * stride);
                const auto s = static_cast<Eigen::Index>(stride);
                path(row, idx) = 0.5 * (path(row, idx - s) + path(row, idx + s)) + sd * gaussian(j, l, k);
            }
        }
    }
    return path;
}

/// Brownian increments dB_i = B(t_{i+1}) - B(t_i): an r x M matrix whose
/// entries are i.i.d. N(0, dt).
inline Matrix brownian_increments(const TimeGrid& grid, std::size_t r, const CounterStream& stream) {
    const Matrix b = brownian_path(grid, r, stream);
    const auto m = static_cast<Eigen::Index>(grid.steps());
    return b.rightCols(m) - b.leftCols(m);
}

/// Levy-Ito path at grid nodes (one column per node):
/// L(t) = b1 t + B(t) + sum of marks up to t - t * integral of x nu(dx).
/// The Brownian dimension r must be 0 or equal to the mark dimension.
inline Matrix levy_ito_path(const Vector& b1, const JumpMeasure& measure, const TimeGrid& grid, std::size_t r,
                            const CounterStream& stream) {
    const auto d = static_cast<Eigen::Index>(measure.dim());
    if (b1.size() != d) throw InputDomainError("drift b1 dimension does not match the jump mark dimension");
    if (r != 0 && static_cast<Eigen::Index>(r) != d)
        throw InputDomainError("Brownian dimension must be 0 or equal to the mark dimension");

    const auto nodes = static_cast<Eigen::Index>(grid.nodes());
    Matrix path = Matrix::Zero(d, nodes);
    if (r) path = brownian_path(grid, r, stream.child({static_cast<std::uint64_t>(StreamPurpose::Brownian)}));

    auto jump_stream = stream.child({static_cast<std::uint64_t>(StreamPurpose::Jumps)});
    const auto events = sample_prm(measure, grid, jump_stream);
    const Vector comp = measure.compensator_drift();

    std::size_t next = 0;
    Vector jumps = Vector::Zero(d);
    for (Eigen::Index i = 0; i < nodes; ++i) {
        const double t = grid.time(static_cast<std::size_t>(i));
        while (next < events.size() && events[next].time <= t) jumps += events[next++].mark;
        path.col(i) += b1 * t + jumps - comp * t;
    }
    return path;
}

}  // namespace levysde
