#pragma once

#include "levysde/core/error.hpp"
#include "levysde/core/parallel.hpp"
#include "levysde/core/random.hpp"
#include "levysde/core/types.hpp"
#include "levysde/noise/jump_measure.hpp"
#include "levysde/noise/sampling.hpp"
#include "levysde/noise/time_grid.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace levysde {

/// Frozen noise of one path: Brownian increments (r x M) and sorted jump events.
struct PathNoise {
    std::uint64_t id = 0;
    Matrix increments;
    std::vector<JumpEvent> jumps;
};

/// Common random numbers for an ensemble of paths.
///
/// Path p's noise depends only on (seed, p): its Brownian stream is
/// (seed, Brownian, p) and its jump stream is (seed, Jumps, p). Bundles are
/// immutable once built.
class NoiseBundle {
public:
    static NoiseBundle generate(std::uint64_t seed, const TimeGrid& grid, std::size_t brownian_dim,
                                const JumpMeasure& measure, std::size_t path_count, ParallelOptions par = {}) {
        std::vector<std::uint64_t> ids(path_count);
        std::iota(ids.begin(), ids.end(), std::uint64_t{0});
        return generate(seed, grid, brownian_dim, measure, ids, par);
    }

    /// Bundle for an explicit list of path ids, in the given order.
    static NoiseBundle generate(std::uint64_t seed, const TimeGrid& grid, std::size_t brownian_dim,
                                const JumpMeasure& measure, std::span<const std::uint64_t> ids,
                                ParallelOptions par = {}) {
        NoiseBundle b(seed, grid, brownian_dim, measure.dim());
        b.paths_.resize(ids.size());
        parallel_for(
            ids.size(),
            [&](std::size_t i) {
                PathNoise& p = b.paths_[i];
                p.id = ids[i];
                p.increments =
                    brownian_increments(grid, brownian_dim, CounterStream::derive(seed, StreamPurpose::Brownian, {p.id}));
                auto js = CounterStream::derive(seed, StreamPurpose::Jumps, {p.id});
                p.jumps = sample_prm(measure, grid, js);
            },
            par);
        return b;
    }

    std::uint64_t seed() const noexcept { return seed_; }
    const TimeGrid& grid() const noexcept { return grid_; }
    std::size_t brownian_dim() const noexcept { return brownian_dim_; }
    std::size_t mark_dim() const noexcept { return mark_dim_; }
    std::size_t path_count() const noexcept { return paths_.size(); }
    const PathNoise& path(std::size_t i) const { return paths_.at(i); }
    const std::vector<PathNoise>& paths() const noexcept { return paths_; }

    /// Same realization: seed, grid, dimensions, and path ids all agree.
    bool same_source(const NoiseBundle& other) const noexcept {
        if (seed_ != other.seed_ || !(grid_ == other.grid_) || brownian_dim_ != other.brownian_dim_ ||
            paths_.size() != other.paths_.size())
            return false;
        for (std::size_t i = 0; i < paths_.size(); ++i)
            if (paths_[i].id != other.paths_[i].id) return false;
        return true;
    }

    friend bool operator==(const NoiseBundle& a, const NoiseBundle& b) {
        if (!a.same_source(b) || a.mark_dim_ != b.mark_dim_) return false;
        for (std::size_t i = 0; i < a.paths_.size(); ++i) {
            const auto& p = a.paths_[i];
            const auto& q = b.paths_[i];
            if (p.increments.rows() != q.increments.rows() || p.increments.cols() != q.increments.cols() ||
                p.increments != q.increments || p.jumps.size() != q.jumps.size())
                return false;
            for (std::size_t j = 0; j < p.jumps.size(); ++j)
                if (p.jumps[j].time != q.jumps[j].time || p.jumps[j].mark != q.jumps[j].mark) return false;
        }
        return true;
    }

    /// Binary snapshot, host byte order:
    ///   "LVYNB001", u64 seed, f64 T, u64 M, u64 r, u64 mark_dim, u64 paths,
    ///   then per path: u64 id, r*M f64 increments (step-major),
    ///   u64 jump count, per jump f64 time + mark_dim f64 mark.
    void write(std::ostream& os) const {
        os.write(kMagic.data(), kMagic.size());
        put(os, seed_);
        put(os, grid_.horizon());
        put(os, static_cast<std::uint64_t>(grid_.steps()));
        put(os, static_cast<std::uint64_t>(brownian_dim_));
        put(os, static_cast<std::uint64_t>(mark_dim_));
        put(os, static_cast<std::uint64_t>(paths_.size()));
        for (const auto& p : paths_) {
            put(os, p.id);
            for (Eigen::Index c = 0; c < p.increments.cols(); ++c)
                for (Eigen::Index r = 0; r < p.increments.rows(); ++r) put(os, p.increments(r, c));
            put(os, static_cast<std::uint64_t>(p.jumps.size()));
            for (const auto& j : p.jumps) {
                put(os, j.time);
                for (Eigen::Index k = 0; k < j.mark.size(); ++k) put(os, j.mark[k]);
            }
        }
        if (!os) throw Error("failed to write noise bundle snapshot");
    }

    static NoiseBundle read(std::istream& is) {
        std::array<char, 8> magic{};
        is.read(magic.data(), magic.size());
        if (!is || magic != kMagic) throw Error("not a noise bundle snapshot (bad magic)");
        const auto seed = get<std::uint64_t>(is);
        const auto horizon = get<double>(is);
        const auto steps = get<std::uint64_t>(is);
        const auto r = get<std::uint64_t>(is);
        const auto mark_dim = get<std::uint64_t>(is);
        const auto count = get<std::uint64_t>(is);
        NoiseBundle b(seed, TimeGrid(horizon, steps), r, mark_dim);
        b.paths_.resize(count);
        for (auto& p : b.paths_) {
            p.id = get<std::uint64_t>(is);
            p.increments.resize(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(steps));
            for (Eigen::Index c = 0; c < p.increments.cols(); ++c)
                for (Eigen::Index k = 0; k < p.increments.rows(); ++k) p.increments(k, c) = get<double>(is);
            const auto jumps = get<std::uint64_t>(is);
            p.jumps.resize(jumps);
            for (auto& j : p.jumps) {
                j.time = get<double>(is);
                j.mark.resize(static_cast<Eigen::Index>(mark_dim));
                for (Eigen::Index k = 0; k < j.mark.size(); ++k) j.mark[k] = get<double>(is);
            }
        }
        return b;
    }

private:
    static constexpr std::array<char, 8> kMagic{'L', 'V', 'Y', 'N', 'B', '0', '0', '1'};

    NoiseBundle(std::uint64_t seed, TimeGrid grid, std::size_t r, std::size_t mark_dim)
        : seed_(seed), grid_(grid), brownian_dim_(r), mark_dim_(mark_dim) {}

    template <typename T>
    static void put(std::ostream& os, T v) {
        char buf[sizeof(T)];
        std::memcpy(buf, &v, sizeof(T));
        os.write(buf, sizeof(T));
    }

    template <typename T>
    static T get(std::istream& is) {
        char buf[sizeof(T)];
        is.read(buf, sizeof(T));
        if (!is) throw Error("truncated noise bundle snapshot");
        T v;
        std::memcpy(&v, buf, sizeof(T));
        return v;
    }

    std::uint64_t seed_;
    TimeGrid grid_;
    std::size_t brownian_dim_;
    std::size_t mark_dim_;
    std::vector<PathNoise> paths_;
};

}  // namespace levysde
