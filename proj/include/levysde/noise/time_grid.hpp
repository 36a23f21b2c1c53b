#pragma once

#include "levysde/core/error.hpp"

#include <bit>
#include <cmath>
#include <cstddef>
#include <string>

namespace levysde {

/// Uniform grid t_i = i T / M on [0, T] with M a power of two.
class TimeGrid {
public:
    TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
        if (!(horizon > 0.0) || !std::isfinite(horizon))
            throw InputDomainError("time grid horizon must be positive and finite, got " + std::to_string(horizon));
        if (steps == 0 || !std::has_single_bit(steps))
            throw InputDomainError("time grid steps must be a power of two, got " + std::to_string(steps));
    }

    double horizon() const noexcept { return horizon_; }
    std::size_t steps() const noexcept { return steps_; }
    std::size_t nodes() const noexcept { return steps_ + 1; }
    double dt() const noexcept { return horizon_ / static_cast<double>(steps_); }

    /// log2(M).
    unsigned level() const noexcept { return static_cast<unsigned>(std::countr_zero(steps_)); }

    double time(std::size_t i) const noexcept {
        return i == steps_ ? horizon_ : horizon_ * static_cast<double>(i) / static_cast<double>(steps_);
    }

    /// Index of the last node strictly before tau, for tau in (0, T].
    std::size_t node_before(double tau) const noexcept {
        auto i = static_cast<std::size_t>(std::ceil(tau / dt()));
        if (i == 0) i = 1;
        if (i > steps_) i = steps_;
        // ceil can land one cell off when tau sits within rounding of a node
        while (i > 1 && time(i - 1) >= tau) --i;
        while (i < steps_ && time(i) < tau) ++i;
        return i - 1;
    }

    TimeGrid refined() const { return TimeGrid(horizon_, steps_ * 2); }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double horizon_;
    std::size_t steps_;
};

}  // namespace levysde
