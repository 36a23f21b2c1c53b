#pragma once

#include "levysde/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace levysde {

/// Nonnegative integrable function of time on [0, T]: a constant, or a step
/// function with equal-width cells. Used for lambda(t) and for the Bihari v(t).
class Rate {
public:
    static Rate constant(double value) {
        check(value);
        Rate r;
        r.values_ = {value};
        return r;
    }

    /// values[i] holds on cell [i T/n, (i+1) T/n).
    static Rate tabulated(double horizon, std::vector<double> values) {
        if (!(horizon > 0.0)) throw InputDomainError("tabulated rate needs a positive horizon");
        if (values.empty()) throw InputDomainError("tabulated rate needs at least one value");
        for (double v : values) check(v);
        Rate r;
        r.values_ = std::move(values);
        r.horizon_ = horizon;
        return r;
    }

    bool is_constant() const noexcept { return horizon_ == 0.0; }
    const std::vector<double>& values() const noexcept { return values_; }

    double operator()(double t) const noexcept { return values_[cell(t)]; }

    /// Grid max; for a step function this is the exact supremum.
    double sup() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

    /// Integral of the rate over [0, t].
    double integral(double t) const noexcept {
        if (t <= 0.0) return 0.0;
        if (is_constant()) return values_.front() * t;
        const double w = horizon_ / static_cast<double>(values_.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            const double lo = static_cast<double>(i) * w;
            if (t <= lo) break;
            acc += values_[i] * (std::min(t, lo + w) - lo);
        }
        // beyond the table the last value persists
        if (t > horizon_) acc += values_.back() * (t - horizon_);
        return acc;
    }

    /// Pointwise scaling by a nonnegative factor.
    Rate scaled(double factor) const {
        check(factor);
        Rate r = *this;
        for (double& v : r.values_) v *= factor;
        return r;
    }

private:
    Rate() = default;

    static void check(double v) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw InputDomainError("rate values must be nonnegative and finite, got " + std::to_string(v));
    }

    std::size_t cell(double t) const noexcept {
        if (is_constant() || t <= 0.0) return 0;
        const auto i = static_cast<std::size_t>(t / horizon_ * static_cast<double>(values_.size()));
        return std::min(i, values_.size() - 1);
    }

    std::vector<double> values_;
    double horizon_ = 0.0;
};

}  // namespace levysde
