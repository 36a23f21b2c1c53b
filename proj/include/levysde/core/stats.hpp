#pragma once

#include <charconv>
#include <cmath>
#include <span>
#include <string>

namespace levysde {

/// Monte Carlo estimate: sample mean and its standard error.
struct Estimate {
    double mean = 0.0;
    double se = 0.0;
};

/// Mean and standard error (n - 1 denominator) folded in index order, so the
/// result does not depend on how the samples were produced.
inline Estimate estimate(std::span<const double> xs) {
    Estimate e;
    if (xs.empty()) return e;
    // shifted by the first sample: identical samples give their value exactly
    const double shift = xs.front();
    double sum = 0.0;
    for (double x : xs) sum += x - shift;
    e.mean = shift + sum / static_cast<double>(xs.size());
    if (xs.size() < 2) return e;
    double ss = 0.0;
    for (double x : xs) ss += (x - e.mean) * (x - e.mean);
    e.se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
    return e;
}

/// Shortest representation that round-trips.
inline std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

}  // namespace levysde
