#pragma once

#include "levysde/core/error.hpp"
#include "levysde/model/rate.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace levysde {

/// Affine domination kappa(q) <= a + b q for q >= 0.
struct AffineDomination {
    double a = 0.0;
    double b = 0.0;
};

enum class ConcavityMode { Kappa, KappaSquaredOverQ };

inline const char* to_string(ConcavityMode m) { return m == ConcavityMode::Kappa ? "kappa" : "kappa^2/q"; }

/// Below this argument kappa is replaced by its chord through the origin.
inline constexpr double kModulusFloor = 1e-300;

/// The non-Lipschitz modulus kappa together with its time weight lambda(t).
class ConcaveModulus {
public:
    using Function = std::function<double(double)>;

    ConcaveModulus(std::string name, Function kappa, Rate lambda, std::optional<AffineDomination> domination,
                   bool osgood, ConcavityMode mode = ConcavityMode::Kappa, std::vector<double> breakpoints = {})
        : name_(std::move(name)),
          kappa_(std::make_shared<const Function>(std::move(kappa))),
          lambda_(std::move(lambda)),
          domination_(domination),
          osgood_(osgood),
          mode_(mode),
          breakpoints_(std::move(breakpoints)) {
        if (!*kappa_) throw InputDomainError("modulus " + name_ + " has no kappa function");
    }

    const std::string& name() const noexcept { return name_; }
    const Rate& lambda() const noexcept { return lambda_; }
    const std::optional<AffineDomination>& domination() const noexcept { return domination_; }
    bool declared_osgood() const noexcept { return osgood_; }
    ConcavityMode concavity_mode() const noexcept { return mode_; }

    /// Points where kappa has a kink; quadratures split there.
    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

    /// kappa(q) with kappa(0) = 0 and the linear chord below kModulusFloor.
    double operator()(double q) const {
        if (q < 0.0 || std::isnan(q)) throw InputDomainError("modulus argument must be >= 0");
        if (q == 0.0) return 0.0;
        if (q < kModulusFloor) return q * (scale_ * (*kappa_)(kModulusFloor) / kModulusFloor);
        return scale_ * (*kappa_)(q);
    }

    /// c * kappa with the same lambda, e.g. kappa_3 = 16 T sup(lambda) kappa.
    ConcaveModulus scaled(double c, std::string name) const {
        if (!(c > 0.0) || !std::isfinite(c)) throw InputDomainError("modulus scale must be positive");
        ConcaveModulus m = *this;
        m.name_ = std::move(name);
        m.scale_ *= c;
        if (m.domination_) {
            m.domination_->a *= c;
            m.domination_->b *= c;
        }
        return m;
    }

    ConcaveModulus with_lambda(Rate lambda) const {
        ConcaveModulus m = *this;
        m.lambda_ = std::move(lambda);
        return m;
    }

private:
    std::string name_;
    std::shared_ptr<const Function> kappa_;
    Rate lambda_;
    std::optional<AffineDomination> domination_;
    bool osgood_;
    ConcavityMode mode_;
    std::vector<double> breakpoints_;
    double scale_ = 1.0;
};

namespace moduli {

/// kappa(q) = q; the Lipschitz case.
inline ConcaveModulus linear(Rate lambda = Rate::constant(1.0)) {
    return ConcaveModulus("linear", [](double q) { return q; }, std::move(lambda), AffineDomination{0.0, 1.0}, true);
}

/// kappa(q) = q ln(1/q) on (0, 1/e], constant 1/e beyond (the tangent there is flat).
inline ConcaveModulus log(Rate lambda = Rate::constant(1.0)) {
    constexpr double cut = 1.0 / std::numbers::e;
    return ConcaveModulus(
        "log", [](double q) { return q <= cut ? -q * std::log(q) : cut; }, std::move(lambda),
        AffineDomination{cut, 0.0}, true, ConcavityMode::Kappa, {cut});
}

/// kappa(q) = q ln(1/q) ln ln(1/q) on (0, e^-e], tangent line beyond.
inline ConcaveModulus loglog(Rate lambda = Rate::constant(1.0)) {
    const double cut = std::exp(-std::numbers::e);
    const double at_cut = std::exp(1.0 - std::numbers::e);
    const double slope = std::numbers::e - 2.0;
    return ConcaveModulus(
        "loglog",
        [=](double q) {
            if (q <= cut) {
                const double l = -std::log(q);
                return q * l * std::log(l);
            }
            return at_cut + slope * (q - cut);
        },
        std::move(lambda), AffineDomination{2.0 * cut, slope}, true, ConcavityMode::Kappa, {cut});
}

/// kappa(q) = q^alpha, 0 < alpha < 1; not Osgood. Young: q^alpha <= (1 - alpha) + alpha q.
inline ConcaveModulus power(double alpha, Rate lambda = Rate::constant(1.0)) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputDomainError("power modulus needs 0 < alpha < 1");
    return ConcaveModulus(
        "power", [alpha](double q) { return std::pow(q, alpha); }, std::move(lambda),
        AffineDomination{1.0 - alpha, alpha}, false);
}

/// kappa(q) = q^alpha on [0, 1], tangent line 1 + alpha (q - 1) beyond.
inline ConcaveModulus truncated_power(double alpha, Rate lambda = Rate::constant(1.0)) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputDomainError("truncated power modulus needs 0 < alpha < 1");
    return ConcaveModulus(
        "truncated-power", [alpha](double q) { return q <= 1.0 ? std::pow(q, alpha) : 1.0 + alpha * (q - 1.0); },
        std::move(lambda), AffineDomination{1.0 - alpha, alpha}, false, ConcavityMode::Kappa, {1.0});
}

using Params = std::map<std::string, double>;

inline std::vector<std::string> names() { return {"linear", "log", "loglog", "power", "truncated-power"}; }

inline double param(const Params& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

/// Registry lookup. Recognized parameters: "lambda" (constant weight) for all,
/// "alpha" for the power families.
inline ConcaveModulus make(const std::string& name, const Params& p = {}) {
    const Rate lambda = Rate::constant(param(p, "lambda", 1.0));
    if (name == "linear") return linear(lambda);
    if (name == "log") return log(lambda);
    if (name == "loglog") return loglog(lambda);
    if (name == "power") return power(param(p, "alpha", 0.75), lambda);
    if (name == "truncated-power") return truncated_power(param(p, "alpha", 0.5), lambda);
    std::string known;
    for (const auto& n : names()) known += (known.empty() ? "" : ", ") + n;
    throw InputDomainError("unknown modulus '" + name + "' (known: " + known + ")");
}

}  // namespace moduli

/// Grid checks of the structural conditions on kappa.
struct ModulusShapeReport {
    bool zero_at_origin = false;
    bool monotone = false;
    bool concave = false;
    bool dominated = false;
    double worst_concavity_gap = 0.0;  // max of avg - kappa(mid); <= tol passes
    double worst_domination_gap = 0.0;  // max of kappa - (a + b q)

    bool ok() const noexcept { return zero_at_origin && monotone && concave && dominated; }
};

inline std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    v.front() = lo;
    v.back() = hi;
    return v;
}

/// kappa(0) = 0, monotonicity, midpoint concavity over all pairs of grid points
/// (applied to kappa or kappa^2/q according to the declared mode), and affine
/// domination on the grid.
inline ModulusShapeReport check_modulus_shape(const ConcaveModulus& kappa, const std::vector<double>& grid,
                                              double tol = 1e-12) {
    ModulusShapeReport r;
    r.zero_at_origin = kappa(0.0) == 0.0;

    r.monotone = true;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (kappa(grid[i]) < kappa(grid[i - 1]) - tol) r.monotone = false;

    auto shaped = [&](double q) {
        const double k = kappa(q);
        return kappa.concavity_mode() == ConcavityMode::Kappa ? k : k * k / q;
    };
    r.worst_concavity_gap = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            const double gap = 0.5 * (shaped(grid[i]) + shaped(grid[j])) - shaped(0.5 * (grid[i] + grid[j]));
            r.worst_concavity_gap = std::max(r.worst_concavity_gap, gap);
        }
    r.concave = r.worst_concavity_gap <= tol;

    if (kappa.domination()) {
        const auto [a, b] = *kappa.domination();
        r.worst_domination_gap = -std::numeric_limits<double>::infinity();
        for (double q : grid) r.worst_domination_gap = std::max(r.worst_domination_gap, kappa(q) - (a + b * q));
        r.dominated = r.worst_domination_gap <= tol;
    }
    return r;
}

}  // namespace levysde
