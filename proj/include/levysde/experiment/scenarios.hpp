#pragma once

#include "levysde/core/error.hpp"
#include "levysde/model/coefficients.hpp"
#include "levysde/model/modulus.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace levysde::scenarios {

using Params = std::map<std::string, double>;

inline double param(const Params& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

struct ScenarioInfo {
    std::string name;
    std::string summary;
    std::vector<std::pair<std::string, double>> defaults;
    /// Expected to pass the non-Lipschitz condition verifier with its declared modulus.
    bool satisfies_assumption = true;
};

inline const std::vector<ScenarioInfo>& registry() {
    static const std::vector<ScenarioInfo> infos{
        {"zero", "b = sigma = F = 0; X(t) = xi", {{"xi", 1.0}}, true},
        {"deterministic-exp", "b(y) = a y, sigma = F = 0; X(t) = xi e^{a t}", {{"a", 1.0}, {"xi", 1.0}}, true},
        {"ou-jump",
         "b(y) = -a y, sigma constant, F(t,y,x) = x with one jump atom; E X(t) = xi e^{-a t}",
         {{"a", 1.0}, {"sigma", 0.3}, {"mark", 0.1}, {"mass", 1.0}, {"cutoff", 1.0}, {"xi", 1.0}},
         true},
        {"log-modulus-drift",
         "b(y) = sqrt(kappa(y^2)) for kappa(q) = q ln(1/q); tight non-Lipschitz drift at the origin",
         {{"sigma", 0.3}, {"mark", 0.1}, {"mass", 1.0}, {"cutoff", 1.0}, {"xi", 0.0}},
         true},
        {"hoelder-negative-control", "b(y) = |y|^{1/4}, sigma = F = 0, declared kappa(q) = q: fails the non-Lipschitz condition",
         {{"xi", 0.0}},
         false},
    };
    return infos;
}

inline std::vector<std::string> names() {
    std::vector<std::string> out;
    for (const auto& s : registry()) out.push_back(s.name);
    return out;
}

inline bool known(const std::string& name) {
    for (const auto& s : registry())
        if (s.name == name) return true;
    return false;
}

/// Builds the named scenario on [0, horizon]. Unknown parameters are ignored;
/// missing ones take the registry defaults.
inline CoefficientSet make(const std::string& name, double horizon, const Params& p = {}) {
    CoefficientSet c;
    c.name = name;
    c.horizon = horizon;
    c.d = 1;
    const double xi = param(p, "xi", name == "zero" || name == "deterministic-exp" || name == "ou-jump" ? 1.0 : 0.0);
    c.xi = InitialLaw::point_mass(xi);

    if (name == "zero") {
        c.r = 0;
        c.drift = zero_drift(1);
        c.diffusion = zero_diffusion(1, 0);
        c.jump = zero_jump(1);
        c.measure = JumpMeasure::empty(1.0);
        c.modulus = moduli::linear();
        return c;
    }
    if (name == "deterministic-exp") {
        const double a = param(p, "a", 1.0);
        c.r = 0;
        c.drift = [a](double, const Vector& y) { return Vector(a * y); };
        c.diffusion = zero_diffusion(1, 0);
        c.jump = zero_jump(1);
        c.measure = JumpMeasure::empty(1.0);
        c.modulus = moduli::linear(Rate::constant(a * a));
        return c;
    }
    if (name == "ou-jump" || name == "log-modulus-drift") {
        const double sigma = param(p, "sigma", 0.3);
        const double mark = param(p, "mark", 0.1);
        const double mass = param(p, "mass", 1.0);
        const double cutoff = param(p, "cutoff", 1.0);
        c.r = 1;
        c.diffusion = [sigma](double, const Vector&) { return Matrix::Constant(1, 1, sigma).eval(); };
        c.jump = [](double, const Vector&, const Vector& x) { return x; };
        c.measure = mass > 0.0 ? JumpMeasure::atomic(cutoff, {{Vector::Constant(1, mark), mass}})
                               : JumpMeasure::empty(cutoff);
        if (name == "ou-jump") {
            const double a = param(p, "a", 1.0);
            c.drift = [a](double, const Vector& y) { return Vector(-a * y); };
            c.modulus = moduli::linear(Rate::constant(a * a));
        } else {
            auto kappa = moduli::log();
            c.drift = [kappa](double, const Vector& y) {
                return Vector::Constant(1, std::sqrt(kappa(y[0] * y[0]))).eval();
            };
            c.modulus = kappa;
        }
        return c;
    }
    if (name == "hoelder-negative-control") {
        c.r = 0;
        c.drift = [](double, const Vector& y) { return Vector::Constant(1, std::pow(std::abs(y[0]), 0.25)).eval(); };
        c.diffusion = zero_diffusion(1, 0);
        c.jump = zero_jump(1);
        c.measure = JumpMeasure::empty(1.0);
        c.modulus = moduli::linear();
        return c;
    }
    std::string known_names;
    for (const auto& n : names()) known_names += (known_names.empty() ? "" : ", ") + n;
    throw InputDomainError("unknown scenario '" + name + "' (known: " + known_names + ")");
}

/// E X(t) in closed form where the scenario has one.
inline std::optional<double> analytic_mean(const std::string& name, const Params& p, double t) {
    if (name == "zero") return param(p, "xi", 1.0);
    if (name == "deterministic-exp") return param(p, "xi", 1.0) * std::exp(param(p, "a", 1.0) * t);
    // compensated jumps and the Ito integral have mean zero
    if (name == "ou-jump") return param(p, "xi", 1.0) * std::exp(-param(p, "a", 1.0) * t);
    return std::nullopt;
}

}  // namespace levysde::scenarios
