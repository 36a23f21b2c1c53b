// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is the number of failed criteria (0 when all pass).

#include "levysde/levysde.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace levysde;

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

CoefficientSet ou_jump() {
    return scenarios::make("ou-jump", 1.0, {{"a", 1.0}, {"sigma", 0.3}, {"mark", 0.1}, {"mass", 1.0}, {"xi", 1.0}});
}

// One shared ou-jump solve for criteria 1 and 2.
struct OuRun {
    SolveResult result;
    double seconds = 0.0;
};

const OuRun& ou_run() {
    static const OuRun run = [] {
        SolveOptions opt;
        opt.tol = 1e-14;
        opt.max_iter = 12;
        const auto t0 = std::chrono::steady_clock::now();
        OuRun r{solve(ou_jump(), TimeGrid(1.0, 1024), 1000, kSeed, opt), 0.0};
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    }();
    return run;
}

Outcome picard_cauchy_decay() {
    const auto& run = ou_run();
    const auto& d = run.result.report.successive;
    if (d.size() < 6) return {false, fmt("only %zu successive distances", d.size())};
    bool monotone = true;
    for (std::size_t k = 1; k + 1 < d.size(); ++k)
        if (d[k + 1].distance > d[k].distance + 5 * std::max(d[k].se, d[k + 1].se)) monotone = false;
    const double ratio = d[5].distance / d[1].distance;
    const bool ok = monotone && ratio < 1e-2 && run.seconds < 120.0;
    return {ok, fmt("D(1,2)=%.3e D(5,6)=%.3e ratio=%.3e nonincreasing=%s time=%.2fs", d[1].distance, d[5].distance,
                    ratio, monotone ? "yes" : "no", run.seconds)};
}

Outcome moment_bound_criterion() {
    const auto m = moment_bound_check(ou_run().result.report, ou_jump());
    const double top = m.empirical_max + 5 * m.se_at_max;
    return {top <= m.bound, fmt("max E|X_k(t)|^2=%.4f (+5SE %.4f) bound=%.4f K1=%.4f", m.empirical_max, top, m.bound,
                                m.K1)};
}

Outcome analytic_mean() {
    const auto c = ou_jump();
    SolveOptions opt;
    opt.tol = 1e-12;
    const auto s = refinement_study(c, {256, 512, 1024}, 1000, kSeed, opt);
    const auto r = analytic_mean_check(s, std::exp(-1.0));
    std::ostringstream ratios;
    for (double q : r.ratios) ratios << q << ' ';
    return {r.pass, fmt("|mean-exact|=%.3e allowance=%.3e (3SE=%.3e, C=%.3f, dt=%.3e) ratios=%s", r.error, r.allowance,
                        3 * r.estimate.se, r.C, r.dt, ratios.str().c_str())};
}

Outcome gronwall() {
    double worst = 0.0;
    for (double u0 : {1e-6, 1e-3, 1.0})
        for (double t : {0.1, 1.0, 2.0}) {
            const double b = bihari_bound(u0, Rate::constant(1.0), moduli::linear(), t);
            worst = std::max(worst, std::abs(b - u0 * std::exp(t)) / (u0 * std::exp(t)));
        }
    return {worst <= 1e-8, fmt("max relative error %.3e", worst)};
}

Outcome delta_certificate() {
    // lambda = 1/16 and T = 1 make kappa3 = kappa
    const double T = 1.0;
    const auto w = Rate::constant(1.0 / 16);
    double lin_worst = 0.0;
    for (double eps : {0.1, 1.0, 2.0}) {
        const double d = delta_for_epsilon(moduli::linear(w), T, eps).delta;
        const double exact = eps / 2 * std::exp(-T);
        lin_worst = std::max(lin_worst, std::abs(d - exact) / exact);
    }
    const auto k = moduli::log(w);
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [&](double u) { return std::exp(u) / k(std::exp(u)); };
    bool log_ok = true;
    std::ostringstream ints;
    for (double eps : {0.1, 1.0, 2.0}) {
        const double d = delta_for_epsilon(k, T, eps).delta;
        const double lo = std::log(d), hi = std::log(eps / 2), kink = -1.0;
        const double I = hi <= kink ? ts.integrate(f, lo, hi) : ts.integrate(f, lo, kink) + ts.integrate(f, kink, hi);
        if (!(I >= T && I <= T + 1e-4)) log_ok = false;
        ints << fmt("I(%g)=%.12f ", eps, I);
    }
    return {lin_worst <= 1e-6 && log_ok, fmt("linear max rel err %.3e; log %s", lin_worst, ints.str().c_str())};
}

Outcome stability() {
    const auto c = ou_jump();
    const double lam = c.modulus.lambda().sup();
    const auto bundle =
        std::make_shared<const NoiseBundle>(NoiseBundle::generate(kSeed, TimeGrid(1.0, 256), c.r, c.measure, 1000));
    StabilityOptions so;
    so.verifier.pair_count = 2000;
    std::vector<StabilityReport> rs;
    bool ok = true;
    std::ostringstream os;
    for (double g : {1e-2, 1e-4}) {
        // smallest eps whose certificate admits this gap: delta = (eps / 2) exp(-16 T lambda)
        const double eps = 8 * g * g * std::exp(16 * lam) * (1 + 1e-6);
        const auto cert = delta_for_epsilon(c.modulus, 1.0, eps);
        const auto r = mean_square_stability_test(c, InitialLaw::point_mass(1.0), InitialLaw::point_mass(1.0 + g),
                                                  bundle, eps, so);
        if (!(4 * g * g <= cert.delta && r.precondition_held && r.gap.mean <= eps)) ok = false;
        os << fmt("g=%g eps=%.4g delta=%.4g gap=%.4e; ", g, eps, cert.delta, r.gap.mean);
        rs.push_back(r);
    }
    const double s0 = rs[0].gap.mean / 1e-4, s1 = rs[1].gap.mean / 1e-8;
    const double tol = 5 * (rs[0].gap.se / 1e-4 + rs[1].gap.se / 1e-8) + 1e-9 * std::max(s0, s1);
    const bool scales = std::abs(s0 - s1) <= tol;
    os << fmt("gap/g^2: %.9f vs %.9f", s0, s1);
    return {ok && scales, os.str()};
}

Outcome uniqueness() {
    const auto u = pathwise_uniqueness_check(ou_jump(), TimeGrid(1.0, 256), 200, kSeed, {}, kSeed + 1);
    const double other = u.distinct_seed_difference.value_or(0.0);
    return {u.replay_difference == 0.0 && other > 0.0,
            fmt("replay=%g permutation=%g distinct seeds=%.3e", u.replay_difference, u.permutation_difference, other)};
}

Outcome osgood() {
    constexpr double e = std::numbers::e;
    const double eps = 1e-4;
    struct Case {
        ConcaveModulus kappa;
        OsgoodVerdict expected;
        double closed_form;
    };
    const std::vector<Case> cases{
        {moduli::linear(), OsgoodVerdict::Divergent, std::log(1 / eps)},
        {moduli::log(), OsgoodVerdict::Divergent, (e - 1) + std::log(std::log(1 / eps))},
        {moduli::power(0.75), OsgoodVerdict::Convergent, 4 * (1 - std::pow(eps, 0.25))},
    };
    bool ok = true;
    std::ostringstream os;
    for (const auto& cs : cases) {
        const auto ev = check_osgood(cs.kappa);
        const auto at = std::find(ev.eps.begin(), ev.eps.end(), eps) - ev.eps.begin();
        const double I = ev.integral.at(static_cast<std::size_t>(at));
        const bool good = ev.verdict == cs.expected && std::abs(I - cs.closed_form) <= 1e-6;
        ok = ok && good;
        os << fmt("%s: %s I=%.9f (exact %.9f); ", cs.kappa.name().c_str(), to_string(ev.verdict), I, cs.closed_form);
    }
    return {ok, os.str()};
}

Outcome verifier() {
    const auto good = verify_assumption1(ou_jump());
    const auto bad = verify_assumption1(scenarios::make("hoelder-negative-control", 1.0));
    const double at = std::max(bad.worst_pair.y1.norm(), bad.worst_pair.y2.norm());
    const bool ok = good.pass && good.max_discrepancy <= 1e-9 && !bad.pass && at < 1e-2;
    return {ok, fmt("ou-jump max discrepancy %.3e; negative control max discrepancy %.3e, worst pair at |y|=%.3e",
                    good.max_discrepancy, bad.max_discrepancy, at)};
}

struct SampleMoments {
    double mean = 0, var = 0, se_mean = 0, se_var = 0;
};

SampleMoments sample_moments(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double m = 0;
    for (double x : xs) m += x;
    m /= n;
    double m2 = 0, m4 = 0;
    for (double x : xs) {
        const double d = x - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n - 1;
    m4 /= n;
    return {m, m2, std::sqrt(m2 / n), std::sqrt((m4 - m2 * m2) / n)};
}

Outcome noise_statistics() {
    constexpr std::size_t n = 100000;
    const auto measure = JumpMeasure::atomic(1.0, {{Vector::Constant(1, 0.5), 2.0}});
    const double horizon = 1.5, rate = 2.0 * horizon;

    std::vector<double> counts(n), incs(n), comp(n);
    auto s = CounterStream::derive(kSeed, StreamPurpose::Test);
    for (auto& x : counts) x = static_cast<double>(sample_jump_count(measure, horizon, s));
    const TimeGrid one(horizon, 1), grid(horizon, 16);
    for (std::size_t k = 0; k < n; ++k) {
        incs[k] = brownian_increments(one, 1, CounterStream::derive(kSeed, StreamPurpose::Test, {1, k}))(0, 0);
        comp[k] = levy_ito_path(Vector::Zero(1), measure, grid, 0,
                                CounterStream::derive(kSeed, StreamPurpose::Test, {2, k}))(0, 16);
    }
    const auto pc = sample_moments(counts), bi = sample_moments(incs), cj = sample_moments(comp);
    const bool ok = std::abs(pc.mean - rate) <= 4 * pc.se_mean && std::abs(pc.var - rate) <= 4 * pc.se_var &&
                    std::abs(bi.var - horizon) <= 4 * bi.se_var && std::abs(cj.mean) <= 5 * cj.se_mean;
    return {ok, fmt("Poisson mean %.4f var %.4f (theory %.1f); Brownian var %.4f (theory %.1f); compensated mean "
                    "%.2e (SE %.2e)",
                    pc.mean, pc.var, rate, bi.var, horizon, cj.mean, cj.se_mean)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"picard-cauchy-decay", picard_cauchy_decay},
        {"moment-bound", moment_bound_criterion},
        {"analytic-mean", analytic_mean},
        {"gronwall-specialization", gronwall},
        {"delta-certificate", delta_certificate},
        {"mean-square-stability", stability},
        {"pathwise-uniqueness-replay", uniqueness},
        {"osgood-classifier", osgood},
        {"assumption-verifier", verifier},
        {"noise-statistics", noise_statistics},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed;
}
