#pragma once

#include "levysde/core/error.hpp"
#include "levysde/core/stats.hpp"
#include "levysde/experiment/config.hpp"
#include "levysde/experiment/refinement.hpp"
#include "levysde/experiment/report_io.hpp"
#include "levysde/experiment/scenarios.hpp"
#include "levysde/model/assumption.hpp"
#include "levysde/model/osgood.hpp"
#include "levysde/noise/noise_bundle.hpp"
#include "levysde/picard/diagnostics.hpp"
#include "levysde/picard/solver.hpp"
#include "levysde/stability/stability_test.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace levysde {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kOutputDirEnv = "LEVYSDE_OUTPUT_DIR";

enum ExitCode : int {
    kExitOk = 0,
    kExitDiagnosticFailed = 1,
    kExitConfigError = 2,
    kExitDiverged = 3,
    kExitIoError = 4,
};

class IoError : public Error {
public:
    IoError(const std::string& what, std::filesystem::path path)
        : Error(what + ": " + path.string()), path_(std::move(path)) {}
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

/// Config output_dir, else $LEVYSDE_OUTPUT_DIR, else ./levysde-out.
inline std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg) {
    if (cfg.output_dir) return *cfg.output_dir;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return "levysde-out";
}

/// Coefficients of the configured scenario, with the modulus override applied.
inline CoefficientSet build_coefficients(const ExperimentConfig& cfg) {
    CoefficientSet c = scenarios::make(cfg.scenario, cfg.horizon, cfg.params);
    if (cfg.modulus) c.modulus = moduli::make(*cfg.modulus, cfg.modulus_params);
    return c;
}

/// Tables for plotting; every member is optional.
struct PlotData {
    std::optional<ConvergenceReport> convergence;
    /// Node profile of the returned iterate and the moment bound line.
    struct Moments {
        std::vector<double> t;
        MomentProfile final_iterate;
        std::vector<double> max_over_iterates;
        double bound = 0.0;
    };
    std::optional<Moments> moments;
    std::vector<StabilityReport> stability;

    bool empty() const noexcept { return !convergence && !moments && stability.empty(); }
};

struct PlotFile {
    std::string name;
    std::string columns;
};

inline std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write file", path);
    return os;
}

/// Writes one plain tab-separated table per available data set. Returns the
/// files written (none for an empty data set).
inline std::vector<PlotFile> emit_plot_data(const PlotData& data, const std::filesystem::path& dir) {
    std::vector<PlotFile> files;
    if (data.empty()) return files;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create plot directory", dir);

    using report::num;
    if (data.convergence) {
        PlotFile f{"plot_distances.tsv", "k: iterate index; D: E sup|X_{k+1}-X_k|^2; SE: standard error"};
        auto os = open_for_write(dir / f.name);
        os << "k\tD\tSE\n";
        for (const auto& d : data.convergence->successive)
            os << d.k << '\t' << num(d.distance) << '\t' << num(d.se) << '\n';
        files.push_back(f);
    }
    if (data.moments) {
        PlotFile f{"plot_moments.tsv",
                   "t: node time; EX2: E|X(t)|^2 of the returned iterate; SE; EX2_max_k: max over iterates; "
                   "bound: 4(1+E|xi|^2)exp(4 K1 T^2)"};
        auto os = open_for_write(dir / f.name);
        const auto& m = *data.moments;
        os << "t\tEX2\tSE\tEX2_max_k\tbound\n";
        for (std::size_t i = 0; i < m.t.size(); ++i)
            os << num(m.t[i]) << '\t' << num(m.final_iterate.mean[i]) << '\t' << num(m.final_iterate.se[i]) << '\t'
               << num(m.max_over_iterates[i]) << '\t' << num(m.bound) << '\n';
        files.push_back(f);
    }
    if (!data.stability.empty()) {
        PlotFile f{"plot_stability.tsv",
                   "eps; delta: certificate (NA if none); initial_gap: E|xi-eta|^2; gap: E sup|X^xi-X^eta|^2; "
                   "pass: gap <= eps + 5 SE"};
        auto os = open_for_write(dir / f.name);
        os << "eps\tdelta\tinitial_gap\tgap\tpass\n";
        for (const auto& r : data.stability)
            os << num(r.eps) << '\t' << (r.certificate ? num(r.certificate->delta) : std::string("NA")) << '\t'
               << num(r.initial_gap) << '\t' << num(r.gap.mean) << '\t' << (r.pass ? 1 : 0) << '\n';
        files.push_back(f);
    }
    return files;
}

struct DiagnosticOutcome {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct RunResult {
    int exit_code = kExitOk;
    std::filesystem::path output_dir;
    std::vector<DiagnosticOutcome> diagnostics;
    std::vector<std::string> files;
    std::vector<std::string> warnings;
    std::string error;

    std::vector<std::string> failed() const {
        std::vector<std::string> out;
        for (const auto& d : diagnostics)
            if (!d.pass) out.push_back(d.name);
        return out;
    }
};

struct RunOptions {
    /// Include wall-clock time in the manifest (off for byte-stable manifests).
    bool timestamp = true;
    ParallelOptions par{};
    /// Progress lines, e.g. to stderr.
    std::function<void(const std::string&)> log;
};

namespace detail {

inline std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

template <typename Writer>
void write_report(const std::filesystem::path& dir, const std::string& name, RunResult& res, Writer&& w) {
    auto os = open_for_write(dir / name);
    w(os);
    if (!os) throw IoError("failed writing report", dir / name);
    res.files.push_back(name);
}

}  // namespace detail

/// Runs every enabled diagnostic of a validated config and writes reports,
/// plot tables, and manifest.json into the output directory.
/// Exit code: 0 all enabled diagnostics pass, 1 some failed, 3 solver
/// divergence, 4 I/O failure.
inline RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& ropt = {}) {
    RunResult res;
    res.output_dir = resolve_output_dir(cfg);
    auto log = [&](const std::string& s) {
        if (ropt.log) ropt.log(s);
    };
    const auto& dir = res.output_dir;

    nlohmann::json manifest;
    manifest["tool"] = "levysde";
    manifest["version"] = kVersion;
    manifest["config"] = cfg.to_json();
    manifest["seed"] = cfg.seed;
    if (ropt.timestamp) manifest["created_utc"] = detail::utc_now();

    auto finish = [&]() {
        nlohmann::json diags = nlohmann::json::array();
        for (const auto& d : res.diagnostics) diags.push_back({{"name", d.name}, {"pass", d.pass}, {"detail", d.detail}});
        manifest["diagnostics"] = diags;
        manifest["warnings"] = res.warnings;
        manifest["exit_code"] = res.exit_code;
        if (!res.error.empty()) manifest["error"] = res.error;
        try {
            auto os = open_for_write(dir / "manifest.json");
            os << manifest.dump(2) << '\n';
        } catch (const IoError& e) {
            res.exit_code = kExitIoError;
            res.error = e.what();
        }
        return res;
    };

    try {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory", dir);

        const CoefficientSet coeffs = build_coefficients(cfg);
        const TimeGrid grid(cfg.horizon, cfg.steps);
        SolveOptions sopt;
        sopt.tol = cfg.solver_tol;
        sopt.max_iter = cfg.max_iter;
        sopt.par = ropt.par;

        VerifierConfig vcfg;
        vcfg.pair_count = cfg.verifier_pairs;
        vcfg.box_radius = cfg.verifier_radius;
        vcfg.near_origin_fraction = cfg.verifier_near_origin;
        vcfg.tol = cfg.assumption_tol;
        vcfg.seed = cfg.seed;

        nlohmann::json columns;
        PlotData plot;
        std::optional<bool> assumption_ok;

        if (cfg.diagnostics.assumption1) {
            log("assumption1: verifying over " + std::to_string(vcfg.pair_count) + " sampled pairs");
            const auto r = verify_assumption1(coeffs, vcfg);
            assumption_ok = r.pass;
            detail::write_report(dir, "assumption1.tsv", res, [&](std::ostream& os) { report::write_assumption1(os, r); });
            res.diagnostics.push_back({"assumption1", r.pass,
                                       "max discrepancy " + report::num(r.max_discrepancy) + ", worst pair y1=" +
                                           to_string(r.worst_pair.y1) + " y2=" + to_string(r.worst_pair.y2)});
        }

        if (cfg.diagnostics.osgood) {
            log("osgood: integrating 1/kappa for " + coeffs.modulus.name());
            OsgoodOptions oo;
            oo.tol = cfg.quadrature_tol;
            const auto ev = check_osgood(coeffs.modulus, default_osgood_eps(), oo);
            detail::write_report(dir, "osgood.tsv", res,
                                 [&](std::ostream& os) { report::write_osgood(os, ev, coeffs.modulus.name()); });
            res.diagnostics.push_back({"osgood", ev.verdict == OsgoodVerdict::Divergent,
                                       std::string(to_string(ev.verdict)) + " (" + ev.note + ")"});
        }

        const bool need_solve = cfg.diagnostics.cauchy || cfg.diagnostics.moment_bound;
        if (need_solve) {
            log("solve: Picard iteration on " + std::to_string(cfg.paths) + " paths, M=" + std::to_string(cfg.steps));
            auto bundle = std::make_shared<const NoiseBundle>(
                NoiseBundle::generate(cfg.seed, grid, coeffs.r, coeffs.measure, cfg.paths, ropt.par));
            std::optional<SolveResult> solved;
            try {
                solved.emplace(solve(coeffs, bundle, sopt));
            } catch (const SolverDivergedError& e) {
                detail::write_report(dir, "convergence.tsv", res,
                                     [&](std::ostream& os) { report::write_convergence(os, e.report()); });
                res.diagnostics.push_back({"cauchy", false, e.what()});
                res.error = e.what();
                res.exit_code = kExitDiverged;
                return finish();
            }
            const auto& rep = solved->report;
            if (cfg.diagnostics.cauchy) {
                detail::write_report(dir, "convergence.tsv", res,
                                     [&](std::ostream& os) { report::write_convergence(os, rep); });
                plot.convergence = rep;
                res.diagnostics.push_back({"cauchy", rep.verdict == SolveVerdict::Converged,
                                           std::string(to_string(rep.verdict)) + " after " +
                                               std::to_string(rep.iterations) + " iterations"});
            }
            if (cfg.diagnostics.moment_bound) {
                const auto m = moment_bound_check(rep, coeffs);
                detail::write_report(dir, "moment_bound.tsv", res,
                                     [&](std::ostream& os) { report::write_moment_bound(os, m); });
                PlotData::Moments pm;
                for (std::size_t i = 0; i < grid.nodes(); ++i) pm.t.push_back(grid.time(i));
                pm.final_iterate = rep.moments.back();
                pm.max_over_iterates.assign(grid.nodes(), 0.0);
                for (const auto& prof : rep.moments)
                    for (std::size_t i = 0; i < grid.nodes(); ++i)
                        pm.max_over_iterates[i] = std::max(pm.max_over_iterates[i], prof.mean[i]);
                pm.bound = m.bound;
                plot.moments = std::move(pm);
                res.diagnostics.push_back({"moment_bound", m.pass,
                                           "max E|X|^2 " + report::num(m.empirical_max) + " vs bound " +
                                               report::num(m.bound) + (m.horizon_below_one ? " (T < 1)" : "")});
            }
        }

        if (cfg.diagnostics.uniqueness) {
            log("uniqueness: deterministic replay");
            try {
                const auto u = pathwise_uniqueness_check(coeffs, grid, cfg.paths, cfg.seed, sopt, cfg.seed + 1);
                detail::write_report(dir, "uniqueness.tsv", res, [&](std::ostream& os) { report::write_uniqueness(os, u); });
                res.diagnostics.push_back({"uniqueness", u.pass, "replay difference " + report::num(u.replay_difference)});
            } catch (const ReplayBrokenError& e) {
                res.diagnostics.push_back({"uniqueness", false, e.what()});
            }
        }

        if (cfg.diagnostics.analytic_mean) {
            const auto exact = scenarios::analytic_mean(cfg.scenario, cfg.params, cfg.horizon);
            if (!exact) {
                res.warnings.push_back("analytic_mean: scenario '" + cfg.scenario + "' has no closed-form mean; skipped");
            } else if (cfg.steps < 4) {
                res.warnings.push_back("analytic_mean: needs grid.M >= 4 for a three-level refinement; skipped");
            } else {
                log("analytic_mean: refinement study");
                const auto study = refinement_study(coeffs, {cfg.steps / 4, cfg.steps / 2, cfg.steps}, cfg.paths,
                                                    cfg.seed, sopt);
                const auto a = analytic_mean_check(study, *exact);
                detail::write_report(dir, "analytic_mean.tsv", res, [&](std::ostream& os) {
                    report::meta(os, "report", "analytic-mean");
                    report::meta(os, "pass", report::yes_no(a.pass));
                    report::meta(os, "exact", report::num(a.exact));
                    report::meta(os, "C", report::num(a.C));
                    os << "M\tdt\tmean_X_T\tSE\titerations\n";
                    for (const auto& l : study.levels)
                        os << l.steps << '\t' << report::num(l.dt) << '\t' << report::num(l.terminal_mean.mean) << '\t'
                           << report::num(l.terminal_mean.se) << '\t' << l.iterations << '\n';
                });
                res.diagnostics.push_back({"analytic_mean", a.pass,
                                           "|error| " + report::num(a.error) + " vs allowance " +
                                               report::num(a.allowance)});
            }
        }

        if (cfg.diagnostics.stability) {
            log("stability: sweep over " + std::to_string(cfg.diagnostics.stability_eps.size()) + " eps values");
            auto bundle = std::make_shared<const NoiseBundle>(
                NoiseBundle::generate(cfg.seed, grid, coeffs.r, coeffs.measure, cfg.paths, ropt.par));
            StabilityOptions st;
            st.solve = sopt;
            st.verify_assumption = false;
            bool all = true;
            const BihariTransform g(coeffs.modulus, cfg.quadrature_tol);
            for (double eps : cfg.diagnostics.stability_eps) {
                // eta sits at 4 E|xi - eta|^2 = delta(eps) / 2 along the first axis
                Vector xi = coeffs.xi.point() ? *coeffs.xi.point() : Vector(Vector::Zero(static_cast<Eigen::Index>(coeffs.d)));
                Vector eta = xi;
                double gap = 0.0;
                try {
                    gap = std::sqrt(delta_for_epsilon(g, coeffs.horizon, eps).delta / 8.0);
                } catch (const NoCertificateError&) {
                    gap = std::sqrt(eps) / 4.0;
                }
                eta[0] += gap;
                auto r = mean_square_stability_test(coeffs, InitialLaw::point_mass(xi), InitialLaw::point_mass(eta),
                                                    bundle, eps, st);
                if (assumption_ok && !*assumption_ok) {
                    r.certificate_applicable = false;
                    r.certificate_note = "non-Lipschitz condition verifier failed; certificate inapplicable";
                }
                all = all && r.pass;
                plot.stability.push_back(std::move(r));
            }
            detail::write_report(dir, "stability.tsv", res,
                                 [&](std::ostream& os) { report::write_stability(os, plot.stability); });
            res.diagnostics.push_back({"stability", all, std::to_string(plot.stability.size()) + " eps values"});
        }

        const auto plot_files = emit_plot_data(plot, dir);
        if (plot_files.empty()) res.warnings.push_back("no plot data: no diagnostic produced a table");
        for (const auto& f : plot_files) {
            res.files.push_back(f.name);
            columns[f.name] = f.columns;
        }
        manifest["plot_columns"] = columns;
        manifest["files"] = res.files;
        if (res.diagnostics.empty()) res.warnings.push_back("no diagnostics enabled");

        res.exit_code = res.failed().empty() ? kExitOk : kExitDiagnosticFailed;
        if (res.exit_code != kExitOk) res.error = "failed diagnostics: " + detail::joined(res.failed());
    } catch (const IoError& e) {
        res.exit_code = kExitIoError;
        res.error = e.what();
        return res;
    }
    return finish();
}

}  // namespace levysde
