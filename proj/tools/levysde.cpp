#include "levysde/levysde.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace levysde;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<std::size_t> steps;
    std::optional<std::string> out;
    std::size_t workers = 0;
    bool quiet = false;
};

void print_problems(const ConfigValidationError& e) {
    std::cerr << "invalid config:\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << '\n';
}

// Applies the command-line overrides and re-validates the result.
ExperimentConfig load(const std::string& path, const Overrides& o) {
    ExperimentConfig cfg = parse_config(path);
    if (o.seed) cfg.seed = *o.seed;
    if (o.paths) cfg.paths = *o.paths;
    if (o.steps) cfg.steps = *o.steps;
    if (o.out) cfg.output_dir = *o.out;
    return parse_config_json(cfg.to_json());
}

int cmd_run(const std::string& path, const Overrides& o) {
    ExperimentConfig cfg;
    try {
        cfg = load(path, o);
    } catch (const ConfigValidationError& e) {
        print_problems(e);
        return kExitConfigError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
    RunOptions ro;
    ro.par.workers = o.workers;
    if (!o.quiet) ro.log = [](const std::string& s) { std::cerr << "[levysde] " << s << '\n'; };
    RunResult r;
    try {
        r = run_experiment(cfg, ro);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDiagnosticFailed;
    }
    for (const auto& d : r.diagnostics)
        std::cout << (d.pass ? "PASS " : "FAIL ") << d.name << ": " << d.detail << '\n';
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "output: " << r.output_dir.string() << '\n';
    if (!r.error.empty()) std::cerr << "error: " << r.error << '\n';
    return r.exit_code;
}

int cmd_check(const std::string& path, const Overrides& o) {
    try {
        const auto cfg = load(path, o);
        std::cout << "ok: " << cfg.scenario << ", T=" << format_double(cfg.horizon) << ", M=" << cfg.steps
                  << ", paths=" << cfg.paths << ", seed=" << cfg.seed << '\n';
        return kExitOk;
    } catch (const ConfigValidationError& e) {
        print_problems(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return kExitConfigError;
}

void cmd_list_scenarios() {
    for (const auto& s : scenarios::registry()) {
        std::cout << s.name << "\n  " << s.summary << "\n  defaults:";
        for (const auto& [k, v] : s.defaults) std::cout << ' ' << k << '=' << format_double(v);
        std::cout << '\n';
    }
}

void cmd_list_moduli() {
    for (const auto& n : moduli::names()) {
        const auto m = moduli::make(n, {});
        std::cout << n << "\tosgood=" << (m.declared_osgood() ? "yes" : "no");
        if (const auto& dom = m.domination()) std::cout << "\ta=" << format_double(dom->a) << "\tb=" << format_double(dom->b);
        std::cout << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Picard solver and diagnostics for SDEs driven by small-jump Levy noise"};
    app.require_subcommand(1);
    Overrides o;

    std::string config;
    auto add_overrides = [&](CLI::App* sub) {
        sub->add_option("config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "override the master seed");
        sub->add_option("--paths", o.paths, "override the Monte Carlo path count");
        sub->add_option("--steps", o.steps, "override grid.M (power of two)");
        sub->add_option("--out", o.out, std::string("output directory (default: config output_dir, then $") +
                                            kOutputDirEnv + ", then ./levysde-out)");
    };
    auto* run = app.add_subcommand("run", "run every enabled diagnostic of a config");
    add_overrides(run);
    run->add_option("--workers", o.workers, "worker threads (0 = hardware concurrency)");
    run->add_flag("--quiet", o.quiet, "suppress progress lines");
    auto* check = app.add_subcommand("check-config", "validate a config and report all problems");
    add_overrides(check);
    auto* ls = app.add_subcommand("list-scenarios", "list built-in coefficient scenarios");
    auto* lm = app.add_subcommand("list-moduli", "list built-in concave moduli");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfigError;
    }

    if (*run) return cmd_run(config, o);
    if (*check) return cmd_check(config, o);
    if (*ls) cmd_list_scenarios();
    if (*lm) cmd_list_moduli();
    return kExitOk;
}
