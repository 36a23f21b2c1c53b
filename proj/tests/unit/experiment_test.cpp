#include "levysde/experiment/config.hpp"
#include "levysde/experiment/refinement.hpp"
#include "levysde/experiment/runner.hpp"
#include "levysde/experiment/scenarios.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <unistd.h>

namespace {

using namespace levysde;
namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("levysde_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> problems_of(const std::string& text) {
    try {
        (void)parse_config_text(text);
    } catch (const ConfigValidationError& e) {
        return e.problems();
    }
    return {};
}

bool mentions(const std::vector<std::string>& ps, const std::string& needle) {
    for (const auto& p : ps)
        if (p.find(needle) != std::string::npos) return true;
    return false;
}

TEST(Config, MinimalConfigTakesDefaults) {
    const auto cfg = parse_config_text(R"({"scenario": "zero"})");
    EXPECT_EQ(cfg.scenario, "zero");
    EXPECT_EQ(cfg.horizon, 1.0);
    EXPECT_EQ(cfg.steps, 256u);
    EXPECT_EQ(cfg.paths, 1000u);
    EXPECT_EQ(cfg.seed, 1u);
    EXPECT_FALSE(cfg.modulus);
    EXPECT_FALSE(cfg.output_dir);
    EXPECT_TRUE(cfg.diagnostics.stability);
}

TEST(Config, FullConfigParses) {
    const auto cfg = parse_config_text(R"({
        "scenario": "ou-jump", "params": {"a": 2.0, "sigma": 0.1},
        "modulus": {"name": "power", "params": {"alpha": 0.5}},
        "grid": {"T": 0.5, "M": 128}, "paths": 300, "seed": 9, "max_iter": 20,
        "tolerances": {"solver": 1e-8, "quadrature": 1e-10, "assumption1": 1e-7},
        "verifier": {"pairs": 100, "box_radius": 2.0, "near_origin_fraction": 0.5},
        "diagnostics": {"uniqueness": false, "stability": {"enabled": true, "eps": [0.5]}},
        "output_dir": "out"})");
    EXPECT_EQ(cfg.params.at("a"), 2.0);
    EXPECT_EQ(*cfg.modulus, "power");
    EXPECT_EQ(cfg.modulus_params.at("alpha"), 0.5);
    EXPECT_EQ(cfg.horizon, 0.5);
    EXPECT_EQ(cfg.steps, 128u);
    EXPECT_EQ(cfg.paths, 300u);
    EXPECT_EQ(cfg.seed, 9u);
    EXPECT_EQ(cfg.max_iter, 20u);
    EXPECT_EQ(cfg.solver_tol, 1e-8);
    EXPECT_EQ(cfg.verifier_pairs, 100u);
    EXPECT_FALSE(cfg.diagnostics.uniqueness);
    ASSERT_EQ(cfg.diagnostics.stability_eps.size(), 1u);
    EXPECT_EQ(*cfg.output_dir, "out");
}

TEST(Config, RoundTripThroughJson) {
    const auto a = parse_config_text(R"({"scenario": "ou-jump", "params": {"a": 0.5}, "modulus": "log",
                                         "grid": {"M": 32}, "seed": 4, "output_dir": "x"})");
    const auto b = parse_config_json(a.to_json());
    EXPECT_EQ(a.to_json(), b.to_json());
}

TEST(Config, UnknownKeysAreRejectedWithPath) {
    const auto ps = problems_of(R"({"scenario": "zero", "grdi": {}, "grid": {"T": 1, "N": 4},
                                    "diagnostics": {"stabilty": true}})");
    EXPECT_TRUE(mentions(ps, "grdi"));
    EXPECT_TRUE(mentions(ps, "grid.N"));
    EXPECT_TRUE(mentions(ps, "diagnostics.stabilty"));
}

TEST(Config, AllProblemsReportedTogether) {
    const auto ps = problems_of(R"({"scenario": "nope", "grid": {"T": -1, "M": 100}, "paths": 1,
                                    "modulus": "sqrt", "verifier": {"near_origin_fraction": 2}})");
    EXPECT_TRUE(mentions(ps, "scenario"));
    EXPECT_TRUE(mentions(ps, "grid.T"));
    EXPECT_TRUE(mentions(ps, "power of two"));
    EXPECT_TRUE(mentions(ps, "paths"));
    EXPECT_TRUE(mentions(ps, "modulus"));
    EXPECT_TRUE(mentions(ps, "near_origin_fraction"));
    EXPECT_GE(ps.size(), 6u);
}

TEST(Config, TypeErrorsAndMalformedJson) {
    EXPECT_TRUE(mentions(problems_of(R"({"scenario": "zero", "paths": "many"})"), "paths"));
    EXPECT_TRUE(mentions(problems_of(R"({"scenario": "zero", "paths": -3})"), "paths"));
    EXPECT_TRUE(mentions(problems_of(R"({"scenario": "zero", "params": {"a": "x"}})"), "params.a"));
    EXPECT_TRUE(mentions(problems_of(R"({"scenario": "zero",)"), "malformed"));
    EXPECT_TRUE(mentions(problems_of("[]"), "object"));
    EXPECT_THROW((void)parse_config("/nonexistent/levysde.json"), ConfigError);
}

TEST(Scenarios, RegistryMatchesFactory) {
    for (const auto& info : scenarios::registry()) {
        EXPECT_TRUE(scenarios::known(info.name));
        EXPECT_NO_THROW((void)scenarios::make(info.name, 1.0));
    }
    EXPECT_FALSE(scenarios::known("missing"));
    EXPECT_THROW((void)scenarios::make("missing", 1.0), InputDomainError);
}

TEST(Scenarios, AnalyticMeans) {
    EXPECT_EQ(*scenarios::analytic_mean("zero", {{"xi", 2.5}}, 0.7), 2.5);
    EXPECT_DOUBLE_EQ(*scenarios::analytic_mean("deterministic-exp", {{"a", 2.0}}, 0.5), std::exp(1.0));
    EXPECT_DOUBLE_EQ(*scenarios::analytic_mean("ou-jump", {{"a", 1.0}, {"xi", 3.0}}, 1.0), 3 * std::exp(-1.0));
    EXPECT_FALSE(scenarios::analytic_mean("hoelder-negative-control", {}, 1.0));
}

TEST(Refinement, DeterministicExpErrorHalvesWithStep) {
    const auto c = scenarios::make("deterministic-exp", 1.0);
    SolveOptions opt;
    opt.tol = 1e-28;
    opt.max_iter = 200;
    const auto s = refinement_study(c, {16, 32, 64}, 4, 1, opt);
    ASSERT_EQ(s.levels.size(), 3u);
    ASSERT_EQ(s.ratios.size(), 1u);
    EXPECT_NEAR(s.ratios[0], 2.0, 0.1);
    // Euler: (1 + 1/M)^M
    EXPECT_NEAR(s.finest().terminal_mean.mean, std::pow(1 + 1.0 / 64, 64), 1e-10);
    const auto r = analytic_mean_check(s, std::exp(1.0));
    EXPECT_TRUE(r.pass);
}

TEST(OutputDir, PrecedenceConfigThenEnvThenDefault) {
    ExperimentConfig cfg;
    ::unsetenv(kOutputDirEnv);
    EXPECT_EQ(resolve_output_dir(cfg), fs::path("levysde-out"));
    ::setenv(kOutputDirEnv, "/tmp/from-env", 1);
    EXPECT_EQ(resolve_output_dir(cfg), fs::path("/tmp/from-env"));
    cfg.output_dir = "/tmp/from-config";
    EXPECT_EQ(resolve_output_dir(cfg), fs::path("/tmp/from-config"));
    ::unsetenv(kOutputDirEnv);
}

TEST(PlotData, EmptyDataWritesNothing) {
    const auto dir = fresh_dir("plot_empty");
    EXPECT_TRUE(emit_plot_data(PlotData{}, dir).empty());
    EXPECT_FALSE(fs::exists(dir));
}

TEST(Runner, ZeroScenarioWritesReportsAndManifest) {
    auto cfg = parse_config_text(R"({"scenario": "zero", "grid": {"M": 16}, "paths": 20,
                                     "verifier": {"pairs": 200},
                                     "diagnostics": {"stability": {"eps": [1.0]}}})");
    const auto dir = fresh_dir("runner_zero");
    cfg.output_dir = dir.string();
    RunOptions ro;
    ro.timestamp = false;
    const auto res = run_experiment(cfg, ro);
    EXPECT_EQ(res.exit_code, kExitOk) << res.error;
    EXPECT_TRUE(res.failed().empty());
    for (const auto& f : res.files) EXPECT_TRUE(fs::exists(dir / f)) << f;
    EXPECT_TRUE(fs::exists(dir / "plot_distances.tsv"));

    const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    EXPECT_EQ(m.at("tool"), "levysde");
    EXPECT_EQ(m.at("seed"), 1);
    EXPECT_EQ(m.at("exit_code"), 0);
    EXPECT_FALSE(m.contains("created_utc"));
    EXPECT_EQ(parse_config_json(m.at("config")).to_json(), cfg.to_json());
    EXPECT_TRUE(m.at("plot_columns").contains("plot_distances.tsv"));

    // same seed, byte-identical reports
    std::map<std::string, std::string> first;
    for (const auto& f : res.files) first[f] = slurp(dir / f);
    first["manifest.json"] = slurp(dir / "manifest.json");
    const auto again = run_experiment(cfg, ro);
    EXPECT_EQ(again.exit_code, kExitOk);
    for (const auto& [name, text] : first) EXPECT_EQ(slurp(dir / name), text) << name;
    fs::remove_all(dir);
}

TEST(Runner, NegativeControlFailsAssumption) {
    auto cfg = parse_config_text(R"({"scenario": "hoelder-negative-control", "grid": {"M": 16}, "paths": 10,
                                     "verifier": {"pairs": 2000},
                                     "diagnostics": {"uniqueness": false, "analytic_mean": false,
                                                     "stability": false}})");
    const auto dir = fresh_dir("runner_neg");
    cfg.output_dir = dir.string();
    const auto res = run_experiment(cfg);
    EXPECT_EQ(res.exit_code, kExitDiagnosticFailed);
    EXPECT_TRUE(mentions(res.failed(), "assumption1"));
    EXPECT_TRUE(fs::exists(dir / "manifest.json"));
    fs::remove_all(dir);
}

TEST(Runner, UnwritableOutputIsIoError) {
    auto cfg = parse_config_text(R"({"scenario": "zero", "grid": {"M": 4}, "paths": 2})");
    const auto file = fresh_dir("blocker");
    std::ofstream(file) << "x";
    cfg.output_dir = (file / "sub").string();
    const auto res = run_experiment(cfg);
    EXPECT_EQ(res.exit_code, kExitIoError);
    EXPECT_FALSE(res.error.empty());
    fs::remove(file);
}

}  // namespace
