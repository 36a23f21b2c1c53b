#include "levysde/experiment/scenarios.hpp"
#include "levysde/model/assumption.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using namespace levysde;

CoefficientSet scalar_drift(CoefficientSet::Drift b, ConcaveModulus k) {
    CoefficientSet c;
    c.name = "scalar";
    c.d = 1;
    c.r = 0;
    c.drift = std::move(b);
    c.diffusion = zero_diffusion(1, 0);
    c.jump = zero_jump(1);
    c.modulus = std::move(k);
    return c;
}

Vector v(double x) { return Vector::Constant(1, x); }

const CoefficientSet::Drift identity = [](double, const Vector& y) { return Vector(y); };
const CoefficientSet::Drift hoelder = [](double, const Vector& y) {
    return Vector::Constant(1, std::pow(std::abs(y[0]), 0.25)).eval();
};

TEST(Discrepancy, CoincidentPointsGiveZero) {
    for (const auto& name : scenarios::names()) {
        const auto c = scenarios::make(name, 1.0);
        for (double y : {0.0, 1e-8, -0.3, 2.0}) EXPECT_EQ(assumption1_discrepancy(c, 0.5, v(y), v(y)), 0.0) << name;
    }
}

TEST(Discrepancy, LipschitzEquality) {
    const auto c = scalar_drift(identity, moduli::linear());
    auto s = CounterStream::derive(1, StreamPurpose::Test);
    for (int i = 0; i < 1000; ++i) {
        const double a = 4 * s.uniform() - 2, b = 4 * s.uniform() - 2;
        const double disc = assumption1_discrepancy(c, 0.0, v(a), v(b));
        EXPECT_LE(std::abs(disc), 1e-15 * (1 + (a - b) * (a - b)));
    }
}

TEST(Discrepancy, HoelderViolationAtOrigin) {
    const auto c = scalar_drift(hoelder, moduli::linear());
    EXPECT_NEAR(assumption1_discrepancy(c, 0.0, v(1e-4), v(0.0)), 1e-2 - 1e-8, 1e-17);
}

TEST(Discrepancy, JumpTermIsMassWeightedSum) {
    CoefficientSet c = scalar_drift(scenarios::make("zero", 1.0).drift, moduli::linear());
    c.measure = JumpMeasure::atomic(1.0, {{v(0.5), 2.0}, {v(-0.25), 4.0}});
    c.jump = [](double, const Vector& y, const Vector& x) { return Vector(y * x[0]); };
    // sum of mass * (x (y1 - y2))^2 = (2 * 0.25 + 4 * 0.0625) * 1 = 0.75
    const auto t = assumption1_terms(c, 0.0, v(1.0), v(0.0));
    EXPECT_DOUBLE_EQ(t.lhs, 0.75);
    EXPECT_DOUBLE_EQ(t.rhs, 1.0);
}

TEST(Verifier, LipschitzPasses) {
    const auto c = scalar_drift(identity, moduli::linear());
    const auto r = verify_assumption1(c, {.pair_count = 5000});
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.max_discrepancy, 1e-12);
}

TEST(Verifier, HoelderFailsNearOrigin) {
    const auto r = verify_assumption1(scenarios::make("hoelder-negative-control", 1.0), {.pair_count = 5000});
    EXPECT_FALSE(r.pass);
    EXPECT_LT(r.worst_pair.y1.norm(), 1e-2);
    EXPECT_LT(r.worst_pair.y2.norm(), 1e-2);
    EXPECT_GT(r.max_discrepancy, 0.0);
}

TEST(Verifier, HoelderWithSquareRootModulusStillFails) {
    // kappa(q) = sqrt(q) gives |y1 - y2| on the right, which y^{1/4} beats near 0
    const auto r = verify_assumption1(scalar_drift(hoelder, moduli::truncated_power(0.5)), {.pair_count = 2000});
    EXPECT_FALSE(r.pass);
}

TEST(Verifier, HoelderWithQuarterPowerModulusPasses) {
    const auto c = scalar_drift(hoelder, moduli::truncated_power(0.25));
    VerifierConfig cfg;
    cfg.pair_count = 5000;
    const auto r = verify_assumption1(c, cfg);
    EXPECT_TRUE(r.pass) << r.max_discrepancy;
    // brute-force oracle: |y1^{1/4} - y2^{1/4}|^2 <= |y1 - y2|^{1/2} = kappa(|y1 - y2|^2) while |y1 - y2|^2 <= 1
    auto s = CounterStream::derive(2, StreamPurpose::Test);
    for (int i = 0; i < 5000; ++i) {
        const double a = 2 * s.uniform() - 1, b = 2 * s.uniform() - 1;
        const double lhs = std::pow(std::pow(std::abs(a), 0.25) - std::pow(std::abs(b), 0.25), 2);
        const double q = (a - b) * (a - b);
        const double rhs = q <= 1 ? std::pow(q, 0.25) : 1 + 0.25 * (q - 1);
        EXPECT_LE(lhs, rhs + 1e-15);
        EXPECT_NEAR(assumption1_discrepancy(c, 0.0, v(a), v(b)), lhs - rhs, 1e-14);
    }
}

TEST(Verifier, BundledScenariosMatchTheirDeclarations) {
    for (const auto& info : scenarios::registry()) {
        const auto r = verify_assumption1(scenarios::make(info.name, 1.0), {.pair_count = 3000});
        EXPECT_EQ(r.pass, info.satisfies_assumption) << info.name << " max " << r.max_discrepancy;
    }
}

TEST(Verifier, EvaluatorErrorCarriesPoint) {
    auto c = scalar_drift(
        [](double, const Vector& y) -> Vector {
            if (y[0] > 0.5) throw std::runtime_error("boom");
            return y;
        },
        moduli::linear());
    try {
        (void)verify_assumption1(c, {.pair_count = 1000});
        FAIL() << "expected an evaluation error";
    } catch (const CoefficientEvaluationError& e) {
        EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
        EXPECT_GT(std::stod(e.state().substr(1)), 0.5);
    }
}

TEST(Verifier, NonFiniteValueIsAnEvaluationError) {
    auto c = scalar_drift([](double, const Vector& y) { return Vector(y / 0.0); }, moduli::linear());
    EXPECT_THROW((void)assumption1_discrepancy(c, 0.0, v(1.0), v(2.0)), CoefficientEvaluationError);
}

}  // namespace
