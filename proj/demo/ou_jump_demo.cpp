// Picard iteration for an Ornstein-Uhlenbeck process with small jumps, then a
// stability check between two nearby initial values.
#include "levysde/levysde.hpp"

#include <iostream>

int main() {
    using namespace levysde;
    const auto c = scenarios::make("ou-jump", 1.0, {{"a", 1.0}, {"sigma", 0.3}});
    const TimeGrid grid(1.0, 128);
    auto bundle = std::make_shared<const NoiseBundle>(NoiseBundle::generate(7, grid, c.r, c.measure, 500));

    SolveOptions opt;
    opt.tol = 1e-10;
    const auto res = solve(c, bundle, opt);
    std::cout << "k\tD(k,k+1)\tSE\n";
    for (const auto& d : res.report.successive)
        std::cout << d.k << '\t' << format_double(d.distance) << '\t' << format_double(d.se) << '\n';
    std::cout << "verdict: " << to_string(res.report.verdict) << "\n";

    const auto mean = second_moment_profile(res.solution);
    std::cout << "E|X(T)|^2 = " << format_double(mean.mean.back()) << " +- " << format_double(mean.se.back()) << '\n';

    const auto r = mean_square_stability_test(c, InitialLaw::point_mass(1.0), InitialLaw::point_mass(1.01), bundle,
                                              1.0, {});
    std::cout << "E sup|X^xi - X^eta|^2 = " << format_double(r.gap.mean) << " (eps = 1, pass = " << (r.pass ? "yes" : "no")
              << ")\n";
}
