#pragma once

#include "levysde/core/stats.hpp"
#include "levysde/model/assumption.hpp"
#include "levysde/model/osgood.hpp"
#include "levysde/picard/diagnostics.hpp"
#include "levysde/picard/solver.hpp"
#include "levysde/stability/bihari.hpp"
#include "levysde/stability/stability_test.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace levysde::report {

// Structured-text reports: "# key\tvalue" metadata lines, then one
// tab-separated header line and one record per row. Numbers are printed in
// shortest round-trip form, so equal runs give byte-identical files.

inline std::string num(double v) { return format_double(v); }
inline std::string num(const std::optional<double>& v) { return v ? format_double(*v) : std::string("NA"); }
inline const char* yes_no(bool b) { return b ? "yes" : "no"; }

inline void meta(std::ostream& os, const std::string& key, const std::string& value) {
    os << "# " << key << '\t' << value << '\n';
}

inline void write_convergence(std::ostream& os, const ConvergenceReport& r) {
    meta(os, "report", "convergence");
    meta(os, "verdict", to_string(r.verdict));
    meta(os, "iterations", std::to_string(r.iterations));
    meta(os, "tol", num(r.tol));
    meta(os, "E|xi|^2", num(r.second_moment_xi));
    meta(os, "sup_lambda", num(r.sup_lambda));
    meta(os, "K1", num(r.K1));
    meta(os, "C1", num(r.C1));
    meta(os, "C2", num(r.C2));
    meta(os, "C3", num(r.C3));
    meta(os, "T_below_one", yes_no(r.horizon_below_one));
    os << "k\tD\tSE\tverdict\n";
    for (std::size_t i = 0; i < r.successive.size(); ++i) {
        const auto& d = r.successive[i];
        const bool last = i + 1 == r.successive.size();
        os << d.k << '\t' << num(d.distance) << '\t' << num(d.se) << '\t'
           << (last ? to_string(r.verdict) : "continue") << '\n';
    }
}

inline void write_assumption1(std::ostream& os, const Assumption1Report& r) {
    meta(os, "report", "assumption1");
    meta(os, "pass", yes_no(r.pass));
    meta(os, "pairs", std::to_string(r.pairs));
    meta(os, "tol", num(r.tol));
    os << "role\tt\ty1\ty2\tlhs\trhs\tdiscrepancy\n";
    auto row = [&os](const char* role, const SampledPair& p) {
        os << role << '\t' << num(p.t) << '\t' << to_string(p.y1) << '\t' << to_string(p.y2) << '\t'
           << num(p.terms.lhs) << '\t' << num(p.terms.rhs) << '\t' << num(p.terms.discrepancy()) << '\n';
    };
    row("max-discrepancy", r.max_discrepancy_pair);
    row("worst-ratio", r.worst_pair);
}

inline void write_osgood(std::ostream& os, const OsgoodEvidence& e, const std::string& modulus) {
    meta(os, "report", "osgood");
    meta(os, "modulus", modulus);
    meta(os, "verdict", to_string(e.verdict));
    meta(os, "tail_ratio", num(e.tail_ratio));
    meta(os, "previous_tail_ratio", num(e.previous_tail_ratio));
    meta(os, "note", e.note);
    os << "eps\tI\tgrowth_per_decade\n";
    for (std::size_t i = 0; i < e.eps.size(); ++i)
        os << num(e.eps[i]) << '\t' << num(e.integral[i]) << '\t'
           << (i == 0 ? std::string("NA") : num(e.growth_per_decade[i - 1])) << '\n';
}

inline void write_moment_bound(std::ostream& os, const MomentBoundReport& m) {
    meta(os, "report", "moment-bound");
    meta(os, "pass", yes_no(m.pass));
    meta(os, "T_below_one", yes_no(m.horizon_below_one));
    os << "K1\tE|xi|^2\tbound\tempirical_max\tSE\tk\tnode\n";
    os << num(m.K1) << '\t' << num(m.second_moment_xi) << '\t' << num(m.bound) << '\t' << num(m.empirical_max)
       << '\t' << num(m.se_at_max) << '\t' << m.k_at_max << '\t' << m.node_at_max << '\n';
}

inline void write_uniqueness(std::ostream& os, const UniquenessReport& u) {
    meta(os, "report", "pathwise-uniqueness");
    meta(os, "pass", yes_no(u.pass));
    os << "replay_difference\tpermutation_difference\tdistinct_seed_difference\n";
    os << num(u.replay_difference) << '\t' << num(u.permutation_difference) << '\t'
       << num(u.distinct_seed_difference) << '\n';
}

inline void write_stability(std::ostream& os, const std::vector<StabilityReport>& rs) {
    meta(os, "report", "stability");
    os << "eps\tdelta\tkappa3\tinitial_gap\tinitial_gap_x4\tgap\tgap_SE\tgrowth\tprecondition\tapplicable\tpass\n";
    for (const auto& r : rs) {
        os << num(r.eps) << '\t' << (r.certificate ? num(r.certificate->delta) : std::string("NA")) << '\t'
           << (r.certificate ? r.certificate->kappa3 : std::string("NA")) << '\t' << num(r.initial_gap) << '\t'
           << num(r.initial_gap_x4) << '\t' << num(r.gap.mean) << '\t' << num(r.gap.se) << '\t'
           << num(r.gap.mean - r.initial_gap) << '\t' << yes_no(r.precondition_held) << '\t'
           << yes_no(r.certificate_applicable) << '\t' << yes_no(r.pass) << '\n';
    }
}

inline void write_bihari(std::ostream& os, const std::vector<BihariBound>& bs) {
    meta(os, "report", "bihari");
    os << "modulus\tu0\tt\tint_v\targument\tbound\tin_domain\n";
    for (const auto& b : bs)
        os << b.modulus << '\t' << num(b.u0) << '\t' << num(b.t) << '\t' << num(b.v_integral) << '\t'
           << num(b.argument) << '\t' << num(b.value) << '\t' << yes_no(b.in_domain) << '\n';
}

}  // namespace levysde::report
