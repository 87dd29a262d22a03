#pragma once
/// The four batch commands behind the massmeter executable. Each takes a parsed
/// RunConfig and an output directory, writes its files and returns the exit
/// code (0 success, 1 failing rule or numerical failure).

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "massmeter/config.hpp"
#include "massmeter/mesh.hpp"
#include "massmeter/report.hpp"
#include "massmeter/verify.hpp"

namespace massmeter {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

inline std::string eigenvalues_csv(const std::vector<EigenPair>& pairs) {
    report::Csv csv({"mode", "lambda", "h", "residual"});
    for (const auto& p : pairs) csv.cell(p.mode_index).cell(p.lambda).cell(p.h).cell(p.residual_norm).end_row();
    return csv.str();
}

inline int cmd_solve(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    const auto sol = solve_domain(cfg.domain, cfg.solver.n, cfg.solver);
    report::write_atomic(out / "eigenvalues.csv", eigenvalues_csv(sol.pairs));
    if (cfg.output.wants("mesh")) {
        std::ostringstream m;
        write_mesh(m, sol.mesh);
        report::write_atomic(out / "mesh.txt", m.str());
    }
    log << "solve: " << sol.pairs.size() << " eigenpairs, n=" << cfg.solver.n
        << ", unknowns=" << sol.mesh.interior_count << ", lambda_1=" << report::fmt(sol.pairs.front().lambda) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct RuleOutcome {
    std::string rule;
    double value = 0.0;
    double tolerance = 0.0;
    [[nodiscard]] bool pass() const { return value <= tolerance; }
};

/// Pass/fail rules applied to an equidistribution report. Identity and y d/dy
/// rules exist only without a potential.
inline std::vector<RuleOutcome> verify_rules(const EquidistributionReport& rep, const Tolerances& tol) {
    std::vector<RuleOutcome> rules;
    rules.push_back({"side_mass_relative", rep.max_relative_deviation(), tol.side_mass_relative});
    const auto rr = rep.max_rellich_residual();
    rules.push_back({"rellich_r0", rr[0], tol.rellich_r0});
    rules.push_back({"rellich_x", rr[1], tol.rellich_x});
    rules.push_back({"rellich_y", rr[2], tol.rellich_y});
    if (!rep.spec.has_potential()) {
        rules.push_back({"identity_relative", rep.max_identity_relative(), tol.identity_relative});
        double ydy = 0.0;
        for (const auto& m : rep.modes) {
            if (!m.ydy) continue;
            ydy = std::max({ydy, std::abs(m.ydy->boundary - m.ydy->volume), m.ydy->boundary - 2.0});
        }
        rules.push_back({"ydy", ydy, tol.ydy});
    }
    return rules;
}

inline Json verify_report_json(const EquidistributionReport& rep, const std::vector<RuleOutcome>& rules) {
    const auto& s = rep.spec;
    Json j;
    j["command"] = "verify";
    j["domain"] = {{"l", s.l},
                   {"a1", s.a1},
                   {"a2", s.a2},
                   {"orientation", orientation_name(s.orientation)},
                   {"epsilon", s.epsilon},
                   {"perturbed", s.perturbed()},
                   {"potential", s.has_potential()}};
    j["solver"] = {{"element_order", rep.params.element_order},
                   {"n", rep.params.n},
                   {"k", rep.params.k},
                   {"tol", rep.params.tol},
                   {"seed", rep.params.seed},
                   {"threads", rep.params.threads},
                   {"unknowns", rep.unknowns}};
    j["area"] = rep.area;
    j["side_lengths"] = rep.lengths;
    j["modes"] = Json::array();
    for (const auto& m : rep.modes)
        j["modes"].push_back({{"mode", m.mode},
                              {"lambda", m.lambda},
                              {"residual", m.residual},
                              {"I", {m.sides[0].value, m.sides[1].value, m.sides[2].value}},
                              {"R", {m.rellich.r0, m.rellich.rx, m.rellich.ry}}});
    j["identity_max_residual"] = rep.max_identity_relative();
    j["rules"] = Json::array();
    bool all = true;
    for (const auto& r : rules) {
        j["rules"].push_back({{"rule", r.rule}, {"value", r.value}, {"tolerance", r.tolerance}, {"pass", r.pass()}});
        all = all && r.pass();
    }
    j["pass"] = all;
    return j;
}

inline int cmd_verify(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    const auto rep = equidistribution_report(cfg.domain, cfg.solver);

    report::Csv sm({"mode", "side", "I", "predicted", "deviation", "epsilon"});
    report::Csv rl({"mode", "R0", "Rx", "Ry", "expected0", "expectedX", "expectedY"});
    report::Csv id({"mode", "identity_id", "residual"});
    for (const auto& m : rep.modes) {
        for (const auto& s : m.sides)
            sm.cell(m.mode).cell(side_name(s.side)).cell(s.value).cell(s.predicted).cell(s.deviation).cell(s.epsilon).end_row();
        const auto& r = m.rellich;
        rl.cell(m.mode).cell(r.r0).cell(r.rx).cell(r.ry).cell(r.expected0).cell(r.expected_x).cell(r.expected_y).end_row();
        for (const auto& ir : m.identities) id.cell(m.mode).cell(ir.id).cell(ir.residual).end_row();
    }
    if (cfg.output.wants("csv")) {
        report::write_atomic(out / "side_mass.csv", sm.str());
        report::write_atomic(out / "rellich.csv", rl.str());
        report::write_atomic(out / "identities.csv", id.str());
    }

    const auto rules = verify_rules(rep, cfg.experiment.tolerances);
    const Json j = verify_report_json(rep, rules);
    report_validator().validate(j);
    report::write_atomic(out / "report.json", j.dump(2) + "\n");

    for (const auto& r : rules)
        log << (r.pass() ? "PASS " : "FAIL ") << r.rule << " value=" << report::fmt(r.value)
            << " tolerance=" << report::fmt(r.tolerance) << '\n';
    return j["pass"].get<bool>() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

inline std::string sweep_csv(const SweepResult& sw) {
    report::Csv csv({"epsilon", "mode", "side", "I", "I_raw", "predicted", "deviation"});
    for (const auto& r : sw.rows)
        csv.cell(r.epsilon).cell(r.mode).cell(side_name(r.side)).cell(r.value).cell(r.raw_value).cell(r.predicted)
            .cell(r.deviation).end_row();
    return csv.str();
}

inline Json sweep_json(const SweepResult& sw, const std::optional<CMassBound>& bound, const Tolerances& tol) {
    Json j;
    j["status"] = sw.status();
    j["p"] = sw.fitted ? Json(sw.exponent) : Json(nullptr);
    j["constant"] = sw.fitted ? Json(sw.constant) : Json(nullptr);
    j["slope_min"] = tol.slope_min;
    j["pass"] = sw.fitted ? Json(sw.exponent >= tol.slope_min) : Json(nullptr);
    j["floor"] = sw.floor;
    j["reference_deviation"] = sw.reference_deviation;
    j["points_used"] = sw.points_used;
    j["potential"] = sw.potential;
    j["extrapolated"] = sw.extrapolated;
    j["n_coarse"] = sw.n_coarse;
    j["n_fine"] = sw.n_fine;
    j["modes"] = sw.modes;
    j["levels"] = Json::array();
    for (const auto& l : sw.levels)
        j["levels"].push_back({{"epsilon", l.epsilon},
                               {"max_deviation", l.max_deviation},
                               {"discretization", l.discretization},
                               {"max_c_mass", l.max_c_mass},
                               {"c_prediction", l.c_prediction},
                               {"used", l.used}});
    if (bound) {
        j["c_mass_bound"] = {{"gamma_hat", bound->gamma_hat},
                             {"bound", bound->bound},
                             {"within_bound", bound->within_bound},
                             {"relative_growth", bound->relative_growth},
                             {"stable", bound->stable},
                             {"pass", bound->pass()}};
    }
    return j;
}

inline int cmd_sweep(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    const auto& grid = cfg.experiment.epsilon_grid;
    SweepOptions opt;
    opt.extrapolate = cfg.experiment.extrapolate;
    const auto sw = epsilon_sweep(cfg.domain, grid, cfg.solver, opt);
    const auto& tol = cfg.experiment.tolerances;
    std::optional<CMassBound> bound;
    if (!sw.potential && cfg.solver.k >= 5) bound = c_mass_bound_check(sw, tol.c_mass_factor, tol.c_mass_growth);

    if (cfg.output.wants("csv")) report::write_atomic(out / "sweep.csv", sweep_csv(sw));
    report::write_atomic(out / "slope.json", sweep_json(sw, bound, tol).dump(2) + "\n");
    if (cfg.output.wants("svg")) {
        report::Series pts{"max |I - predicted| - floor", {}, {}, std::nullopt};
        for (const auto& l : sw.levels) {
            pts.x.push_back(l.epsilon);
            pts.y.push_back(l.max_deviation - sw.floor);
        }
        if (sw.fitted) pts.line = std::make_pair(sw.exponent, sw.constant);
        report::write_atomic(out / "sweep.svg", report::svg_loglog({pts}, "side-mass deviation vs epsilon", "epsilon",
                                                                   "deviation above floor"));
    }

    log << "sweep: status=" << sw.status();
    if (sw.fitted) log << " p=" << report::fmt(sw.exponent) << " C=" << report::fmt(sw.constant);
    log << " floor=" << report::fmt(sw.floor) << " points=" << sw.points_used << '\n';
    if (bound)
        log << "sweep: max I_C'=" << report::fmt(bound->gamma_hat) << " relative growth="
            << report::fmt(bound->relative_growth) << '\n';
    if (sw.fitted && sw.exponent < tol.slope_min) return 1;
    if (bound && !bound->pass()) return 1;
    return 0;
}

// ---------------------------------------------------------------------------
// converge
// ---------------------------------------------------------------------------

inline std::string convergence_csv(const ConvergenceResult& c) {
    std::vector<std::string> header{"n"};
    for (const auto& q : c.quantities) header.push_back(q.name);
    report::Csv csv(header);
    for (std::size_t i = 0; i < c.levels.size(); ++i) {
        csv.cell(c.levels[i]);
        for (const auto& q : c.quantities) csv.cell(q.errors[i]);
        csv.end_row();
    }
    return csv.str();
}

inline Json orders_json(const ConvergenceResult& c) {
    Json j;
    j["levels"] = c.levels;
    j["orders"] = Json::object();
    j["successive_orders"] = Json::object();
    for (const auto& q : c.quantities) {
        j["orders"][q.name] = q.order;
        j["successive_orders"][q.name] = q.successive;
    }
    j["extrapolated_eigenvalues"] = c.extrapolated_eigenvalues;
    j["extrapolated_side_masses"] = c.extrapolated_masses;
    j["extrapolated_identity_residuals"] = c.extrapolated_identity;
    j["floor"] = c.floor;
    j["exact_reference"] = c.exact_eigenvalues.has_value();
    return j;
}

inline int cmd_converge(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
    const auto c = convergence_study(cfg.domain, cfg.experiment.levels, cfg.solver);
    if (cfg.output.wants("csv")) report::write_atomic(out / "convergence.csv", convergence_csv(c));
    report::write_atomic(out / "orders.json", orders_json(c).dump(2) + "\n");
    if (cfg.output.wants("svg")) {
        std::vector<report::Series> series;
        for (const auto& q : c.quantities) {
            report::Series s{q.name, {}, q.errors, std::nullopt};
            for (int n : c.levels) s.x.push_back(n);
            series.push_back(std::move(s));
        }
        report::write_atomic(out / "convergence.svg", report::svg_loglog(series, "refinement study", "n", "error"));
    }
    for (const auto& q : c.quantities) log << "converge: " << q.name << " order=" << report::fmt(q.order) << '\n';
    return 0;
}

} // namespace massmeter
