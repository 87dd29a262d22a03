#pragma once
/// Experiment drivers: per-mode equidistribution reports, epsilon sweeps with
/// log-log slope fits, refinement studies and the C' mass boundedness check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "massmeter/error.hpp"
#include "massmeter/fem.hpp"
#include "massmeter/geometry.hpp"
#include "massmeter/mesh.hpp"
#include "massmeter/parallel.hpp"
#include "massmeter/traces.hpp"

namespace massmeter {

struct SolverParams {
    int element_order = 2;
    int n = 48;
    int k = 10;
    double tol = 1e-10;
    std::uint64_t seed = 1;
    int threads = 1;
};

// ---------------------------------------------------------------------------
// Small numerical helpers
// ---------------------------------------------------------------------------

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. Needs two distinct x.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    if (x.size() < 2 || x.size() != y.size()) throw PreconditionError("fit_line: need >= 2 points");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw PreconditionError("fit_line: x values coincide");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

/// Observed order between consecutive refinement levels: log(e_i/e_{i+1}) / log(n_{i+1}/n_i).
inline std::vector<double> successive_orders(std::span<const int> levels, std::span<const double> errors) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        const double r = static_cast<double>(levels[i + 1]) / levels[i];
        out.push_back(std::log(std::abs(errors[i]) / std::abs(errors[i + 1])) / std::log(r));
    }
    return out;
}

/// Least-squares slope of -log(error) against log(level).
inline double fitted_order(std::span<const int> levels, std::span<const double> errors) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        x.push_back(std::log(static_cast<double>(levels[i])));
        y.push_back(std::log(std::abs(errors[i])));
    }
    return -fit_line(x, y).slope;
}

struct Extrapolation {
    double limit = 0.0;
    double order = 0.0;
    bool order_estimated = false;
};

/// Richardson extrapolation from the finest levels. With three levels in a
/// constant ratio the order is estimated from the differences and used when it
/// falls in [0.5, 2 * nominal + 2]; otherwise `nominal_order` is used.
inline Extrapolation richardson(std::span<const int> levels, std::span<const double> values, double nominal_order) {
    const std::size_t m = levels.size();
    if (m < 2 || values.size() != m) throw PreconditionError("richardson: need >= 2 levels");
    Extrapolation ex;
    ex.order = nominal_order;
    const double r = static_cast<double>(levels[m - 1]) / levels[m - 2];
    const double d2 = values[m - 1] - values[m - 2];
    if (m >= 3) {
        const double r1 = static_cast<double>(levels[m - 2]) / levels[m - 3];
        const double d1 = values[m - 2] - values[m - 3];
        if (std::abs(r1 - r) < 1e-12 * r && d1 != 0.0 && d2 != 0.0 && (d1 > 0) == (d2 > 0)) {
            const double p = std::log(d1 / d2) / std::log(r);
            if (std::isfinite(p) && p >= 0.5 && p <= 2.0 * nominal_order + 2.0) {
                ex.order = p;
                ex.order_estimated = true;
            }
        }
    }
    ex.limit = values[m - 1] + d2 / (std::pow(r, ex.order) - 1.0);
    return ex;
}

/// Closed-form Dirichlet eigenvalues when the domain is an unperturbed right
/// isosceles triangle with legs L: pi^2 (p^2 + q^2) / L^2, p > q >= 1.
inline std::optional<std::vector<double>> exact_eigenvalues(const DomainSpec& spec, int count) {
    if (spec.perturbed() || (spec.has_potential() && spec.epsilon != 0.0)) return std::nullopt;
    const double tol = 1e-14 * spec.l;
    double leg = 0.0;
    const bool a1_zero = std::abs(spec.a1) <= tol;
    if (a1_zero && std::abs(spec.a2 - spec.l) <= tol) {
        leg = spec.l; // (0,0), (l,0), (l,l)
    } else if (spec.orientation == Orientation::acute && std::abs(spec.a1 - spec.l) <= tol &&
               std::abs(spec.a2 - spec.l) <= tol) {
        leg = std::sqrt(2.0) * spec.l; // (0,0), (l,-l), (l,l)
    } else {
        return std::nullopt;
    }
    std::vector<int> sums;
    const int reach = count + 4;
    for (int p = 2; p <= reach + 1; ++p)
        for (int q = 1; q < p; ++q) sums.push_back(p * p + q * q);
    std::sort(sums.begin(), sums.end());
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
        out.push_back(std::numbers::pi * std::numbers::pi * sums[static_cast<std::size_t>(i)] / (leg * leg));
    return out;
}

// ---------------------------------------------------------------------------
// Single-domain pipeline
// ---------------------------------------------------------------------------

struct DomainSolution {
    Mesh mesh;
    std::vector<EigenPair> pairs;
};

inline DomainSolution solve_domain(const DomainSpec& spec, int n, const SolverParams& params) {
    DomainSolution s;
    s.mesh = generate_mesh(spec, n, params.element_order);
    const auto forms = assemble(s.mesh, spec);
    s.pairs = solve_eigenpairs(forms, params.k, params.tol, params.seed);
    return s;
}

struct ModeReport {
    int mode = 0;
    double lambda = 0.0;
    double h = 0.0;
    double residual = 0.0;
    std::array<SideMassReport, 3> sides{};
    RellichReport rellich;
    std::vector<IdentityResidual> identities; // empty with a potential
    std::optional<YdyFunctional> ydy;

    [[nodiscard]] double max_relative_deviation() const {
        double m = 0.0;
        for (const auto& s : sides) m = std::max(m, std::abs(s.deviation) / s.predicted);
        return m;
    }
    [[nodiscard]] double max_identity_relative() const {
        double m = 0.0;
        for (const auto& r : identities) m = std::max(m, r.relative());
        return m;
    }
};

inline ModeReport evaluate_mode(const EigenPair& pair, const Mesh& mesh, const DomainSpec& spec) {
    ModeReport r;
    r.mode = pair.mode_index;
    r.lambda = pair.lambda;
    r.h = pair.h;
    r.residual = pair.residual_norm;
    const auto bt = boundary_traces(pair, mesh, spec);
    for (Side s : all_sides) r.sides[static_cast<std::size_t>(s)] = side_mass(bt[s], pair, spec, s);
    r.rellich = rellich_components(bt, pair, mesh, spec);
    if (!spec.has_potential()) {
        r.identities = identity_residuals(bt, pair, spec);
        r.ydy = ydy_functional(bt, pair, mesh);
    }
    return r;
}

struct EquidistributionReport {
    DomainSpec spec;
    SolverParams params;
    double area = 0.0;
    std::array<double, 3> lengths{};
    MeshQuality quality;
    int unknowns = 0;
    std::vector<ModeReport> modes;

    [[nodiscard]] double max_relative_deviation() const {
        double m = 0.0;
        for (const auto& md : modes) m = std::max(m, md.max_relative_deviation());
        return m;
    }
    [[nodiscard]] double max_identity_relative() const {
        double m = 0.0;
        for (const auto& md : modes) m = std::max(m, md.max_identity_relative());
        return m;
    }
    [[nodiscard]] double max_identity_residual() const {
        double m = 0.0;
        for (const auto& md : modes)
            for (const auto& r : md.identities) m = std::max(m, r.residual);
        return m;
    }
    /// Largest |R - expected| per component over all modes.
    [[nodiscard]] std::array<double, 3> max_rellich_residual() const {
        std::array<double, 3> m{};
        for (const auto& md : modes) {
            m[0] = std::max(m[0], std::abs(md.rellich.residual0()));
            m[1] = std::max(m[1], std::abs(md.rellich.residual_x()));
            m[2] = std::max(m[2], std::abs(md.rellich.residual_y()));
        }
        return m;
    }
};

/// Mesh, solve and evaluate every boundary functional for the lowest k modes.
inline EquidistributionReport equidistribution_report(const DomainSpec& spec, const SolverParams& params) {
    validate(spec);
    EquidistributionReport rep;
    rep.spec = spec;
    rep.params = params;
    rep.area = domain_area(spec);
    for (Side s : all_sides) rep.lengths[static_cast<std::size_t>(s)] = side_length(spec, s);
    auto sol = solve_domain(spec, params.n, params);
    rep.quality = mesh_quality(sol.mesh, spec);
    rep.unknowns = sol.mesh.interior_count;
    rep.modes.resize(sol.pairs.size());
    parallel_for(sol.pairs.size(), params.threads,
                 [&](std::size_t i) { rep.modes[i] = evaluate_mode(sol.pairs[i], sol.mesh, spec); });
    return rep;
}

// ---------------------------------------------------------------------------
// Epsilon sweep
// ---------------------------------------------------------------------------

struct SweepOptions {
    /// Combine levels n/2 and n by Richardson extrapolation (order = element_order).
    bool extrapolate = true;
};

struct SweepRow {
    double epsilon = 0.0;
    int mode = 0;
    Side side = Side::A;
    double value = 0.0;     // extrapolated when enabled
    double raw_value = 0.0; // finest level
    double predicted = 0.0;
    double deviation = 0.0; // |value - predicted|
};

struct SweepLevel {
    double epsilon = 0.0;
    double max_deviation = 0.0;  // over modes and sides
    double discretization = 0.0; // identity (or Rellich) residual after extrapolation
    double max_c_mass = 0.0;     // max over modes of I_C'
    double c_prediction = 0.0;   // l(C') / Area(D)
    bool used = false;           // entered the regression
};

struct SweepResult {
    std::vector<SweepLevel> levels;
    std::vector<SweepRow> rows;
    double floor = 0.0;
    double reference_deviation = 0.0; // eps = 0 deviation
    bool fitted = false;
    double exponent = 0.0;
    double constant = 0.0;
    int points_used = 0;
    int modes = 0;
    bool potential = false;
    bool extrapolated = false;
    int n_coarse = 0;
    int n_fine = 0;

    [[nodiscard]] std::string status() const { return fitted ? "fitted" : "floor-limited"; }
};

namespace detail {

struct CellLevel {
    std::vector<double> lambda;
    std::vector<std::array<double, 3>> mass;
    std::vector<std::array<double, 3>> discretization; // signed residuals, continuum 0
};

inline CellLevel sweep_cell(const DomainSpec& spec, int n, const SolverParams& params) {
    const auto sol = solve_domain(spec, n, params);
    CellLevel c;
    for (const auto& pair : sol.pairs) {
        const auto bt = boundary_traces(pair, sol.mesh, spec);
        std::array<double, 3> m{};
        for (Side s : all_sides) m[static_cast<std::size_t>(s)] = side_mass(bt[s], pair, spec, s).value;
        std::array<double, 3> d{};
        if (spec.has_potential()) {
            const auto r = rellich_components(bt, pair, sol.mesh, spec);
            d = {r.residual0(), r.residual_x(), r.residual_y()};
        } else {
            const auto ids = identity_residuals(bt, pair, spec);
            for (std::size_t i = 0; i < 3; ++i) d[i] = ids[i].lhs - ids[i].rhs;
        }
        c.lambda.push_back(pair.lambda);
        c.mass.push_back(m);
        c.discretization.push_back(d);
    }
    return c;
}

} // namespace detail

/// Side-mass deviations over an increasing epsilon grid. With a potential in
/// `base`, epsilon scales w~ on the fixed triangle; otherwise it scales g~.
inline SweepResult epsilon_sweep(const DomainSpec& base, std::span<const double> grid, const SolverParams& params,
                                 const SweepOptions& options = {}) {
    if (grid.empty()) throw PreconditionError("epsilon grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0)) throw PreconditionError("epsilon grid values must be >= 0");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw PreconditionError("epsilon grid must be strictly increasing");
    }

    SweepResult res;
    res.modes = params.k;
    res.potential = base.has_potential();
    res.n_fine = params.n;
    res.n_coarse = options.extrapolate ? params.n / 2 : params.n;
    res.extrapolated = options.extrapolate;
    if (options.extrapolate && res.n_coarse < 2) throw PreconditionError("extrapolated sweep needs n >= 4");

    // Cell 0 is the eps = 0 reference; cells 1.. follow the grid.
    std::vector<DomainSpec> specs;
    DomainSpec ref = base;
    ref.epsilon = 0.0;
    specs.push_back(ref);
    for (double e : grid) {
        DomainSpec s = base;
        s.epsilon = e;
        validate(s);
        specs.push_back(s);
    }
    const int level_count = options.extrapolate ? 2 : 1;
    std::vector<detail::CellLevel> cells(specs.size() * static_cast<std::size_t>(level_count));
    parallel_for(cells.size(), params.threads, [&](std::size_t i) {
        const std::size_t cell = i / static_cast<std::size_t>(level_count);
        const bool coarse = options.extrapolate && i % 2 == 0;
        cells[i] = detail::sweep_cell(specs[cell], coarse ? res.n_coarse : res.n_fine, params);
    });

    const double r = static_cast<double>(res.n_fine) / res.n_coarse;
    const double gain = std::pow(r, params.element_order) - 1.0;
    auto combine = [&](double coarse, double fine) { return fine + (fine - coarse) / gain; };

    std::vector<SweepLevel> all_levels;
    for (std::size_t c = 0; c < specs.size(); ++c) {
        const auto& fine = cells[c * static_cast<std::size_t>(level_count) + (level_count - 1)];
        const auto& coarse = cells[c * static_cast<std::size_t>(level_count)];
        const DomainSpec& s = specs[c];
        const double area = domain_area(s);
        std::array<double, 3> pred{};
        for (Side sd : all_sides) pred[static_cast<std::size_t>(sd)] = side_length(s, sd) / area;

        SweepLevel lvl;
        lvl.epsilon = s.epsilon;
        lvl.c_prediction = pred[static_cast<std::size_t>(Side::C)];
        for (std::size_t m = 0; m < fine.mass.size(); ++m) {
            // Pair modes across levels only when the eigenvalues agree.
            const bool match = options.extrapolate &&
                               std::abs(fine.lambda[m] - coarse.lambda[m]) <= 1e-3 * fine.lambda[m];
            for (Side sd : all_sides) {
                const auto si = static_cast<std::size_t>(sd);
                SweepRow row;
                row.epsilon = s.epsilon;
                row.mode = static_cast<int>(m) + 1;
                row.side = sd;
                row.raw_value = fine.mass[m][si];
                row.value = match ? combine(coarse.mass[m][si], fine.mass[m][si]) : row.raw_value;
                row.predicted = pred[si];
                row.deviation = std::abs(row.value - row.predicted);
                lvl.max_deviation = std::max(lvl.max_deviation, row.deviation);
                if (sd == Side::C) lvl.max_c_mass = std::max(lvl.max_c_mass, row.value);
                if (c > 0) res.rows.push_back(row);
            }
            for (std::size_t i = 0; i < 3; ++i) {
                const double d = match ? combine(coarse.discretization[m][i], fine.discretization[m][i])
                                       : fine.discretization[m][i];
                lvl.discretization = std::max(lvl.discretization, std::abs(d));
            }
        }
        all_levels.push_back(lvl);
    }

    res.reference_deviation = all_levels.front().max_deviation;
    res.floor = res.reference_deviation;
    for (const auto& lvl : all_levels) res.floor = std::max(res.floor, lvl.discretization);
    res.levels.assign(all_levels.begin() + 1, all_levels.end());

    std::vector<double> lx, ly;
    for (auto& lvl : res.levels) {
        if (lvl.epsilon > 0.0 && lvl.max_deviation > 3.0 * res.floor) {
            lvl.used = true;
            lx.push_back(std::log(lvl.epsilon));
            ly.push_back(std::log(lvl.max_deviation - res.floor));
        }
    }
    res.points_used = static_cast<int>(lx.size());
    if (lx.size() >= 2) {
        const auto fit = fit_line(lx, ly);
        res.fitted = true;
        res.exponent = fit.slope;
        res.constant = std::exp(fit.intercept);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Boundedness of the C' mass across a sweep
// ---------------------------------------------------------------------------

struct CMassBound {
    double gamma_hat = 0.0;         // max observed I_C'
    double level = 0.0;             // mean over eps of the per-eps maximum
    double trend_slope = 0.0;       // d(max I_C') / d eps, least squares
    double relative_growth = 0.0;   // trend_slope * eps_max / level
    double bound = 0.0;             // factor * max l(C')/Area(D) + C * eps_max
    bool within_bound = false;
    bool stable = false;            // relative_growth <= max_relative_growth

    [[nodiscard]] bool pass() const { return within_bound && stable; }
};

inline CMassBound c_mass_bound_check(const SweepResult& sweep, double factor = 1.1,
                                     double max_relative_growth = 0.2) {
    if (sweep.levels.empty()) throw PreconditionError("c_mass_bound_check: sweep has no epsilon values");
    if (sweep.modes < 5) throw PreconditionError("c_mass_bound_check: needs at least 5 modes");
    CMassBound r;
    std::vector<double> eps, peak;
    double max_pred = 0.0;
    for (const auto& lvl : sweep.levels) {
        eps.push_back(lvl.epsilon);
        peak.push_back(lvl.max_c_mass);
        r.gamma_hat = std::max(r.gamma_hat, lvl.max_c_mass);
        r.level += lvl.max_c_mass;
        max_pred = std::max(max_pred, lvl.c_prediction);
    }
    r.level /= static_cast<double>(peak.size());
    const double eps_max = eps.back();
    if (eps.size() >= 2) {
        r.trend_slope = fit_line(eps, peak).slope;
        r.relative_growth = r.trend_slope * eps_max / r.level;
    }
    r.stable = r.relative_growth <= max_relative_growth;
    const double c = sweep.fitted ? sweep.constant : 0.0;
    r.bound = factor * max_pred + c * eps_max;
    r.within_bound = r.gamma_hat <= r.bound;
    return r;
}

// ---------------------------------------------------------------------------
// Refinement study
// ---------------------------------------------------------------------------

struct TrackedQuantity {
    std::string name;
    std::vector<double> errors; // one per level
    std::vector<double> successive;
    double order = 0.0;         // least-squares fit over all levels
};

struct ConvergenceResult {
    std::vector<int> levels;
    std::vector<std::vector<double>> eigenvalues;             // [level][mode]
    std::vector<std::vector<std::array<double, 3>>> masses;   // [level][mode][side]
    std::vector<double> extrapolated_eigenvalues;             // [mode]
    std::vector<std::array<double, 3>> extrapolated_masses;   // [mode][side]
    std::vector<double> extrapolated_identity;                // [mode], max |residual| after extrapolation
    std::optional<std::vector<double>> exact_eigenvalues;
    std::vector<TrackedQuantity> quantities;
    double floor = 0.0;                                       // max of extrapolated_identity

    [[nodiscard]] const TrackedQuantity& quantity(const std::string& name) const {
        for (const auto& q : quantities)
            if (q.name == name) return q;
        throw PreconditionError("unknown tracked quantity " + name);
    }
};

inline ConvergenceResult convergence_study(const DomainSpec& spec, std::span<const int> level_list,
                                           const SolverParams& params) {
    if (level_list.size() < 3) throw ConfigError("convergence study needs at least 3 levels");
    for (std::size_t i = 1; i < level_list.size(); ++i)
        if (!(level_list[i] > level_list[i - 1])) throw ConfigError("levels must be strictly increasing");
    validate(spec);

    ConvergenceResult res;
    res.levels.assign(level_list.begin(), level_list.end());
    const std::size_t L = res.levels.size();
    std::vector<std::vector<ModeReport>> reports(L);
    parallel_for(L, params.threads, [&](std::size_t i) {
        SolverParams p = params;
        p.threads = 1;
        p.n = res.levels[i];
        const auto sol = solve_domain(spec, p.n, p);
        for (const auto& pair : sol.pairs) reports[i].push_back(evaluate_mode(pair, sol.mesh, spec));
    });

    const auto K = static_cast<std::size_t>(params.k);
    const double area = domain_area(spec);
    std::array<double, 3> pred{};
    for (Side s : all_sides) pred[static_cast<std::size_t>(s)] = side_length(spec, s) / area;
    const bool masses_exact = !spec.perturbed() && !(spec.has_potential() && spec.epsilon != 0.0);
    const double trace_order = params.element_order;

    res.eigenvalues.assign(L, std::vector<double>(K));
    res.masses.assign(L, std::vector<std::array<double, 3>>(K));
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t m = 0; m < K; ++m) {
            res.eigenvalues[i][m] = reports[i][m].lambda;
            for (std::size_t s = 0; s < 3; ++s) res.masses[i][m][s] = reports[i][m].sides[s].value;
        }

    res.extrapolated_eigenvalues.resize(K);
    res.extrapolated_masses.resize(K);
    res.extrapolated_identity.assign(K, 0.0);
    for (std::size_t m = 0; m < K; ++m) {
        std::vector<double> lam(L);
        for (std::size_t i = 0; i < L; ++i) lam[i] = res.eigenvalues[i][m];
        res.extrapolated_eigenvalues[m] = richardson(res.levels, lam, 2.0 * params.element_order).limit;
        for (std::size_t s = 0; s < 3; ++s) {
            std::vector<double> v(L);
            for (std::size_t i = 0; i < L; ++i) v[i] = res.masses[i][m][s];
            res.extrapolated_masses[m][s] = richardson(res.levels, v, trace_order).limit;
        }
        const std::size_t nid = spec.has_potential() ? 3 : reports[0][m].identities.size();
        for (std::size_t j = 0; j < nid; ++j) {
            std::vector<double> v(L);
            for (std::size_t i = 0; i < L; ++i) {
                if (spec.has_potential()) {
                    const auto& rr = reports[i][m].rellich;
                    v[i] = j == 0 ? rr.residual0() : (j == 1 ? rr.residual_x() : rr.residual_y());
                } else {
                    const auto& id = reports[i][m].identities[j];
                    v[i] = id.lhs - id.rhs;
                }
            }
            res.extrapolated_identity[m] = std::max(res.extrapolated_identity[m],
                                                    std::abs(richardson(res.levels, v, trace_order).limit));
        }
        res.floor = std::max(res.floor, res.extrapolated_identity[m]);
    }
    res.exact_eigenvalues = exact_eigenvalues(spec, params.k);

    TrackedQuantity eig{"eigenvalue_error", {}, {}, 0.0};
    TrackedQuantity mass{"side_mass_deviation", {}, {}, 0.0};
    TrackedQuantity ident{spec.has_potential() ? "rellich_residual" : "identity_residual", {}, {}, 0.0};
    TrackedQuantity rell{"rellich_deviation", {}, {}, 0.0};
    for (std::size_t i = 0; i < L; ++i) {
        double e = 0, d = 0, id = 0, rd = 0;
        for (std::size_t m = 0; m < K; ++m) {
            const auto& rep = reports[i][m];
            const double ref = res.exact_eigenvalues ? (*res.exact_eigenvalues)[m] : res.extrapolated_eigenvalues[m];
            e = std::max(e, std::abs(rep.lambda - ref) / ref);
            for (std::size_t s = 0; s < 3; ++s) {
                const double target = masses_exact ? pred[s] : res.extrapolated_masses[m][s];
                d = std::max(d, std::abs(rep.sides[s].value - target) / target);
            }
            if (spec.has_potential()) {
                id = std::max({id, std::abs(rep.rellich.residual0()), std::abs(rep.rellich.residual_x()),
                               std::abs(rep.rellich.residual_y())});
            } else {
                id = std::max(id, rep.max_identity_relative());
            }
            rd = std::max({rd, std::abs(rep.rellich.residual0()), std::abs(rep.rellich.residual_x()),
                           std::abs(rep.rellich.residual_y())});
        }
        eig.errors.push_back(e);
        mass.errors.push_back(d);
        ident.errors.push_back(id);
        rell.errors.push_back(rd);
    }
    for (auto* q : {&eig, &mass, &ident, &rell}) {
        q->successive = successive_orders(res.levels, q->errors);
        q->order = fitted_order(res.levels, q->errors);
        res.quantities.push_back(*q);
    }
    return res;
}

} // namespace massmeter
