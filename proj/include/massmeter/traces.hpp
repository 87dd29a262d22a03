#pragma once
/// Neumann data of discrete eigenfunctions and the boundary functionals built
/// from it: per-side masses, the dilation/translation (Rellich) functional,
/// the three side identities it splits into, and the y d/dy functional.
///
/// Traces are the plain gradient of u_h on the element attached to each
/// boundary edge, sampled at Gauss points of the straight edge. On C' the
/// normal, f and f' are taken from the exact curve at the x-coordinate of the
/// sample, so geometry enters only through the position of the nodes.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "massmeter/error.hpp"
#include "massmeter/fem.hpp"
#include "massmeter/geometry.hpp"
#include "massmeter/mesh.hpp"
#include "massmeter/quadrature.hpp"

namespace massmeter {

inline constexpr int default_edge_points = 4;

struct TraceSample {
    Vec2 point;        // on the curve for C' samples: (x, f(x))
    Vec2 normal;       // outward unit normal
    Vec2 h_grad;       // h * grad u_h
    double h_dn = 0.0; // h * d_nu u_h
    double h_dt = 0.0; // h * tangential derivative (nu rotated +90 degrees)
    double weight = 0.0;
};

/// h d_nu u_h on every Gauss point of the boundary edges tagged `side`.
inline std::vector<TraceSample> neumann_trace(const EigenPair& pair, const Mesh& mesh, const DomainSpec& spec,
                                              Side side, int points_per_edge = default_edge_points) {
    const auto rule = quad::gauss_legendre(points_per_edge);
    std::vector<TraceSample> out;
    bool any = false;
    for (const auto& be : mesh.boundary_edges) {
        if (be.side != side) continue;
        any = true;
        const auto e = static_cast<std::size_t>(be.element);
        const auto& v = mesh.elements[e];
        const auto k = static_cast<std::size_t>(be.local_edge);
        const Vec2 p0 = mesh.vertices[static_cast<std::size_t>(v[k])];
        const Vec2 p1 = mesh.vertices[static_cast<std::size_t>(v[(k + 1) % 3])];
        const double len = norm(p1 - p0);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double s = rule.nodes[q];
            std::array<double, 3> b{};
            b[k] = 1.0 - s;
            b[(k + 1) % 3] = s;
            TraceSample t;
            const Vec2 p = p0 + s * (p1 - p0);
            t.point = side == Side::C ? Vec2{p.x, spec.f(p.x)} : p;
            t.normal = outward_normal(spec, side, side == Side::A ? 0.0 : std::clamp(p.x, 0.0, spec.l));
            t.h_grad = pair.h * evaluate_gradient(pair.coefficients, mesh, e, b);
            t.h_dn = dot(t.normal, t.h_grad);
            t.h_dt = dot(Vec2{-t.normal.y, t.normal.x}, t.h_grad);
            t.weight = rule.weights[q] * len;
            out.push_back(t);
        }
    }
    if (!any) throw TaggingError("no boundary edges tagged " + side_name(side));
    return out;
}

/// Traces on all three sides, indexed by Side.
struct BoundaryTraces {
    std::array<std::vector<TraceSample>, 3> side;

    [[nodiscard]] const std::vector<TraceSample>& operator[](Side s) const { return side[static_cast<std::size_t>(s)]; }
};

inline BoundaryTraces boundary_traces(const EigenPair& pair, const Mesh& mesh, const DomainSpec& spec,
                                      int points_per_edge = default_edge_points) {
    BoundaryTraces bt;
    for (Side s : all_sides) bt.side[static_cast<std::size_t>(s)] = neumann_trace(pair, mesh, spec, s, points_per_edge);
    return bt;
}

/// Sum of weight * fn(sample) over one side.
template <class F>
double side_integral(const std::vector<TraceSample>& samples, F&& fn) {
    double total = 0.0;
    for (const auto& t : samples) total += t.weight * fn(t);
    return total;
}

struct SideMassReport {
    Side side = Side::A;
    double value = 0.0;     // int_side |h d_nu u|^2 dS
    double predicted = 0.0; // length(side) / Area(D)
    double deviation = 0.0; // value - predicted
    int mode_index = 0;
    double epsilon = 0.0;
};

inline SideMassReport side_mass(const std::vector<TraceSample>& samples, const EigenPair& pair,
                                const DomainSpec& spec, Side side) {
    SideMassReport r;
    r.side = side;
    r.value = side_integral(samples, [](const TraceSample& t) { return t.h_dn * t.h_dn; });
    r.predicted = side_length(spec, side) / domain_area(spec);
    r.deviation = r.value - r.predicted;
    r.mode_index = pair.mode_index;
    r.epsilon = spec.epsilon;
    return r;
}

inline SideMassReport side_mass(const EigenPair& pair, const Mesh& mesh, const DomainSpec& spec, Side side) {
    return side_mass(neumann_trace(pair, mesh, spec, side), pair, spec, side);
}

/// Expected boundary values (R0*, Rx*, Ry*) of the dilation functional when a
/// potential is present:
///   R0* = 2 - 2 int w u^2 - int (x w_x + y w_y) u^2,  Rx* = -int w_x u^2,  Ry* = -int w_y u^2.
inline std::array<double, 3> rellich_expected(const EigenPair& pair, const Mesh& mesh, const DomainSpec& spec) {
    if (!spec.has_potential()) throw ConfigError("rellich_expected: spec has no potential (wtilde)");
    const auto& c = pair.coefficients;
    const double wu2 = integrate_volume(c, mesh, [&](Vec2 p, double u, Vec2) { return spec.w_eps(p.x, p.y) * u * u; });
    const double xw = integrate_volume(c, mesh, [&](Vec2 p, double u, Vec2) {
        const Vec2 g = spec.grad_w_eps(p.x, p.y);
        return (p.x * g.x + p.y * g.y) * u * u;
    });
    const double wx = integrate_volume(c, mesh, [&](Vec2 p, double u, Vec2) { return spec.grad_w_eps(p.x, p.y).x * u * u; });
    const double wy = integrate_volume(c, mesh, [&](Vec2 p, double u, Vec2) { return spec.grad_w_eps(p.x, p.y).y * u * u; });
    return {2.0 - 2.0 * wu2 - xw, -wx, -wy};
}

/// Boundary functional of X = (x + m) d_x + (y + n) d_y, split by linearity as
/// R0 + m Rx + n Ry.
struct RellichReport {
    double r0 = 0.0;
    double rx = 0.0;
    double ry = 0.0;
    double expected0 = 2.0;
    double expected_x = 0.0;
    double expected_y = 0.0;
    int mode_index = 0;

    [[nodiscard]] double at(double m, double n) const { return r0 + m * rx + n * ry; }
    [[nodiscard]] double residual0() const { return r0 - expected0; }
    [[nodiscard]] double residual_x() const { return rx - expected_x; }
    [[nodiscard]] double residual_y() const { return ry - expected_y; }
};

inline RellichReport rellich_components(const BoundaryTraces& bt, const EigenPair& pair, const Mesh& mesh,
                                        const DomainSpec& spec) {
    RellichReport r;
    r.mode_index = pair.mode_index;
    for (Side s : all_sides) {
        r.r0 += side_integral(bt[s], [](const TraceSample& t) {
            return (t.point.x * t.h_grad.x + t.point.y * t.h_grad.y) * t.h_dn;
        });
        r.rx += side_integral(bt[s], [](const TraceSample& t) { return t.h_grad.x * t.h_dn; });
        r.ry += side_integral(bt[s], [](const TraceSample& t) { return t.h_grad.y * t.h_dn; });
    }
    if (spec.has_potential()) {
        const auto e = rellich_expected(pair, mesh, spec);
        r.expected0 = e[0];
        r.expected_x = e[1];
        r.expected_y = e[2];
    }
    return r;
}

inline RellichReport rellich_components(const EigenPair& pair, const Mesh& mesh, const DomainSpec& spec) {
    return rellich_components(boundary_traces(pair, mesh, spec), pair, mesh, spec);
}

/// One side identity: lhs should equal rhs in the continuum for every g.
struct IdentityResidual {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0; // |lhs - rhs|
    double scale = 0.0;    // magnitude of the largest term, for relative checks
    int mode_index = 0;

    [[nodiscard]] double relative() const { return scale > 0.0 ? residual / scale : residual; }
};

/// Identities obtained from the dilation functional with m = n = 0
/// ("dilation") and from its m- and n-derivatives ("x_translation",
/// "y_translation"), written in terms of I_A, I_B and weighted C' integrals.
/// The obtuse orientation flips the sign of the I_B term in the m-derivative.
inline std::vector<IdentityResidual> identity_residuals(const BoundaryTraces& bt, const EigenPair& pair,
                                                        const DomainSpec& spec) {
    if (spec.has_potential()) throw ConfigError("identity_residuals: not defined with a potential");
    const auto mass = [](const TraceSample& t) { return t.h_dn * t.h_dn; };
    const double ia = side_integral(bt[Side::A], mass);
    const double ib = side_integral(bt[Side::B], mass);
    const double b = side_b_length(spec);
    const double l = spec.l;

    auto c_weighted = [&](auto weight) {
        return side_integral(bt[Side::C], [&](const TraceSample& t) {
            const double x = t.point.x;
            const double fp = spec.f_prime(x);
            const double gamma = std::sqrt(1.0 + fp * fp);
            return weight(x, spec.f(x), fp) / gamma * t.h_dn * t.h_dn;
        });
    };
    const double c_dilation = c_weighted([](double x, double f, double fp) { return -x * fp + f; });
    const double c_slope = c_weighted([](double, double, double fp) { return fp; });
    const double c_unit = c_weighted([](double, double, double) { return 1.0; });

    const double sign_b = spec.orientation == Orientation::acute ? -1.0 : 1.0;

    std::vector<IdentityResidual> out(3);
    out[0].id = "dilation";
    out[0].lhs = l * ia + c_dilation;
    out[0].rhs = 2.0;
    out[0].scale = std::max({2.0, std::abs(l * ia), std::abs(c_dilation)});

    out[1].id = "x_translation";
    out[1].lhs = ia + sign_b * (spec.a1 / b) * ib - c_slope;
    out[1].rhs = 0.0;
    out[1].scale = std::max({std::abs(ia), std::abs(spec.a1 / b * ib), std::abs(c_slope)});

    out[2].id = "y_translation";
    out[2].lhs = -(l / b) * ib + c_unit;
    out[2].rhs = 0.0;
    out[2].scale = std::max(std::abs(l / b * ib), std::abs(c_unit));

    for (auto& r : out) {
        r.residual = std::abs(r.lhs - r.rhs);
        r.mode_index = pair.mode_index;
    }
    return out;
}

inline std::vector<IdentityResidual> identity_residuals(const EigenPair& pair, const Mesh& mesh,
                                                        const DomainSpec& spec) {
    return identity_residuals(boundary_traces(pair, mesh, spec), pair, spec);
}

/// Boundary and volume sides of the y d/dy commutator identity:
///   int_{dD} (y h d_y u)(h d_nu u) dS = 2 int_D |h d_y u|^2 dV  (<= 2).
struct YdyFunctional {
    double boundary = 0.0;
    double volume = 0.0;
};

inline YdyFunctional ydy_functional(const BoundaryTraces& bt, const EigenPair& pair, const Mesh& mesh) {
    YdyFunctional r;
    for (Side s : all_sides)
        r.boundary += side_integral(bt[s], [](const TraceSample& t) { return t.point.y * t.h_grad.y * t.h_dn; });
    const double h2 = pair.h * pair.h;
    r.volume = 2.0 * h2 * integrate_volume(pair.coefficients, mesh, [](Vec2, double, Vec2 g) { return g.y * g.y; });
    return r;
}

inline YdyFunctional ydy_functional(const EigenPair& pair, const Mesh& mesh, const DomainSpec& spec) {
    if (spec.has_potential()) throw ConfigError("ydy_functional: not defined with a potential");
    return ydy_functional(boundary_traces(pair, mesh, spec), pair, mesh);
}

} // namespace massmeter
