#pragma once
/// Lagrange P1/P2 discretization of the Dirichlet problem on a Mesh.
///
/// With a potential, (-h^2 Lap + w_eps) u = u is solved as the linear
/// generalized problem -Lap u = lambda (1 - w_eps) u, lambda = h^-2, so the
/// weighted mass Mw takes the place of M. Eigenvectors are always normalized
/// in the unweighted L2 norm.

#include <Eigen/SparseCore>

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "massmeter/eigensolver.hpp"
#include "massmeter/error.hpp"
#include "massmeter/geometry.hpp"
#include "massmeter/mesh.hpp"
#include "massmeter/quadrature.hpp"

namespace massmeter {

struct SparseSymForm {
    SparseMatrix matrix;
    bool symmetric = true;

    [[nodiscard]] Eigen::Index dimension() const { return matrix.rows(); }
};

struct AssembledForms {
    SparseSymForm stiffness;       // K = int grad phi_i . grad phi_j
    SparseSymForm mass;            // M = int phi_i phi_j
    SparseSymForm weighted_mass;   // Mw = int (1 - w_eps) phi_i phi_j
    bool has_potential = false;
    int quad_degree = 0;
};

struct EigenPair {
    double lambda = 0.0;
    double h = 0.0;
    Eigen::VectorXd coefficients; // interior unknowns, see Mesh::interior_index
    double residual_norm = 0.0;
    int mode_index = 0;
};

/// Affine element data: corners and gradients of the barycentric coordinates.
struct ElementGeometry {
    std::array<Vec2, 3> corner;
    std::array<Vec2, 3> grad_bary;
    double area = 0.0;

    explicit ElementGeometry(const std::array<Vec2, 3>& c) : corner(c) {
        const double twice = cross(c[1] - c[0], c[2] - c[0]);
        area = 0.5 * twice;
        for (int i = 0; i < 3; ++i) {
            const Vec2 e = c[static_cast<std::size_t>((i + 2) % 3)] - c[static_cast<std::size_t>((i + 1) % 3)];
            // Rotate the opposite edge by -90 degrees and scale.
            grad_bary[static_cast<std::size_t>(i)] = {-e.y / twice, e.x / twice};
        }
    }

    [[nodiscard]] Vec2 point(const std::array<double, 3>& b) const {
        return b[0] * corner[0] + b[1] * corner[1] + b[2] * corner[2];
    }

    /// Barycentric coordinates of a physical point (may fall outside [0,1]).
    [[nodiscard]] std::array<double, 3> barycentric(Vec2 p) const {
        std::array<double, 3> b{};
        for (int i = 0; i < 3; ++i)
            b[static_cast<std::size_t>(i)] = 1.0 / 3.0 + dot(grad_bary[static_cast<std::size_t>(i)], p - centroid());
        return b;
    }

    [[nodiscard]] Vec2 centroid() const { return (1.0 / 3.0) * (corner[0] + corner[1] + corner[2]); }
};

/// Shape function values at barycentric point `b`; entries beyond the
/// element's dof count are zero.
inline std::array<double, 6> shape_values(int order, const std::array<double, 3>& b) {
    if (order == 1) return {b[0], b[1], b[2], 0.0, 0.0, 0.0};
    return {b[0] * (2 * b[0] - 1), b[1] * (2 * b[1] - 1), b[2] * (2 * b[2] - 1),
            4 * b[0] * b[1], 4 * b[1] * b[2], 4 * b[2] * b[0]};
}

inline std::array<Vec2, 6> shape_gradients(int order, const ElementGeometry& geo, const std::array<double, 3>& b) {
    const auto& g = geo.grad_bary;
    if (order == 1) return {g[0], g[1], g[2], Vec2{}, Vec2{}, Vec2{}};
    return {(4 * b[0] - 1) * g[0],
            (4 * b[1] - 1) * g[1],
            (4 * b[2] - 1) * g[2],
            4 * (b[0] * g[1] + b[1] * g[0]),
            4 * (b[1] * g[2] + b[2] * g[1]),
            4 * (b[2] * g[0] + b[0] * g[2])};
}

inline double nodal_coefficient(const Mesh& mesh, const Eigen::VectorXd& coeffs, int node) {
    const int idx = mesh.interior_index[static_cast<std::size_t>(node)];
    return idx < 0 ? 0.0 : coeffs[idx];
}

inline void check_element(const Mesh& mesh, std::size_t element) {
    if (element >= mesh.elements.size()) throw RangeError("element index out of range");
}

/// u_h at barycentric point `b` of `element`.
inline double evaluate_value(const Eigen::VectorXd& coeffs, const Mesh& mesh, std::size_t element,
                             const std::array<double, 3>& b) {
    check_element(mesh, element);
    const auto dofs = mesh.element_dofs(element);
    const auto phi = shape_values(mesh.order, b);
    double u = 0.0;
    for (int a = 0; a < mesh.dofs_per_element(); ++a)
        u += phi[static_cast<std::size_t>(a)] * nodal_coefficient(mesh, coeffs, dofs[static_cast<std::size_t>(a)]);
    return u;
}

/// grad u_h at barycentric point `b` of `element` (exact for the piecewise polynomial).
inline Vec2 evaluate_gradient(const Eigen::VectorXd& coeffs, const Mesh& mesh, std::size_t element,
                              const std::array<double, 3>& b) {
    check_element(mesh, element);
    const ElementGeometry geo(mesh.corners(element));
    const auto dofs = mesh.element_dofs(element);
    const auto grads = shape_gradients(mesh.order, geo, b);
    Vec2 g;
    for (int a = 0; a < mesh.dofs_per_element(); ++a)
        g = g + nodal_coefficient(mesh, coeffs, dofs[static_cast<std::size_t>(a)]) * grads[static_cast<std::size_t>(a)];
    return g;
}

inline Vec2 evaluate_gradient(const EigenPair& pair, const Mesh& mesh, std::size_t element,
                              const std::array<double, 3>& b) {
    return evaluate_gradient(pair.coefficients, mesh, element, b);
}

/// Volume quadrature degree used for a given element order.
inline int default_quad_degree(int order) { return 2 * order + 2; }

/// Assemble K, M and Mw on the interior unknowns of `mesh`.
inline AssembledForms assemble(const Mesh& mesh, const DomainSpec& spec, int quad_degree = 0) {
    if (spec.has_potential() && spec.perturbed())
        throw ConfigError("potential requires unperturbed triangle: gtilde must vanish when wtilde is set");
    AssembledForms out;
    out.has_potential = spec.has_potential();
    out.quad_degree = quad_degree > 0 ? quad_degree : default_quad_degree(mesh.order);
    const auto& rule = quad::triangle_rule(out.quad_degree);

    if (spec.has_potential()) {
        const auto [sv, sg] = spec.wtilde->sup_on(spec.corners());
        (void)sg;
        if (spec.epsilon * sv >= 1.0)
            throw InvalidWeightError("weight 1 - w_eps is not positive on the domain (epsilon * sup|w~| >= 1)");
    }

    const int nd = mesh.dofs_per_element();
    std::vector<Eigen::Triplet<double>> kt;
    std::vector<Eigen::Triplet<double>> mt;
    std::vector<Eigen::Triplet<double>> wt;
    const auto per_elem = static_cast<std::size_t>(nd * nd);
    kt.reserve(mesh.elements.size() * per_elem);
    mt.reserve(mesh.elements.size() * per_elem);
    if (out.has_potential) wt.reserve(mesh.elements.size() * per_elem);

    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
        const ElementGeometry geo(mesh.corners(e));
        const auto dofs = mesh.element_dofs(e);
        double ke[6][6] = {};
        double me[6][6] = {};
        double we[6][6] = {};
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const auto& b = rule.points[q];
            const double wq = rule.weights[q] * geo.area;
            const auto phi = shape_values(mesh.order, b);
            const auto dphi = shape_gradients(mesh.order, geo, b);
            double weight = 1.0;
            if (out.has_potential) {
                const Vec2 p = geo.point(b);
                weight = 1.0 - spec.w_eps(p.x, p.y);
                if (!(weight > 0.0)) throw InvalidWeightError("weight 1 - w_eps is not positive at a quadrature point");
            }
            for (int i = 0; i < nd; ++i)
                for (int j = 0; j < nd; ++j) {
                    ke[i][j] += wq * dot(dphi[static_cast<std::size_t>(i)], dphi[static_cast<std::size_t>(j)]);
                    const double mm = wq * phi[static_cast<std::size_t>(i)] * phi[static_cast<std::size_t>(j)];
                    me[i][j] += mm;
                    we[i][j] += weight * mm;
                }
        }
        for (int i = 0; i < nd; ++i) {
            const int gi = mesh.interior_index[static_cast<std::size_t>(dofs[static_cast<std::size_t>(i)])];
            if (gi < 0) continue;
            for (int j = 0; j < nd; ++j) {
                const int gj = mesh.interior_index[static_cast<std::size_t>(dofs[static_cast<std::size_t>(j)])];
                if (gj < 0) continue;
                kt.emplace_back(gi, gj, ke[i][j]);
                mt.emplace_back(gi, gj, me[i][j]);
                if (out.has_potential) wt.emplace_back(gi, gj, we[i][j]);
            }
        }
    }

    const Eigen::Index n = mesh.interior_count;
    out.stiffness.matrix.resize(n, n);
    out.stiffness.matrix.setFromTriplets(kt.begin(), kt.end());
    out.mass.matrix.resize(n, n);
    out.mass.matrix.setFromTriplets(mt.begin(), mt.end());
    if (out.has_potential) {
        out.weighted_mass.matrix.resize(n, n);
        out.weighted_mass.matrix.setFromTriplets(wt.begin(), wt.end());
    } else {
        out.weighted_mass.matrix = out.mass.matrix;
    }
    // Element blocks are symmetric term by term; make the stored pattern bitwise symmetric.
    for (auto* form : {&out.stiffness, &out.mass, &out.weighted_mass}) {
        SparseMatrix t = form->matrix.transpose();
        form->matrix = 0.5 * (form->matrix + t);
        form->matrix.makeCompressed();
    }
    return out;
}

/// Unassembled element matrices (all local dofs, no Dirichlet elimination);
/// used for checks on single elements.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> element_matrices(const std::array<Vec2, 3>& corners, int order) {
    const ElementGeometry geo(corners);
    const int nd = order == 1 ? 3 : 6;
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nd, nd);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nd, nd);
    const auto& rule = quad::triangle_rule(default_quad_degree(order));
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double wq = rule.weights[q] * geo.area;
        const auto phi = shape_values(order, rule.points[q]);
        const auto dphi = shape_gradients(order, geo, rule.points[q]);
        for (int i = 0; i < nd; ++i)
            for (int j = 0; j < nd; ++j) {
                k(i, j) += wq * dot(dphi[static_cast<std::size_t>(i)], dphi[static_cast<std::size_t>(j)]);
                m(i, j) += wq * phi[static_cast<std::size_t>(i)] * phi[static_cast<std::size_t>(j)];
            }
    }
    return {k, m};
}

/// k lowest eigenpairs of K u = lambda B u, normalized so that u^T M u = 1.
/// The sign is fixed by making the largest-magnitude coefficient positive.
inline std::vector<EigenPair> solve_eigenpairs(const SparseSymForm& K, const SparseSymForm& B,
                                               const SparseSymForm& M, int k, double tol,
                                               std::uint64_t seed = 1) {
    EigenOptions opt;
    opt.count = k;
    opt.tol = tol;
    opt.seed = seed;
    const auto raw = lowest_eigenpairs(K.matrix, B.matrix, opt);
    std::vector<EigenPair> out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        EigenPair p;
        p.lambda = raw[i].lambda;
        p.h = 1.0 / std::sqrt(p.lambda);
        p.coefficients = raw[i].vector;
        p.coefficients /= std::sqrt(p.coefficients.dot(M.matrix * p.coefficients));
        Eigen::Index imax = 0;
        p.coefficients.cwiseAbs().maxCoeff(&imax);
        if (p.coefficients[imax] < 0.0) p.coefficients = -p.coefficients;
        p.residual_norm = relative_residual(K.matrix, B.matrix, p.lambda, p.coefficients);
        p.mode_index = static_cast<int>(i) + 1;
        out.push_back(std::move(p));
    }
    return out;
}

/// Convenience: picks Mw when the forms carry a potential.
inline std::vector<EigenPair> solve_eigenpairs(const AssembledForms& forms, int k, double tol,
                                               std::uint64_t seed = 1) {
    const SparseSymForm& B = forms.has_potential ? forms.weighted_mass : forms.mass;
    return solve_eigenpairs(forms.stiffness, B, forms.mass, k, tol, seed);
}

/// Sum over elements of the quadrature of `integrand(point, u, grad u)`.
template <class F>
double integrate_volume(const Eigen::VectorXd& coeffs, const Mesh& mesh, F&& integrand, int quad_degree = 0) {
    const auto& rule = quad::triangle_rule(quad_degree > 0 ? quad_degree : default_quad_degree(mesh.order));
    double total = 0.0;
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
        const ElementGeometry geo(mesh.corners(e));
        const auto dofs = mesh.element_dofs(e);
        double coeff[6] = {};
        for (int a = 0; a < mesh.dofs_per_element(); ++a)
            coeff[a] = nodal_coefficient(mesh, coeffs, dofs[static_cast<std::size_t>(a)]);
        double local = 0.0;
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const auto& b = rule.points[q];
            const auto phi = shape_values(mesh.order, b);
            const auto dphi = shape_gradients(mesh.order, geo, b);
            double u = 0.0;
            Vec2 gu;
            for (int a = 0; a < mesh.dofs_per_element(); ++a) {
                u += coeff[a] * phi[static_cast<std::size_t>(a)];
                gu = gu + coeff[a] * dphi[static_cast<std::size_t>(a)];
            }
            local += rule.weights[q] * integrand(geo.point(b), u, gu);
        }
        total += local * geo.area;
    }
    return total;
}

} // namespace massmeter
