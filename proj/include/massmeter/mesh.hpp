#pragma once
/// Boundary-fitted triangulations of D_eps.
///
/// The straight triangle T is cut into n^2 similar elements by the
/// barycentric lattice spanned from the origin towards the ends of B and C.
/// Each node is then moved vertically, y -> y + mu * g(x), where mu is the
/// relative height between B (mu = 0) and C (mu = 1). On the lattice mu is
/// simply J / (I + J), so A and B stay put and C lands exactly on C'.

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "massmeter/error.hpp"
#include "massmeter/geometry.hpp"

namespace massmeter {

struct BoundaryEdge {
    int element = 0;
    int local_edge = 0; // joins local vertices local_edge and (local_edge + 1) % 3
    Side side = Side::A;
    double t0 = 0.0; // parameter interval: x for B and C', y for A
    double t1 = 0.0;
};

struct Mesh {
    int n = 0;
    int order = 1;
    /// Corner vertices first, then (order 2) one node per edge.
    std::vector<Vec2> vertices;
    int vertex_count = 0;
    /// Counter-clockwise corner indices.
    std::vector<std::array<int, 3>> elements;
    /// Mid-edge node of local edge k (order 2 only).
    std::vector<std::array<int, 3>> edge_nodes;
    std::vector<BoundaryEdge> boundary_edges;
    /// Per node: position among the unknowns, or -1 on the Dirichlet boundary.
    std::vector<int> interior_index;
    int interior_count = 0;

    [[nodiscard]] std::size_t node_count() const { return vertices.size(); }
    [[nodiscard]] int dofs_per_element() const { return order == 1 ? 3 : 6; }

    /// Local dof order: three corners, then mid-edge nodes of edges 01, 12, 20.
    [[nodiscard]] std::array<int, 6> element_dofs(std::size_t e) const {
        const auto& v = elements[e];
        if (order == 1) return {v[0], v[1], v[2], -1, -1, -1};
        const auto& m = edge_nodes[e];
        return {v[0], v[1], v[2], m[0], m[1], m[2]};
    }

    [[nodiscard]] std::array<Vec2, 3> corners(std::size_t e) const {
        const auto& v = elements[e];
        return {vertices[static_cast<std::size_t>(v[0])], vertices[static_cast<std::size_t>(v[1])],
                vertices[static_cast<std::size_t>(v[2])]};
    }

    [[nodiscard]] double signed_area(std::size_t e) const {
        const auto c = corners(e);
        return 0.5 * cross(c[1] - c[0], c[2] - c[0]);
    }

    [[nodiscard]] double total_area() const {
        double a = 0.0;
        for (std::size_t e = 0; e < elements.size(); ++e) a += signed_area(e);
        return a;
    }

    /// Node indices on one boundary edge: two ends, plus the middle for order 2.
    [[nodiscard]] std::vector<int> edge_node_indices(const BoundaryEdge& be) const {
        const auto& v = elements[static_cast<std::size_t>(be.element)];
        const int k = be.local_edge;
        std::vector<int> out{v[static_cast<std::size_t>(k)], v[static_cast<std::size_t>((k + 1) % 3)]};
        if (order == 2) out.push_back(edge_nodes[static_cast<std::size_t>(be.element)][static_cast<std::size_t>(k)]);
        return out;
    }
};

/// Build the warped lattice mesh with `n` elements along each side.
inline Mesh generate_mesh(const DomainSpec& spec, int n, int order = 2) {
    validate(spec);
    if (n < 2) throw ConfigError("mesh refinement n must be >= 2");
    if (order != 1 && order != 2) throw ConfigError("element_order must be 1 or 2");

    Mesh mesh;
    mesh.n = n;
    mesh.order = order;

    const auto tri = spec.corners();
    const Vec2 pb = tri[1];
    const Vec2 pc = tri[2];

    // Lattice node (I, J) = (I/n) pb + (J/n) pc with I + J <= n.
    std::vector<int> row_start(static_cast<std::size_t>(n + 2), 0);
    for (int i = 0; i <= n; ++i) row_start[static_cast<std::size_t>(i + 1)] = row_start[static_cast<std::size_t>(i)] + (n - i + 1);
    auto lattice = [&](int i, int j) { return row_start[static_cast<std::size_t>(i)] + j; };

    mesh.vertex_count = (n + 1) * (n + 2) / 2;
    mesh.vertices.resize(static_cast<std::size_t>(mesh.vertex_count));
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; i + j <= n; ++j) {
            Vec2 p = (static_cast<double>(i) / n) * pb + (static_cast<double>(j) / n) * pc;
            if (i + j > 0) {
                const double mu = static_cast<double>(j) / (i + j);
                p.y += mu * spec.g(p.x);
            }
            if (j > 0 && i == 0) p.y = spec.f(p.x); // exactly on C'
            mesh.vertices[static_cast<std::size_t>(lattice(i, j))] = p;
        }
    }

    struct Tagged {
        int element;
        int local_edge;
        Side side;
    };
    std::vector<Tagged> tagged;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; i + j < n; ++j) {
            const int e = static_cast<int>(mesh.elements.size());
            mesh.elements.push_back({lattice(i, j), lattice(i + 1, j), lattice(i, j + 1)});
            if (j == 0) tagged.push_back({e, 0, Side::B});
            if (i + j + 1 == n) tagged.push_back({e, 1, Side::A});
            if (i == 0) tagged.push_back({e, 2, Side::C});
            if (i + j + 1 < n) mesh.elements.push_back({lattice(i + 1, j), lattice(i + 1, j + 1), lattice(i, j + 1)});
        }
    }

    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
        if (!(mesh.signed_area(e) > 0.0))
            throw MeshQualityError("inverted element " + std::to_string(e) + " after warping; reduce epsilon or refine");
    }

    // Canonical order: by side, then along the side.
    for (const auto& t : tagged) {
        const auto& v = mesh.elements[static_cast<std::size_t>(t.element)];
        const Vec2 p0 = mesh.vertices[static_cast<std::size_t>(v[static_cast<std::size_t>(t.local_edge)])];
        const Vec2 p1 = mesh.vertices[static_cast<std::size_t>(v[static_cast<std::size_t>((t.local_edge + 1) % 3)])];
        BoundaryEdge be{t.element, t.local_edge, t.side, 0.0, 0.0};
        if (t.side == Side::A) {
            be.t0 = std::min(p0.y, p1.y);
            be.t1 = std::max(p0.y, p1.y);
        } else {
            be.t0 = std::min(p0.x, p1.x);
            be.t1 = std::max(p0.x, p1.x);
        }
        mesh.boundary_edges.push_back(be);
    }
    std::stable_sort(mesh.boundary_edges.begin(), mesh.boundary_edges.end(),
                     [](const BoundaryEdge& a, const BoundaryEdge& b) {
                         if (a.side != b.side) return static_cast<int>(a.side) < static_cast<int>(b.side);
                         return a.t0 < b.t0;
                     });

    std::vector<char> on_boundary(static_cast<std::size_t>(mesh.vertex_count), 0);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j)
            if (i == 0 || j == 0 || i + j == n) on_boundary[static_cast<std::size_t>(lattice(i, j))] = 1;

    if (order == 2) {
        std::map<std::pair<int, int>, int> edge_index;
        std::map<std::pair<int, int>, Side> boundary_side;
        for (const auto& be : mesh.boundary_edges) {
            const auto& v = mesh.elements[static_cast<std::size_t>(be.element)];
            int a = v[static_cast<std::size_t>(be.local_edge)];
            int b = v[static_cast<std::size_t>((be.local_edge + 1) % 3)];
            boundary_side[{std::min(a, b), std::max(a, b)}] = be.side;
        }
        mesh.edge_nodes.resize(mesh.elements.size());
        for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
            for (int k = 0; k < 3; ++k) {
                const int a = mesh.elements[e][static_cast<std::size_t>(k)];
                const int b = mesh.elements[e][static_cast<std::size_t>((k + 1) % 3)];
                const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
                auto it = edge_index.find(key);
                if (it == edge_index.end()) {
                    const int id = static_cast<int>(mesh.vertices.size());
                    Vec2 mid = 0.5 * (mesh.vertices[static_cast<std::size_t>(a)] + mesh.vertices[static_cast<std::size_t>(b)]);
                    auto bs = boundary_side.find(key);
                    if (bs != boundary_side.end()) {
                        if (bs->second == Side::C) mid.y = spec.f(mid.x);
                        on_boundary.push_back(1);
                    } else {
                        on_boundary.push_back(0);
                    }
                    mesh.vertices.push_back(mid);
                    it = edge_index.emplace(key, id).first;
                }
                mesh.edge_nodes[e][static_cast<std::size_t>(k)] = it->second;
            }
        }
    }

    mesh.interior_index.assign(mesh.vertices.size(), -1);
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        if (!on_boundary[i]) mesh.interior_index[i] = mesh.interior_count++;
    return mesh;
}

struct MeshQuality {
    double min_angle = 0.0;      // radians
    double area_ratio = 0.0;     // min element area / max element area
    double boundary_fit = 0.0;   // max |y - f(x)| over C'-tagged nodes
};

inline MeshQuality mesh_quality(const Mesh& mesh, const DomainSpec& spec) {
    MeshQuality q;
    q.min_angle = std::numbers::pi;
    double amin = std::numeric_limits<double>::infinity();
    double amax = 0.0;
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
        const auto c = mesh.corners(e);
        for (int k = 0; k < 3; ++k) {
            const Vec2 u = c[static_cast<std::size_t>((k + 1) % 3)] - c[static_cast<std::size_t>(k)];
            const Vec2 w = c[static_cast<std::size_t>((k + 2) % 3)] - c[static_cast<std::size_t>(k)];
            q.min_angle = std::min(q.min_angle, std::atan2(std::abs(cross(u, w)), dot(u, w)));
        }
        const double a = mesh.signed_area(e);
        amin = std::min(amin, a);
        amax = std::max(amax, a);
    }
    q.area_ratio = amin / amax;
    for (const auto& be : mesh.boundary_edges) {
        if (be.side != Side::C) continue;
        for (int idx : mesh.edge_node_indices(be)) {
            const Vec2 p = mesh.vertices[static_cast<std::size_t>(idx)];
            q.boundary_fit = std::max(q.boundary_fit, std::abs(p.y - spec.f(p.x)));
        }
    }
    return q;
}

/// Plain-text dump for external plotting. Sections, in order:
///   vertices <count>        then "<index> <x> <y>"
///   elements <count>        then "<index> <v0> <v1> <v2> [<m01> <m12> <m20>]"
///   boundary_edges <count>  then "<element> <local_edge> <side> <t0> <t1>"
inline void write_mesh(std::ostream& os, const Mesh& mesh) {
    os << "# massmeter mesh\n";
    os << "order " << mesh.order << "\n";
    os << "n " << mesh.n << "\n";
    os << std::setprecision(17);
    os << "vertices " << mesh.vertices.size() << "\n";
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        os << i << " " << mesh.vertices[i].x << " " << mesh.vertices[i].y << "\n";
    os << "elements " << mesh.elements.size() << "\n";
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
        os << e;
        for (int v : mesh.elements[e]) os << " " << v;
        if (mesh.order == 2)
            for (int m : mesh.edge_nodes[e]) os << " " << m;
        os << "\n";
    }
    os << "boundary_edges " << mesh.boundary_edges.size() << "\n";
    for (const auto& be : mesh.boundary_edges)
        os << be.element << " " << be.local_edge << " " << side_name(be.side) << " " << be.t0 << " " << be.t1 << "\n";
}

} // namespace massmeter
