#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "massmeter/mesh.hpp"

using namespace massmeter;

namespace {

DomainSpec sine_acute(double eps) {
    DomainSpec s;
    s.epsilon = eps;
    s.gtilde = PerturbationFn::normalized({1.0}, 1.0);
    return s;
}

} // namespace

TEST(Mesh, CountsForLinearLattice) {
    for (int n : {2, 3, 8}) {
        const auto m = generate_mesh(sine_acute(0.0), n, 1);
        EXPECT_EQ(m.node_count(), static_cast<std::size_t>((n + 1) * (n + 2) / 2));
        EXPECT_EQ(m.elements.size(), static_cast<std::size_t>(n * n));
        EXPECT_EQ(m.interior_count, (n - 1) * (n - 2) / 2);
    }
}

TEST(Mesh, CountsForQuadraticLattice) {
    const int n = 6;
    const auto m = generate_mesh(sine_acute(0.0), n, 2);
    const int nodes = (2 * n + 1) * (2 * n + 2) / 2;
    EXPECT_EQ(m.node_count(), static_cast<std::size_t>(nodes));
    EXPECT_EQ(m.interior_count, (2 * n - 1) * (2 * n - 2) / 2);
}

TEST(Mesh, CoarsestLevelHasFourElementsAndTwoEdgesPerSide) {
    const auto m = generate_mesh(sine_acute(0.1), 2, 2);
    EXPECT_EQ(m.elements.size(), 4u);
    int count[3] = {};
    for (const auto& be : m.boundary_edges) ++count[static_cast<int>(be.side)];
    EXPECT_EQ(count[0], 2);
    EXPECT_EQ(count[1], 2);
    EXPECT_EQ(count[2], 2);
}

TEST(Mesh, UnwarpedElementsAreCongruentAndTileTheTriangle) {
    const auto s = sine_acute(0.0);
    const auto m = generate_mesh(s, 4, 1);
    EXPECT_EQ(m.elements.size(), 16u);
    for (std::size_t e = 0; e < m.elements.size(); ++e) EXPECT_NEAR(m.signed_area(e), 1.0 / 16.0, 1e-15);
    EXPECT_NEAR(m.total_area(), domain_area(s), 1e-14);
    EXPECT_EQ(mesh_quality(m, s).boundary_fit, 0.0);
}

TEST(Mesh, WarpIsIdentityAtZeroEpsilon) {
    const auto s0 = sine_acute(0.0);
    DomainSpec flat;
    const auto a = generate_mesh(s0, 8, 2);
    const auto b = generate_mesh(flat, 8, 2);
    ASSERT_EQ(a.vertices.size(), b.vertices.size());
    for (std::size_t i = 0; i < a.vertices.size(); ++i) EXPECT_EQ(a.vertices[i], b.vertices[i]);
}

TEST(Mesh, WarpedElementsArePositiveAndAreaConverges) {
    const auto s = sine_acute(0.05);
    const double exact = domain_area(s);
    std::vector<double> err;
    for (int n : {8, 16, 32}) {
        const auto m = generate_mesh(s, n, 1);
        for (std::size_t e = 0; e < m.elements.size(); ++e) EXPECT_GT(m.signed_area(e), 0.0);
        err.push_back(std::abs(m.total_area() - exact));
    }
    EXPECT_GE(std::log2(err[0] / err[1]), 1.9);
    EXPECT_GE(std::log2(err[1] / err[2]), 1.9);
}

TEST(Mesh, CurvedSideNodesLieOnTheCurve) {
    const auto s = sine_acute(0.1);
    for (int order : {1, 2}) {
        const auto m = generate_mesh(s, 16, order);
        EXPECT_LE(mesh_quality(m, s).boundary_fit, 1e-13);
    }
}

TEST(Mesh, BoundaryEdgesCoverEachSide) {
    for (auto orient : {Orientation::acute, Orientation::obtuse}) {
        DomainSpec s = sine_acute(0.05);
        s.orientation = orient;
        const auto m = generate_mesh(s, 12, 2);
        double len[3] = {};
        for (const auto& be : m.boundary_edges) {
            const auto& v = m.elements[static_cast<std::size_t>(be.element)];
            const Vec2 p0 = m.vertices[static_cast<std::size_t>(v[static_cast<std::size_t>(be.local_edge)])];
            const Vec2 p1 = m.vertices[static_cast<std::size_t>(v[static_cast<std::size_t>((be.local_edge + 1) % 3)])];
            len[static_cast<int>(be.side)] += norm(p1 - p0);
            // every boundary node is a Dirichlet node
            for (int idx : m.edge_node_indices(be)) EXPECT_EQ(m.interior_index[static_cast<std::size_t>(idx)], -1);
        }
        EXPECT_NEAR(len[0], side_length(s, Side::A), 1e-13);
        EXPECT_NEAR(len[1], side_length(s, Side::B), 1e-13);
        EXPECT_NEAR(len[2], side_length(s, Side::C), 1e-3);
    }
}

TEST(Mesh, EachBoundaryEdgeHasOneTag) {
    const auto m = generate_mesh(sine_acute(0.05), 10, 1);
    std::set<std::pair<int, int>> seen;
    for (const auto& be : m.boundary_edges) {
        const auto& v = m.elements[static_cast<std::size_t>(be.element)];
        int a = v[static_cast<std::size_t>(be.local_edge)];
        int b = v[static_cast<std::size_t>((be.local_edge + 1) % 3)];
        EXPECT_TRUE(seen.insert({std::min(a, b), std::max(a, b)}).second);
    }
    EXPECT_EQ(seen.size(), 30u);
}

TEST(Mesh, MinAngleIsStableUnderRefinementAndWarp) {
    const auto flat = sine_acute(0.0);
    const double a8 = mesh_quality(generate_mesh(flat, 8, 1), flat).min_angle;
    const double a32 = mesh_quality(generate_mesh(flat, 32, 1), flat).min_angle;
    EXPECT_NEAR(a8, a32, 1e-12);
    const auto warped = sine_acute(0.05);
    const double w = mesh_quality(generate_mesh(warped, 32, 1), warped).min_angle;
    EXPECT_GE(w, 0.8 * a32);
}

TEST(Mesh, RejectsTooCoarse) { EXPECT_THROW(generate_mesh(sine_acute(0.0), 1, 2), ConfigError); }

TEST(Mesh, DumpHasThreeSections) {
    const auto m = generate_mesh(sine_acute(0.05), 3, 2);
    std::ostringstream os;
    write_mesh(os, m);
    const auto text = os.str();
    EXPECT_NE(text.find("vertices " + std::to_string(m.vertices.size())), std::string::npos);
    EXPECT_NE(text.find("elements 9"), std::string::npos);
    EXPECT_NE(text.find("boundary_edges 9"), std::string::npos);
}
