#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "massmeter/traces.hpp"
#include "support.hpp"

using namespace massmeter;
using testsupport::pi;

namespace {

struct Solved {
    DomainSpec spec;
    Mesh mesh;
    std::vector<EigenPair> pairs;
};

Solved solve(const DomainSpec& s, int n, int k) {
    Solved r{s, generate_mesh(s, n, 2), {}};
    r.pairs = solve_eigenpairs(assemble(r.mesh, s), k, 1e-10);
    return r;
}

DomainSpec sine_acute(double eps) {
    DomainSpec s;
    s.epsilon = eps;
    s.gtilde = PerturbationFn::normalized({1.0}, 1.0);
    return s;
}

EigenPair zero_pair(const Mesh& m) {
    EigenPair p;
    p.lambda = 10.0;
    p.h = 1.0 / std::sqrt(10.0);
    p.coefficients = Eigen::VectorXd::Zero(m.interior_count);
    p.mode_index = 1;
    return p;
}

} // namespace

TEST(Traces, ZeroVectorGivesZeroData) {
    const auto s = sine_acute(0.05);
    const auto mesh = generate_mesh(s, 6, 2);
    const auto p = zero_pair(mesh);
    for (Side side : all_sides)
        for (const auto& t : neumann_trace(p, mesh, s, side)) EXPECT_EQ(t.h_dn, 0.0);
    const auto r = rellich_components(p, mesh, s);
    EXPECT_EQ(r.r0, 0.0);
    EXPECT_EQ(r.rx, 0.0);
    EXPECT_EQ(r.ry, 0.0);
    const auto ids = identity_residuals(p, mesh, s);
    EXPECT_EQ(ids[0].id, "dilation");
    EXPECT_DOUBLE_EQ(ids[0].residual, 2.0);
    const auto y = ydy_functional(p, mesh, s);
    EXPECT_EQ(y.boundary, 0.0);
    EXPECT_EQ(y.volume, 0.0);
}

TEST(Traces, MissingTagIsAnError) {
    const auto s = sine_acute(0.0);
    auto mesh = generate_mesh(s, 4, 2);
    std::erase_if(mesh.boundary_edges, [](const BoundaryEdge& e) { return e.side == Side::C; });
    EXPECT_THROW(neumann_trace(zero_pair(mesh), mesh, s, Side::C), TaggingError);
}

TEST(Traces, WeightsSumToSideLength) {
    const auto s = sine_acute(0.0);
    const auto mesh = generate_mesh(s, 8, 2);
    for (Side side : all_sides) {
        const auto t = neumann_trace(zero_pair(mesh), mesh, s, side);
        EXPECT_NEAR(side_integral(t, [](const TraceSample&) { return 1.0; }), side_length(s, side), 1e-13);
    }
}

TEST(Traces, ClosedFormTraceOnLeg) {
    // side B of the pi triangle is y = 0 with outward normal (0, -1)
    const auto s = testsupport::pi_triangle();
    const testsupport::SineMode mode{2, 1};
    std::vector<double> max_err, mean_err;
    for (int n : {16, 32}) {
        const auto sol = solve(s, n, 1);
        const auto& p = sol.pairs[0];
        const auto samples = neumann_trace(p, sol.mesh, s, Side::B);
        const double sign = samples[samples.size() / 3].h_dn * (-mode.gradient(samples[samples.size() / 3].point).y) >= 0 ? 1 : -1;
        double mx = 0, mean = 0, wsum = 0;
        for (const auto& t : samples) {
            const double exact = -p.h * mode.gradient(t.point).y;
            const double e = std::abs(sign * t.h_dn - exact);
            mx = std::max(mx, e);
            mean += t.weight * e;
            wsum += t.weight;
        }
        max_err.push_back(mx);
        mean_err.push_back(mean / wsum);
    }
    EXPECT_GT(max_err[0] / max_err[1], 1.7);
    EXPECT_GT(mean_err[0] / mean_err[1], 3.0);
}

TEST(Traces, PiTriangleSideMasses) {
    const auto s = testsupport::pi_triangle();
    // closed-form oracle for mode (2,1) on the leg y = 0: h^2 int (d_y u)^2 dx
    const testsupport::SineMode mode{2, 1};
    auto integrand = [&](double x) {
        const double d = mode.gradient(Vec2{x, 0.0}).y;
        return d * d / mode.lambda();
    };
    const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, pi, 15, 1e-14);
    EXPECT_NEAR(oracle, 2.0 / pi, 1e-12);

    const double leg = 2.0 / pi;
    const double hyp = 2.0 * std::sqrt(2.0) / pi;
    std::vector<double> worst;
    for (int n : {24, 48}) {
        const auto sol = solve(s, n, 4);
        double w = 0;
        for (const auto& p : sol.pairs) {
            w = std::max(w, std::abs(side_mass(p, sol.mesh, s, Side::A).value - leg) / leg);
            w = std::max(w, std::abs(side_mass(p, sol.mesh, s, Side::B).value - leg) / leg);
            w = std::max(w, std::abs(side_mass(p, sol.mesh, s, Side::C).value - hyp) / hyp);
        }
        worst.push_back(w);
    }
    EXPECT_LT(worst[1], 0.02);
    EXPECT_GE(std::log2(worst[0] / worst[1]), 1.5);
}

TEST(Traces, TangentialDerivativeOnStraightSidesIsZero) {
    // u_h vanishes identically along every straight boundary edge
    for (double eps : {0.0, 0.05}) {
        const auto s = sine_acute(eps);
        const auto sol = solve(s, 12, 2);
        for (Side side : all_sides) {
            if (side == Side::C && eps != 0.0) continue;
            for (const auto& t : neumann_trace(sol.pairs[1], sol.mesh, s, side)) EXPECT_NEAR(t.h_dt, 0.0, 1e-11);
        }
    }
}

TEST(Traces, TangentialDerivativeOnCurvedSideVanishesUnderRefinement) {
    // on C' the chord through the nodes and the exact curve differ in direction
    // by O(1/n) at the Gauss points, which bounds the rate at first order
    const auto s = sine_acute(0.05);
    std::vector<double> rms;
    for (int n : {12, 24, 48}) {
        const auto sol = solve(s, n, 2);
        const double acc = side_integral(neumann_trace(sol.pairs[1], sol.mesh, s, Side::C),
                                         [](const TraceSample& t) { return t.h_dt * t.h_dt; });
        rms.push_back(std::sqrt(acc));
    }
    EXPECT_GE(std::log2(rms[0] / rms[1]), 0.9);
    EXPECT_GE(std::log2(rms[1] / rms[2]), 0.9);
}

TEST(Rellich, LinearInMAndN) {
    const auto s = sine_acute(0.05);
    const auto sol = solve(s, 10, 2);
    const auto& p = sol.pairs[1];
    const auto bt = boundary_traces(p, sol.mesh, s);
    const auto r = rellich_components(bt, p, sol.mesh, s);
    for (double m : {-1.0, 0.0, 0.5, 2.0})
        for (double n : {-0.5, 0.0, 1.0}) {
            double direct = 0.0;
            for (Side side : all_sides)
                direct += side_integral(bt[side], [&](const TraceSample& t) {
                    return ((t.point.x + m) * t.h_grad.x + (t.point.y + n) * t.h_grad.y) * t.h_dn;
                });
            EXPECT_NEAR(r.at(m, n), direct, 1e-13);
        }
}

TEST(Rellich, ExactTriangleAndPerturbedDomain) {
    for (double eps : {0.0, 0.05}) {
        const auto s = sine_acute(eps);
        const auto sol = solve(s, 32, 5);
        for (const auto& p : sol.pairs) {
            const auto r = rellich_components(p, sol.mesh, s);
            EXPECT_NEAR(r.r0, 2.0, 0.1) << "eps=" << eps << " mode " << p.mode_index;
            EXPECT_NEAR(r.rx, 0.0, 0.1);
            EXPECT_NEAR(r.ry, 0.0, 0.05);
        }
    }
}

TEST(Rellich, ResidualShrinksUnderRefinement) {
    const auto s = sine_acute(0.05);
    std::vector<double> res;
    for (int n : {12, 24, 48}) {
        const auto sol = solve(s, n, 3);
        double worst = 0;
        for (const auto& p : sol.pairs) {
            const auto r = rellich_components(p, sol.mesh, s);
            worst = std::max(worst, std::abs(r.residual0()) + std::abs(r.residual_x()) + std::abs(r.residual_y()));
        }
        res.push_back(worst);
    }
    EXPECT_GE(std::log2(res[1] / res[2]), 1.0);
}

TEST(RellichExpected, RequiresPotential) {
    const auto s = sine_acute(0.0);
    const auto mesh = generate_mesh(s, 4, 2);
    EXPECT_THROW(rellich_expected(zero_pair(mesh), mesh, s), ConfigError);
}

TEST(RellichExpected, ZeroAndConstantPotentials) {
    DomainSpec s;
    s.wtilde = PotentialFn({{0, 0, 0.0}});
    s.epsilon = 0.3;
    auto sol = solve(s, 8, 2);
    for (const auto& p : sol.pairs) {
        const auto e = rellich_expected(p, sol.mesh, s);
        EXPECT_NEAR(e[0], 2.0, 1e-14);
        EXPECT_EQ(e[1], 0.0);
        EXPECT_EQ(e[2], 0.0);
    }
    s.wtilde = PotentialFn({{0, 0, 1.0}});
    s.epsilon = 0.1;
    sol = solve(s, 8, 2);
    for (const auto& p : sol.pairs) {
        const auto e = rellich_expected(p, sol.mesh, s);
        EXPECT_NEAR(e[0], 2.0 - 2.0 * 0.1, 1e-10);
        EXPECT_NEAR(e[1], 0.0, 1e-15);
    }
}

TEST(RellichExpected, LinearPotentialMatchesBoundary) {
    DomainSpec s;
    s.wtilde = PotentialFn({{1, 0, 1.0}}); // x / l with l = 1
    s.epsilon = 0.1;
    const auto sol = solve(s, 48, 3);
    for (const auto& p : sol.pairs) {
        const auto r = rellich_components(p, sol.mesh, s);
        EXPECT_NEAR(r.expected_x, -0.1, 1e-10); // -eps int u^2
        EXPECT_NEAR(r.r0, r.expected0, 0.04);
        EXPECT_NEAR(r.rx, r.expected_x, 0.02);
        EXPECT_NEAR(r.ry, r.expected_y, 0.02);
    }
}

TEST(Identities, ConvergeForAnyPerturbation) {
    for (double eps : {0.0, 0.1}) {
        const auto s = sine_acute(eps);
        std::vector<double> worst;
        for (int n : {12, 24, 48}) {
            const auto sol = solve(s, n, 3);
            double w = 0;
            for (const auto& p : sol.pairs)
                for (const auto& r : identity_residuals(p, sol.mesh, s)) w = std::max(w, r.relative());
            worst.push_back(w);
        }
        EXPECT_LT(worst[2], 0.02) << eps;
        EXPECT_GT(std::log2(worst[1] / worst[2]), 1.5) << eps;
    }
}

TEST(Identities, ObtuseOrientation) {
    auto s = sine_acute(0.05);
    s.orientation = Orientation::obtuse;
    const auto sol = solve(s, 48, 3);
    for (const auto& p : sol.pairs)
        for (const auto& r : identity_residuals(p, sol.mesh, s)) EXPECT_LT(r.relative(), 0.05) << r.id;
}

TEST(Identities, UnperturbedRatios) {
    const auto s = sine_acute(0.0);
    const auto sol = solve(s, 48, 3);
    const double a = 2.0, b = std::sqrt(2.0), c = std::sqrt(2.0);
    for (const auto& p : sol.pairs) {
        const double ia = side_mass(p, sol.mesh, s, Side::A).value;
        const double ib = side_mass(p, sol.mesh, s, Side::B).value;
        const double ic = side_mass(p, sol.mesh, s, Side::C).value;
        EXPECT_NEAR(ia * s.l, 2.0, 0.05);
        EXPECT_NEAR(ib / ia, b / a, 0.05);
        EXPECT_NEAR(ic / ib, c / b, 0.05);
    }
}

TEST(Ydy, BoundaryEqualsVolumeAndBounded) {
    const auto s = sine_acute(0.05);
    const auto sol = solve(s, 32, 5);
    for (const auto& p : sol.pairs) {
        const auto y = ydy_functional(p, sol.mesh, s);
        EXPECT_NEAR(y.boundary, y.volume, 0.03);
        EXPECT_LE(y.boundary, 2.0 + 0.03);
        EXPECT_LE(y.volume, 2.0 + 1e-12);
    }
}
