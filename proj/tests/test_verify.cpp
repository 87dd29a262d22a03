#include <atomic>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "massmeter/verify.hpp"
#include "support.hpp"

using namespace massmeter;
using testsupport::pi;

namespace {

DomainSpec sine_acute(double eps = 0.0) {
    DomainSpec s;
    s.epsilon = eps;
    s.gtilde = PerturbationFn::normalized({1.0}, 1.0);
    return s;
}

SolverParams params(int n, int k) {
    SolverParams p;
    p.n = n;
    p.k = k;
    return p;
}

} // namespace

TEST(Numerics, FitLineRecoversLine) {
    const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    const auto f = fit_line(x, y);
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.intercept, 1.0, 1e-14);
    EXPECT_THROW(fit_line(std::vector<double>{1.0}, std::vector<double>{1.0}), PreconditionError);
}

TEST(Numerics, OrdersOfAPowerLaw) {
    const std::vector<int> n{10, 20, 40, 80};
    std::vector<double> e;
    for (int k : n) e.push_back(7.0 * std::pow(k, -3.0));
    for (double p : successive_orders(n, e)) EXPECT_NEAR(p, 3.0, 1e-12);
    EXPECT_NEAR(fitted_order(n, e), 3.0, 1e-12);
}

TEST(Numerics, RichardsonRecoversLimit) {
    const std::vector<int> n{8, 16, 32};
    std::vector<double> q;
    for (int k : n) q.push_back(3.0 + 5.0 / (k * k));
    const auto ex = richardson(n, q, 4.0);
    EXPECT_TRUE(ex.order_estimated);
    EXPECT_NEAR(ex.order, 2.0, 1e-9);
    EXPECT_NEAR(ex.limit, 3.0, 1e-12);
    // two levels use the nominal order
    const auto two = richardson(std::vector<int>{16, 32}, std::vector<double>{q[1], q[2]}, 2.0);
    EXPECT_FALSE(two.order_estimated);
    EXPECT_NEAR(two.limit, 3.0, 1e-12);
}

TEST(ExactEigenvalues, RightIsoscelesFamilies) {
    const auto e = exact_eigenvalues(testsupport::pi_triangle(), 6);
    ASSERT_TRUE(e);
    const double expect[] = {5, 10, 13, 17, 20, 25};
    for (int i = 0; i < 6; ++i) EXPECT_NEAR((*e)[i], expect[i], 1e-12);
    const auto u = exact_eigenvalues(DomainSpec{}, 2);
    ASSERT_TRUE(u);
    EXPECT_NEAR((*u)[0], 5.0 * pi * pi / 2.0, 1e-12);
    EXPECT_FALSE(exact_eigenvalues(sine_acute(0.05), 2));
    DomainSpec scalene;
    scalene.a1 = 0.5;
    EXPECT_FALSE(exact_eigenvalues(scalene, 2));
}

TEST(Equidistribution, UnperturbedAcute) {
    const auto rep = equidistribution_report(sine_acute(), params(48, 5));
    ASSERT_EQ(rep.modes.size(), 5u);
    EXPECT_NEAR(rep.area, 1.0, 1e-14);
    EXPECT_LT(rep.max_relative_deviation(), 0.03);
    EXPECT_LT(rep.max_identity_relative(), 0.03);
    for (const auto& m : rep.modes) EXPECT_NEAR(m.sides[0].predicted, 2.0, 1e-14);
}

TEST(Equidistribution, ObtusePredictionUsesA2) {
    DomainSpec s;
    s.orientation = Orientation::obtuse;
    const auto rep = equidistribution_report(s, params(48, 3));
    EXPECT_NEAR(rep.area, 0.5, 1e-14);
    for (const auto& m : rep.modes) {
        EXPECT_NEAR(m.sides[0].predicted, 2.0, 1e-14);
        EXPECT_NEAR(m.sides[0].value, 2.0, 0.1);
    }
}

TEST(Equidistribution, PiTriangle) {
    const auto rep = equidistribution_report(testsupport::pi_triangle(), params(32, 3));
    for (const auto& m : rep.modes) {
        EXPECT_NEAR(m.sides[0].value, 2.0 / pi, 0.02);
        EXPECT_NEAR(m.sides[2].value, 2.0 * std::sqrt(2.0) / pi, 0.03);
    }
}

TEST(Equidistribution, DeterministicAndThreadIndependent) {
    auto p = params(16, 4);
    const auto a = equidistribution_report(sine_acute(0.05), p);
    p.threads = 3;
    const auto b = equidistribution_report(sine_acute(0.05), p);
    for (std::size_t i = 0; i < a.modes.size(); ++i) {
        EXPECT_EQ(a.modes[i].lambda, b.modes[i].lambda);
        for (int s = 0; s < 3; ++s) EXPECT_EQ(a.modes[i].sides[s].value, b.modes[i].sides[s].value);
        EXPECT_EQ(a.modes[i].rellich.r0, b.modes[i].rellich.r0);
    }
}

TEST(Equidistribution, MonotoneRefinement) {
    std::vector<double> dev;
    for (int n : {12, 24, 48}) dev.push_back(equidistribution_report(sine_acute(), params(n, 5)).max_relative_deviation());
    EXPECT_LE(dev[1], dev[0]);
    EXPECT_LE(dev[2], dev[1]);
}

TEST(Sweep, ShapeAndPreconditions) {
    const std::vector<double> grid{0.025, 0.05, 0.1};
    const auto sw = epsilon_sweep(sine_acute(), grid, params(12, 3));
    EXPECT_EQ(sw.rows.size(), 3u * 3u * 3u);
    EXPECT_EQ(sw.levels.size(), 3u);
    for (const auto& r : sw.rows) EXPECT_GE(r.deviation, 0.0);
    EXPECT_THROW(epsilon_sweep(sine_acute(), std::vector<double>{0.1, 0.05}, params(12, 3)), PreconditionError);
    EXPECT_THROW(epsilon_sweep(sine_acute(), std::vector<double>{}, params(12, 3)), PreconditionError);
}

TEST(Sweep, ZeroPerturbationIsFloorLimited) {
    DomainSpec flat; // g~ = 0: every epsilon gives the same triangle
    const std::vector<double> grid{0.0125, 0.025, 0.05, 0.1};
    const auto sw = epsilon_sweep(flat, grid, params(16, 3));
    EXPECT_FALSE(sw.fitted);
    EXPECT_EQ(sw.status(), "floor-limited");
    for (const auto& l : sw.levels) EXPECT_FALSE(l.used);
}

TEST(Sweep, SinePerturbationScalesLinearly) {
    const std::vector<double> grid{0.025, 0.05, 0.1, 0.2};
    const auto sw = epsilon_sweep(sine_acute(), grid, params(48, 5));
    ASSERT_TRUE(sw.fitted) << "floor " << sw.floor;
    EXPECT_GE(sw.exponent, 0.8);
    EXPECT_LE(sw.exponent, 1.5);
    // smallest deviations below 3x floor never enter the fit
    for (const auto& l : sw.levels)
        if (l.max_deviation <= 3 * sw.floor) EXPECT_FALSE(l.used);
}

TEST(CMassBound, Preconditions) {
    SweepResult empty;
    empty.modes = 10;
    EXPECT_THROW(c_mass_bound_check(empty), PreconditionError);
    const auto sw = epsilon_sweep(sine_acute(), std::vector<double>{0.05}, params(12, 3));
    EXPECT_THROW(c_mass_bound_check(sw), PreconditionError);
}

TEST(CMassBound, UnperturbedLevelEqualsPrediction) {
    const auto sw = epsilon_sweep(sine_acute(), std::vector<double>{0.0}, params(48, 5));
    const auto r = c_mass_bound_check(sw);
    EXPECT_NEAR(r.gamma_hat, std::sqrt(2.0), 0.02 * std::sqrt(2.0));
    EXPECT_TRUE(r.stable);
}

TEST(CMassBound, BoundedAcrossSweep) {
    const std::vector<double> grid{0.025, 0.05, 0.1, 0.2};
    const auto sw = epsilon_sweep(sine_acute(), grid, params(24, 6));
    const auto r = c_mass_bound_check(sw);
    double pred = 0;
    for (const auto& l : sw.levels) pred = std::max(pred, l.c_prediction);
    EXPECT_LE(r.gamma_hat, 2.0 * pred + 1.0);
    EXPECT_TRUE(r.stable);
}

TEST(Convergence, RequiresThreeIncreasingLevels) {
    EXPECT_THROW(convergence_study(sine_acute(), std::vector<int>{8, 16}, params(8, 2)), ConfigError);
    EXPECT_THROW(convergence_study(sine_acute(), std::vector<int>{8, 16, 12}, params(8, 2)), ConfigError);
}

TEST(Convergence, PiTriangleOrders) {
    const auto c = convergence_study(testsupport::pi_triangle(), std::vector<int>{8, 16, 32}, params(8, 3));
    EXPECT_TRUE(c.exact_eigenvalues);
    EXPECT_NEAR(c.quantity("eigenvalue_error").order, 4.0, 0.5);
    EXPECT_GE(c.quantity("side_mass_deviation").order, 1.5);
    EXPECT_EQ(c.quantities.size(), 4u);
    for (const auto& q : c.quantities) EXPECT_TRUE(std::isfinite(q.order)) << q.name;
    EXPECT_NEAR(c.extrapolated_eigenvalues[0], 5.0, 1e-4);
    EXPECT_THROW((void)c.quantity("nope"), PreconditionError);
}

TEST(Convergence, ExtrapolatedSideMassHitsExactValue) {
    const auto c = convergence_study(sine_acute(), std::vector<int>{16, 32, 64}, params(16, 3));
    for (const auto& m : c.extrapolated_masses) EXPECT_NEAR(m[0], 2.0, 1e-3);
}

TEST(ParallelFor, VisitsEveryIndexOnceAndRethrows) {
    std::vector<std::atomic<int>> hits(50);
    parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
    EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw Error("boom"); }), Error);
}
