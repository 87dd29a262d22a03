#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace massmeter::quad {

/// Gauss–Legendre rule mapped to [0, 1]; weights sum to 1.
struct LineRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

/// Legendre P_n(x) and its derivative by the three-term recurrence.
inline std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

} // namespace detail

inline LineRule gauss_legendre(int npoints) {
    if (npoints < 1) throw std::invalid_argument("gauss_legendre: npoints must be >= 1");
    LineRule rule;
    rule.nodes.resize(static_cast<std::size_t>(npoints));
    rule.weights.resize(static_cast<std::size_t>(npoints));
    if (npoints == 1) {
        rule.nodes[0] = 0.5;
        rule.weights[0] = 1.0;
        return rule;
    }
    for (int i = 0; i < (npoints + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (npoints + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = detail::legendre(npoints, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double dp = detail::legendre(npoints, x).second;
        const double w = 1.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(npoints - 1 - i);
        rule.nodes[hi] = 0.5 * (1.0 + x);
        rule.nodes[lo] = 0.5 * (1.0 - x);
        rule.weights[hi] = w;
        rule.weights[lo] = w;
    }
    return rule;
}

namespace detail {

template <class F>
double gl_panel(const F& f, double a, double b, const LineRule& rule) {
    double sum = 0.0;
    const double len = b - a;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
        sum += rule.weights[q] * f(a + len * rule.nodes[q]);
    return sum * len;
}

template <class F>
double adaptive_step(const F& f, double a, double b, double whole, double abs_tol,
                     const LineRule& rule, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = gl_panel(f, a, mid, rule);
    const double right = gl_panel(f, mid, b, rule);
    const double refined = left + right;
    if (depth <= 0 || std::abs(refined - whole) <= abs_tol) return refined;
    return adaptive_step(f, a, mid, left, 0.5 * abs_tol, rule, depth - 1) +
           adaptive_step(f, mid, b, right, 0.5 * abs_tol, rule, depth - 1);
}

} // namespace detail

/// Adaptive Gauss–Legendre integration of f over [a, b] to relative tolerance
/// `rel_tol`. Panels are bisected until a 10-point rule agrees with its two
/// halves; the absolute target is fixed from a first coarse pass.
template <class F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-12) {
    if (a == b) return 0.0;
    static const LineRule rule = gauss_legendre(10);
    // Start from 8 panels so that oscillatory integrands are seen before the
    // first comparison.
    constexpr int initial_panels = 8;
    double coarse_abs = 0.0;
    std::array<double, initial_panels> panel{};
    const double width = (b - a) / initial_panels;
    for (int i = 0; i < initial_panels; ++i) {
        panel[static_cast<std::size_t>(i)] = detail::gl_panel(f, a + i * width, a + (i + 1) * width, rule);
        coarse_abs += std::abs(panel[static_cast<std::size_t>(i)]);
    }
    const double abs_tol = std::max(rel_tol * coarse_abs, 1e-300);
    double total = 0.0;
    for (int i = 0; i < initial_panels; ++i)
        total += detail::adaptive_step(f, a + i * width, a + (i + 1) * width,
                                       panel[static_cast<std::size_t>(i)],
                                       abs_tol / initial_panels, rule, 40);
    return total;
}

/// Symmetric quadrature rule on the reference triangle {(s,t): s,t >= 0, s+t <= 1},
/// stored as barycentric triples; weights sum to 1 (multiply by element area).
struct TriangleRule {
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
    int degree = 0;
};

namespace detail {

inline void add_orbit3(TriangleRule& rule, double a, double w) {
    const double b = 1.0 - 2.0 * a;
    rule.points.push_back({b, a, a});
    rule.points.push_back({a, b, a});
    rule.points.push_back({a, a, b});
    for (int i = 0; i < 3; ++i) rule.weights.push_back(w);
}

inline void add_orbit6(TriangleRule& rule, double a, double b, double w) {
    const double c = 1.0 - a - b;
    rule.points.push_back({a, b, c});
    rule.points.push_back({a, c, b});
    rule.points.push_back({b, a, c});
    rule.points.push_back({b, c, a});
    rule.points.push_back({c, a, b});
    rule.points.push_back({c, b, a});
    for (int i = 0; i < 6; ++i) rule.weights.push_back(w);
}

} // namespace detail

/// Dunavant rules. Degree 4 (6 points) and degree 6 (12 points) are provided;
/// a request for a lower degree returns the smallest rule that covers it.
inline const TriangleRule& triangle_rule(int degree) {
    static const TriangleRule deg4 = [] {
        TriangleRule r;
        r.degree = 4;
        detail::add_orbit3(r, 0.445948490915965, 0.223381589678011);
        detail::add_orbit3(r, 0.091576213509771, 0.109951743655322);
        return r;
    }();
    static const TriangleRule deg6 = [] {
        TriangleRule r;
        r.degree = 6;
        detail::add_orbit3(r, 0.249286745170910, 0.116786275726379);
        detail::add_orbit3(r, 0.063089014491502, 0.050844906370207);
        detail::add_orbit6(r, 0.053145049844817, 0.310352451033784, 0.082851075618374);
        return r;
    }();
    if (degree <= 4) return deg4;
    if (degree <= 6) return deg6;
    throw std::invalid_argument("triangle_rule: degree > 6 not available");
}

} // namespace massmeter::quad
