#pragma once
// Shared fixtures: the pi right triangle and its closed-form eigenfunctions.

#include <cmath>
#include <numbers>
#include <optional>

#include "massmeter/fem.hpp"
#include "massmeter/geometry.hpp"
#include "massmeter/mesh.hpp"

namespace testsupport {

using massmeter::Vec2;
inline constexpr double pi = std::numbers::pi;

/// (0,0), (pi,0), (pi,pi): l = pi, a1 = 0, a2 = pi.
inline massmeter::DomainSpec pi_triangle() {
    massmeter::DomainSpec s;
    s.l = pi;
    s.a1 = 0.0;
    s.a2 = pi;
    return s;
}

/// L2-normalized antisymmetric mode (p, q), p > q >= 1, on the pi triangle:
/// u = (2/pi) (sin px sin qy - sin qx sin py).
struct SineMode {
    int p = 2;
    int q = 1;
    [[nodiscard]] double lambda() const { return p * p + q * q; }
    [[nodiscard]] double value(Vec2 x) const {
        return 2.0 / pi * (std::sin(p * x.x) * std::sin(q * x.y) - std::sin(q * x.x) * std::sin(p * x.y));
    }
    [[nodiscard]] Vec2 gradient(Vec2 x) const {
        return {2.0 / pi * (p * std::cos(p * x.x) * std::sin(q * x.y) - q * std::cos(q * x.x) * std::sin(p * x.y)),
                2.0 / pi * (q * std::sin(p * x.x) * std::cos(q * x.y) - p * std::sin(q * x.x) * std::cos(p * x.y))};
    }
};

/// Element containing p and its barycentric coordinates.
inline std::optional<std::pair<std::size_t, std::array<double, 3>>> locate(const massmeter::Mesh& m, Vec2 p) {
    for (std::size_t e = 0; e < m.elements.size(); ++e) {
        const massmeter::ElementGeometry geo(m.corners(e));
        const auto b = geo.barycentric(p);
        if (b[0] >= -1e-12 && b[1] >= -1e-12 && b[2] >= -1e-12) return std::make_pair(e, b);
    }
    return std::nullopt;
}

} // namespace testsupport
