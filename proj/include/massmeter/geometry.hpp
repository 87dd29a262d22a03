#pragma once
/// Continuous description of the perturbed triangle D_eps.
///
/// Coordinates: the corner between B and C' sits at the origin and side A is
/// the vertical segment x = l. In the acute orientation B runs down to
/// (l, -a1) and the straight side C runs up to (l, a2); in the obtuse
/// orientation both B and C lie above the x axis, ending at (l, a1) and
/// (l, a1 + a2). The perturbed side C' is the graph y = f(x) = s_C x + eps*g~(x).

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "massmeter/error.hpp"
#include "massmeter/quadrature.hpp"

namespace massmeter {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Side tags. `C` always denotes the (possibly perturbed) side C'.
enum class Side { A = 0, B = 1, C = 2 };
inline constexpr std::array<Side, 3> all_sides{Side::A, Side::B, Side::C};

inline std::string side_name(Side s) {
    switch (s) {
    case Side::A: return "A";
    case Side::B: return "B";
    case Side::C: return "C'";
    }
    return "?";
}

enum class Orientation { acute, obtuse };

inline std::string orientation_name(Orientation o) { return o == Orientation::acute ? "acute" : "obtuse"; }

/// g~(x) = scale * sum_k b_k sin(k pi x / l). Vanishes at both ends by construction.
class PerturbationFn {
public:
    PerturbationFn() = default;
    PerturbationFn(std::vector<double> sine_coefficients, double length, double scale = 1.0)
        : coeffs_(std::move(sine_coefficients)), length_(length), scale_(scale) {
        if (!(length_ > 0.0)) throw ConfigError("gtilde: length must be positive");
    }

    /// Rescales the series so that max(sup|g~|, sup|g~'|) = 1 on a uniform grid.
    static PerturbationFn normalized(std::vector<double> sine_coefficients, double length,
                                     int grid_points = 20001) {
        PerturbationFn raw(std::move(sine_coefficients), length, 1.0);
        const double peak = std::max(raw.sup_value(grid_points), raw.sup_derivative(grid_points));
        if (peak == 0.0) return raw;
        raw.scale_ = 1.0 / peak;
        return raw;
    }

    [[nodiscard]] double value(double x) const {
        double s = 0.0;
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            s += coeffs_[k] * std::sin(static_cast<double>(k + 1) * std::numbers::pi * x / length_);
        return scale_ * s;
    }

    [[nodiscard]] double derivative(double x) const {
        double s = 0.0;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            const double w = static_cast<double>(k + 1) * std::numbers::pi / length_;
            s += coeffs_[k] * w * std::cos(w * x);
        }
        return scale_ * s;
    }

    [[nodiscard]] double sup_value(int grid_points = 10001) const {
        double m = 0.0;
        for (int i = 0; i < grid_points; ++i)
            m = std::max(m, std::abs(value(length_ * i / (grid_points - 1))));
        return m;
    }

    [[nodiscard]] double sup_derivative(int grid_points = 10001) const {
        double m = 0.0;
        for (int i = 0; i < grid_points; ++i)
            m = std::max(m, std::abs(derivative(length_ * i / (grid_points - 1))));
        return m;
    }

    /// |g~| <= 1 and |g~'| <= 1 on a grid of `grid_points` samples.
    [[nodiscard]] bool within_bounds(int grid_points = 10001, double slack = 1e-12) const {
        return sup_value(grid_points) <= 1.0 + slack && sup_derivative(grid_points) <= 1.0 + slack;
    }

    [[nodiscard]] bool is_zero() const {
        if (scale_ == 0.0) return true;
        for (double b : coeffs_)
            if (b != 0.0) return false;
        return true;
    }

    [[nodiscard]] const std::vector<double>& coefficients() const { return coeffs_; }
    [[nodiscard]] double length() const { return length_; }
    [[nodiscard]] double scale() const { return scale_; }

private:
    std::vector<double> coeffs_;
    double length_ = 1.0;
    double scale_ = 1.0;
};

/// One monomial coef * x^px * y^py of a bivariate polynomial.
struct Monomial {
    int px = 0;
    int py = 0;
    double coef = 0.0;
};

/// w~(x, y) as a scaled bivariate polynomial.
class PotentialFn {
public:
    PotentialFn() = default;
    explicit PotentialFn(std::vector<Monomial> terms, double scale = 1.0)
        : terms_(std::move(terms)), scale_(scale) {
        for (const auto& t : terms_)
            if (t.px < 0 || t.py < 0) throw ConfigError("wtilde: negative monomial exponent");
    }

    /// Rescales so that max(sup|w~|, sup|grad w~|) = 1 over a lattice on `triangle`.
    static PotentialFn normalized(std::vector<Monomial> terms, const std::array<Vec2, 3>& triangle,
                                  int lattice = 200) {
        PotentialFn raw(std::move(terms), 1.0);
        const auto [sv, sg] = raw.sup_on(triangle, lattice);
        const double peak = std::max(sv, sg);
        if (peak > 0.0) raw.scale_ = 1.0 / peak;
        return raw;
    }

    [[nodiscard]] double value(double x, double y) const {
        double s = 0.0;
        for (const auto& t : terms_) s += t.coef * std::pow(x, t.px) * std::pow(y, t.py);
        return scale_ * s;
    }

    [[nodiscard]] Vec2 gradient(double x, double y) const {
        Vec2 g;
        for (const auto& t : terms_) {
            if (t.px > 0) g.x += t.coef * t.px * std::pow(x, t.px - 1) * std::pow(y, t.py);
            if (t.py > 0) g.y += t.coef * t.py * std::pow(x, t.px) * std::pow(y, t.py - 1);
        }
        return scale_ * g;
    }

    /// (sup|w~|, sup|grad w~|) over the barycentric lattice of the triangle.
    [[nodiscard]] std::pair<double, double> sup_on(const std::array<Vec2, 3>& tri, int lattice = 200) const {
        double sv = 0.0;
        double sg = 0.0;
        for (int i = 0; i <= lattice; ++i) {
            for (int j = 0; i + j <= lattice; ++j) {
                const double s = static_cast<double>(i) / lattice;
                const double t = static_cast<double>(j) / lattice;
                const Vec2 p = tri[0] + s * (tri[1] - tri[0]) + t * (tri[2] - tri[0]);
                sv = std::max(sv, std::abs(value(p.x, p.y)));
                sg = std::max(sg, norm(gradient(p.x, p.y)));
            }
        }
        return {sv, sg};
    }

    [[nodiscard]] bool within_bounds(const std::array<Vec2, 3>& tri, int lattice = 200,
                                     double slack = 1e-12) const {
        const auto [sv, sg] = sup_on(tri, lattice);
        return sv <= 1.0 + slack && sg <= 1.0 + slack;
    }

    [[nodiscard]] const std::vector<Monomial>& terms() const { return terms_; }
    [[nodiscard]] double scale() const { return scale_; }

private:
    std::vector<Monomial> terms_;
    double scale_ = 1.0;
};

struct DomainSpec {
    double l = 1.0;
    double a1 = 1.0;
    double a2 = 1.0;
    Orientation orientation = Orientation::acute;
    double epsilon = 0.0;
    PerturbationFn gtilde;
    std::optional<PotentialFn> wtilde;

    /// Slope of side B as a graph over [0, l].
    [[nodiscard]] double slope_b() const { return orientation == Orientation::acute ? -a1 / l : a1 / l; }
    /// Slope of the unperturbed side C.
    [[nodiscard]] double slope_c() const { return orientation == Orientation::acute ? a2 / l : (a1 + a2) / l; }
    /// Difference of the two slopes; eps must stay below it for the domain to be simple.
    [[nodiscard]] double slope_gap() const { return slope_c() - slope_b(); }

    [[nodiscard]] bool perturbed() const { return epsilon != 0.0 && !gtilde.is_zero(); }
    [[nodiscard]] bool has_potential() const { return wtilde.has_value(); }

    [[nodiscard]] double g(double x) const { return gtilde.is_zero() ? 0.0 : epsilon * gtilde.value(x); }
    [[nodiscard]] double g_prime(double x) const { return gtilde.is_zero() ? 0.0 : epsilon * gtilde.derivative(x); }
    [[nodiscard]] double f(double x) const { return slope_c() * x + g(x); }
    [[nodiscard]] double f_prime(double x) const { return slope_c() + g_prime(x); }
    [[nodiscard]] double y_b(double x) const { return slope_b() * x; }

    /// w_eps(x, y) = eps * w~(x, y); zero without a potential.
    [[nodiscard]] double w_eps(double x, double y) const { return wtilde ? epsilon * wtilde->value(x, y) : 0.0; }
    [[nodiscard]] Vec2 grad_w_eps(double x, double y) const {
        return wtilde ? epsilon * wtilde->gradient(x, y) : Vec2{};
    }

    /// Corners of the straight triangle T: origin, end of B, end of C.
    [[nodiscard]] std::array<Vec2, 3> corners() const {
        return {Vec2{0.0, 0.0}, Vec2{l, y_b(l)}, Vec2{l, slope_c() * l}};
    }

    /// y-range of side A.
    [[nodiscard]] std::pair<double, double> a_range() const { return {y_b(l), slope_c() * l}; }
};

/// Throws ConfigError (or RangeError) unless the spec describes a simple domain.
inline void validate(const DomainSpec& s) {
    if (!(s.l > 0.0)) throw ConfigError("domain.l must be positive");
    if (!(s.a1 >= 0.0)) throw ConfigError("domain.a1 must be non-negative");
    if (!(s.a2 > 0.0)) throw ConfigError("domain.a2 must be positive");
    if (!(s.epsilon >= 0.0)) throw ConfigError("domain.epsilon must be non-negative");
    if (!s.gtilde.is_zero() && std::abs(s.gtilde.length() - s.l) > 1e-14 * s.l)
        throw ConfigError("gtilde length does not match domain.l");
    if (s.has_potential() && s.perturbed())
        throw ConfigError("potential requires unperturbed triangle: gtilde must vanish when wtilde is set");
    if (s.perturbed()) {
        if (!(s.epsilon < s.slope_gap())) throw RangeError("epsilon exceeds slope gap");
        // A raw (unnormalized) series can still cross B; check on a grid.
        constexpr int samples = 4001;
        for (int i = 1; i < samples; ++i) {
            const double x = s.l * i / (samples - 1);
            if (!(s.f(x) > s.y_b(x))) throw RangeError("epsilon exceeds slope gap: C' meets B");
        }
    }
}

/// Point on a side. For B and C' the parameter is x in [0, l]; for A it is y.
inline Vec2 side_point(const DomainSpec& s, Side side, double t) {
    constexpr double slack = 1e-14;
    if (side == Side::A) {
        const auto [lo, hi] = s.a_range();
        if (t < lo - slack * (1 + std::abs(lo)) || t > hi + slack * (1 + std::abs(hi)))
            throw RangeError("side_point: y outside side A");
        return {s.l, t};
    }
    if (t < -slack * s.l || t > s.l * (1 + slack)) throw RangeError("side_point: x outside [0, l]");
    if (side == Side::B) return {t, s.y_b(t)};
    return {t, s.f(t)};
}

/// dy/dx along B or C'. Side A is vertical and has no slope.
inline double side_slope(const DomainSpec& s, Side side, double x) {
    if (side == Side::A) throw NotAGraphError("side A is vertical; it is not a graph over x");
    if (x < 0.0 || x > s.l * (1 + 1e-14)) throw RangeError("side_slope: x outside [0, l]");
    return side == Side::B ? s.slope_b() : s.f_prime(x);
}

/// Unit tangent, oriented left-to-right for B and C', upward for A.
inline Vec2 unit_tangent(const DomainSpec& s, Side side, double x) {
    if (side == Side::A) return {0.0, 1.0};
    const double m = side_slope(s, side, x);
    const double gamma = std::sqrt(1.0 + m * m);
    return {1.0 / gamma, m / gamma};
}

inline double side_b_length(const DomainSpec& s) { return std::hypot(s.l, s.a1); }

inline Vec2 outward_normal(const DomainSpec& s, Side side, double x) {
    switch (side) {
    case Side::A: return {1.0, 0.0};
    case Side::B: {
        const double b = side_b_length(s);
        return s.orientation == Orientation::acute ? Vec2{-s.a1 / b, -s.l / b} : Vec2{s.a1 / b, -s.l / b};
    }
    case Side::C: {
        if (x < 0.0 || x > s.l * (1 + 1e-14)) throw RangeError("outward_normal: x outside [0, l]");
        const double fp = s.f_prime(x);
        const double gamma = std::sqrt(1.0 + fp * fp);
        return {-fp / gamma, 1.0 / gamma};
    }
    }
    return {};
}

/// dS/dx for B and C', dS/dy (= 1) for A.
inline double arclength_element(const DomainSpec& s, Side side, double x) {
    switch (side) {
    case Side::A: return 1.0;
    case Side::B: return side_b_length(s) / s.l;
    case Side::C: {
        const double fp = s.f_prime(x);
        return std::sqrt(1.0 + fp * fp);
    }
    }
    return 1.0;
}

inline double side_length(const DomainSpec& s, Side side, double rel_tol = 1e-12) {
    switch (side) {
    case Side::A: return s.orientation == Orientation::acute ? s.a1 + s.a2 : s.a2;
    case Side::B: return side_b_length(s);
    case Side::C:
        return quad::integrate([&](double x) { return arclength_element(s, Side::C, x); }, 0.0, s.l, rel_tol);
    }
    return 0.0;
}

/// Length of the straight side C before perturbation.
inline double straight_c_length(const DomainSpec& s) { return std::hypot(s.l, s.slope_c() * s.l); }

inline double triangle_area(const DomainSpec& s) {
    return s.orientation == Orientation::acute ? 0.5 * (s.a1 + s.a2) * s.l : 0.5 * s.a2 * s.l;
}

/// Area(T) + integral of g over [0, l].
inline double domain_area(const DomainSpec& s, double rel_tol = 1e-12) {
    double area = triangle_area(s);
    if (s.perturbed()) area += quad::integrate([&](double x) { return s.g(x); }, 0.0, s.l, rel_tol);
    return area;
}

} // namespace massmeter
