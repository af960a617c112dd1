#pragma once

/**
 * @file cases.hpp
 * @brief Manufactured Stokes solutions on the unit square. Each case carries
 *        the exact velocity, its Jacobian and the exact (zero-mean) pressure,
 *        which doubles as the gradient potential z of the body force
 *        f = -nu Lap(u) + grad p, since div u = 0 for every case.
 */

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include "stokesfem/geometry.hpp"

namespace stokesfem {

struct ManufacturedCase {
    std::string name;
    std::function<Vec2(const Vec2&)> velocity;
    std::function<Mat22(const Vec2&)> velocity_gradient;
    std::function<double(const Vec2&)> pressure;  ///< zero mean over the square
    std::function<Vec2(const Vec2&)> laplacian;   ///< of the velocity; needed by the
                                                  ///< H(div)-projected load only
    double nu = 1.0;                              ///< reference viscosity
    bool homogeneous_boundary = false;
};

/// Rigid rotation u = (-y, x) with cubic pressure p = x^3 + y^3 - 1/2 (f = grad p).
inline ManufacturedCase case_linear() {
    ManufacturedCase c;
    c.name = "linear";
    c.homogeneous_boundary = false;
    c.velocity = [](const Vec2& x) { return Vec2{-x.y, x.x}; };
    c.velocity_gradient = [](const Vec2&) {
        Mat22 g;
        g.xx = 0.0; g.xy = -1.0;
        g.yx = 1.0; g.yy = 0.0;
        return g;
    };
    c.pressure = [](const Vec2& x) { return x.x * x.x * x.x + x.y * x.y * x.y - 0.5; };
    c.laplacian = [](const Vec2&) { return Vec2{0.0, 0.0}; };
    return c;
}

/// Vortex vanishing on the whole boundary, with p = sin(2 pi x) sin(2 pi y).
inline ManufacturedCase case_sinusoidal() {
    using std::numbers::pi;
    ManufacturedCase c;
    c.name = "sinus";
    c.homogeneous_boundary = true;
    c.velocity = [](const Vec2& x) {
        return Vec2{(1.0 - std::cos(2.0 * pi * x.x)) * std::sin(2.0 * pi * x.y),
                    (std::cos(2.0 * pi * x.y) - 1.0) * std::sin(2.0 * pi * x.x)};
    };
    c.velocity_gradient = [](const Vec2& x) {
        const double cx = std::cos(2.0 * pi * x.x), sx = std::sin(2.0 * pi * x.x);
        const double cy = std::cos(2.0 * pi * x.y), sy = std::sin(2.0 * pi * x.y);
        Mat22 g;
        g.xx = 2.0 * pi * sx * sy;
        g.xy = 2.0 * pi * (1.0 - cx) * cy;
        g.yx = 2.0 * pi * (cy - 1.0) * cx;
        g.yy = -2.0 * pi * sy * sx;
        return g;
    };
    c.pressure = [](const Vec2& x) {
        return std::sin(2.0 * pi * x.x) * std::sin(2.0 * pi * x.y);
    };
    c.laplacian = [](const Vec2& x) {
        const double cx = std::cos(2.0 * pi * x.x), sx = std::sin(2.0 * pi * x.x);
        const double cy = std::cos(2.0 * pi * x.y), sy = std::sin(2.0 * pi * x.y);
        const double k = 4.0 * pi * pi;
        return Vec2{k * sy * (2.0 * cx - 1.0), -k * sx * (2.0 * cy - 1.0)};
    };
    return c;
}

/// Mean of the distance to the square's center over the unit square (exact).
inline double mean_center_distance() {
    return (std::sqrt(2.0) + std::log(1.0 + std::sqrt(2.0))) / 6.0;
}

/**
 * Azimuthal vortex u = rho^alpha e_theta around (0.5, 0.5) with alpha = 0.45,
 * so u is in H^{1+alpha-eps} only, and p = rho minus its mean. Divergence-free
 * away from the center for any radial profile.
 */
inline ManufacturedCase case_low_regularity() {
    constexpr double alpha = 0.45;
    const Vec2 center{0.5, 0.5};
    ManufacturedCase c;
    c.name = "lowreg";
    c.homogeneous_boundary = false;
    c.velocity = [center](const Vec2& x) {
        const Vec2 d = x - center;
        const double r = d.norm();
        if (r < 1e-300) return Vec2{0.0, 0.0};
        // rho^alpha e_theta = rho^(alpha-1) (-y', x')
        const double s = std::pow(r, alpha - 1.0);
        return Vec2{-d.y * s, d.x * s};
    };
    c.velocity_gradient = [center](const Vec2& x) {
        const Vec2 d = x - center;
        const double r = d.norm();
        Mat22 g;
        if (r < 1e-300) return g;
        const double s1 = std::pow(r, alpha - 1.0);
        const double s3 = (alpha - 1.0) * std::pow(r, alpha - 3.0);
        g.xx = -d.y * d.x * s3;
        g.xy = -s1 - d.y * d.y * s3;
        g.yx = s1 + d.x * d.x * s3;
        g.yy = d.x * d.y * s3;
        return g;
    };
    c.pressure = [center](const Vec2& x) {
        return (x - center).norm() - mean_center_distance();
    };
    // Lap(rho^a e_theta) = (a^2 - 1) rho^(a-2) e_theta; integrable against
    // bounded fields even though it is not square integrable.
    c.laplacian = [center](const Vec2& x) {
        const Vec2 d = x - center;
        const double r = d.norm();
        if (r < 1e-300) return Vec2{0.0, 0.0};
        const double s = (alpha * alpha - 1.0) * std::pow(r, alpha - 3.0);
        return Vec2{-d.y * s, d.x * s};
    };
    return c;
}

inline ManufacturedCase make_case(const std::string& name) {
    if (name == "linear") return case_linear();
    if (name == "sinus") return case_sinusoidal();
    if (name == "lowreg") return case_low_regularity();
    throw std::invalid_argument("unknown case '" + name + "' (expected linear|sinus|lowreg)");
}

/// Scale data (u, p) -> (c u, c p); by linearity the discrete solutions scale
/// the same way.
inline ManufacturedCase make_scaled_case(const ManufacturedCase& base, double factor) {
    ManufacturedCase c = base;
    c.name = base.name + "-scaled";
    c.velocity = [f = base.velocity, factor](const Vec2& x) { return f(x) * factor; };
    c.velocity_gradient = [f = base.velocity_gradient, factor](const Vec2& x) {
        Mat22 g = f(x);
        g.xx *= factor; g.xy *= factor; g.yx *= factor; g.yy *= factor;
        return g;
    };
    c.pressure = [f = base.pressure, factor](const Vec2& x) { return f(x) * factor; };
    if (base.laplacian)
        c.laplacian = [f = base.laplacian, factor](const Vec2& x) { return f(x) * factor; };
    return c;
}

} // namespace stokesfem
