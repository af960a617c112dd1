#pragma once

#include <array>
#include <cmath>

namespace stokesfem {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double squared_norm() const { return x * x + y * y; }
    /// Tangent rotated by -90 degrees; used as the edge normal convention.
    Vec2 perp() const { return {y, -x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Jacobian of a vector field: entry(i,j) = d u_i / d x_j.
struct Mat22 {
    double xx = 0.0, xy = 0.0;
    double yx = 0.0, yy = 0.0;

    double trace() const { return xx + yy; }
    /// Frobenius inner product, i.e. the grad-grad contraction.
    double contract(const Mat22& o) const {
        return xx * o.xx + xy * o.xy + yx * o.yx + yy * o.yy;
    }
    double squared_norm() const { return contract(*this); }
    /// Matrix-vector product, gives the directional derivative of the field.
    Vec2 apply(const Vec2& v) const { return {xx * v.x + xy * v.y, yx * v.x + yy * v.y}; }
};

inline double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

} // namespace stokesfem
