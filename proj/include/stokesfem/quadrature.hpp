#pragma once

/**
 * @file quadrature.hpp
 * @brief Positive-weight quadrature on the reference triangle and on edges.
 */

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "stokesfem/geometry.hpp"

namespace stokesfem {

/// Barycentric points and weights on the reference triangle; weights sum to 1/2.
struct TriangleQuadrature {
    int exactness_degree = 0;
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }
};

/**
 * Rule exact for polynomials up to `degree`, degree in {1..5}. All weights are
 * positive and all points interior. Degree 3 is served by the 6-point degree-4
 * rule (the classical 4-point degree-3 rule has a negative centroid weight).
 */
inline TriangleQuadrature triangle_quadrature(int degree) {
    TriangleQuadrature q;
    auto orbit1 = [&q](double w) { q.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}); q.weights.push_back(w); };
    auto orbit3 = [&q](double a, double w) {
        const double b = 1.0 - 2.0 * a;
        q.points.push_back({b, a, a});
        q.points.push_back({a, b, a});
        q.points.push_back({a, a, b});
        for (int i = 0; i < 3; ++i) q.weights.push_back(w);
    };
    switch (degree) {
    case 1:
        q.exactness_degree = 1;
        orbit1(0.5);
        break;
    case 2:
        q.exactness_degree = 2;
        orbit3(1.0 / 6.0, 1.0 / 6.0);
        break;
    case 3:
    case 4:
        q.exactness_degree = 4;
        orbit3(0.44594849091596488, 0.22338158967801146 / 2.0);
        orbit3(0.09157621350977074, 0.10995174365532187 / 2.0);
        break;
    case 5: {
        q.exactness_degree = 5;
        const double s = std::sqrt(15.0);
        orbit1(9.0 / 80.0);
        orbit3((6.0 + s) / 21.0, (155.0 + s) / 2400.0);
        orbit3((6.0 - s) / 21.0, (155.0 - s) / 2400.0);
        break;
    }
    default:
        throw std::invalid_argument("triangle_quadrature: supported degrees are 1..5");
    }
    return q;
}

/// Gauss-Legendre points/weights on [0,1]; weights sum to 1. Endpoints excluded.
struct EdgeQuadrature {
    std::vector<double> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }
};

inline EdgeQuadrature edge_quadrature() {
    // 5-point Gauss-Legendre, exact through degree 9.
    const double r = std::sqrt(10.0 / 7.0);
    const double x[5] = {-std::sqrt(5.0 + 2.0 * r) / 3.0, -std::sqrt(5.0 - 2.0 * r) / 3.0, 0.0,
                         std::sqrt(5.0 - 2.0 * r) / 3.0, std::sqrt(5.0 + 2.0 * r) / 3.0};
    const double s = std::sqrt(70.0);
    const double w[5] = {(322.0 - 13.0 * s) / 900.0, (322.0 + 13.0 * s) / 900.0, 128.0 / 225.0,
                         (322.0 + 13.0 * s) / 900.0, (322.0 - 13.0 * s) / 900.0};
    EdgeQuadrature q;
    for (int i = 0; i < 5; ++i) {
        q.points.push_back(0.5 * (1.0 + x[i]));
        q.weights.push_back(0.5 * w[i]);
    }
    return q;
}

/// Physical point of a barycentric triple on the triangle (a,b,c).
inline Vec2 barycentric_point(const Vec2& a, const Vec2& b, const Vec2& c,
                              const std::array<double, 3>& lambda) {
    return a * lambda[0] + b * lambda[1] + c * lambda[2];
}

} // namespace stokesfem
