#pragma once

#include <array>
#include <random>

#include "stokesfem/geometry.hpp"
#include "stokesfem/mesh.hpp"

namespace test_support {

/// Exact integral of lambda1^p lambda2^q lambda3^r over a triangle of area A:
/// 2A p! q! r! / (p+q+r+2)!.
inline double barycentric_moment(int p, int q, int r, double area = 0.5) {
    auto fact = [](int k) {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return f;
    };
    return 2.0 * area * fact(p) * fact(q) * fact(r) / fact(p + q + r + 2);
}

inline std::mt19937& rng() {
    static std::mt19937 gen(20240817u);
    return gen;
}

inline double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(rng());
}

inline stokesfem::Vec2 random_interior_point() {
    return {uniform(0.05, 0.95), uniform(0.05, 0.95)};
}

} // namespace test_support
