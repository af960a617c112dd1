#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "stokesfem/quadrature.hpp"

using namespace stokesfem;
using test_support::barycentric_moment;

TEST(TriangleQuadrature, WeightsArePositiveAndSumToHalf) {
    for (int degree = 1; degree <= 5; ++degree) {
        const TriangleQuadrature q = triangle_quadrature(degree);
        double sum = 0.0;
        for (double w : q.weights) {
            EXPECT_GT(w, 0.0);
            sum += w;
        }
        EXPECT_NEAR(sum, 0.5, 1e-14);
    }
}

TEST(TriangleQuadrature, DegreeOneIsSingleCentroidPoint) {
    const TriangleQuadrature q = triangle_quadrature(1);
    ASSERT_EQ(q.size(), 1u);
    EXPECT_NEAR(q.points[0][0], 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(q.weights[0], 0.5, 1e-15);
}

TEST(TriangleQuadrature, MatchesBarycentricMoments) {
    for (int degree = 1; degree <= 5; ++degree) {
        const TriangleQuadrature q = triangle_quadrature(degree);
        for (int p = 0; p <= q.exactness_degree; ++p) {
            for (int r = 0; p + r <= q.exactness_degree; ++r) {
                const int s = q.exactness_degree - p - r;
                double integral = 0.0;
                for (std::size_t k = 0; k < q.size(); ++k)
                    integral += q.weights[k] * std::pow(q.points[k][0], p) *
                                std::pow(q.points[k][1], r) * std::pow(q.points[k][2], s);
                EXPECT_NEAR(integral, barycentric_moment(p, r, s), 1e-14)
                    << "degree " << degree << " moment (" << p << "," << r << "," << s << ")";
            }
        }
    }
}

TEST(TriangleQuadrature, DegreeTwoIntegratesLambdaProduct) {
    const TriangleQuadrature q = triangle_quadrature(2);
    double integral = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k)
        integral += q.weights[k] * q.points[k][0] * q.points[k][1];
    EXPECT_NEAR(integral, 1.0 / 24.0, 1e-15);
}

TEST(TriangleQuadrature, RejectsUnsupportedDegree) {
    EXPECT_THROW(triangle_quadrature(0), std::invalid_argument);
    EXPECT_THROW(triangle_quadrature(6), std::invalid_argument);
}

TEST(EdgeQuadrature, IntegratesPolynomialsOnUnitInterval) {
    const EdgeQuadrature q = edge_quadrature();
    for (int p = 0; p <= 9; ++p) {
        double integral = 0.0;
        for (std::size_t k = 0; k < q.size(); ++k)
            integral += q.weights[k] * std::pow(q.points[k], p);
        EXPECT_NEAR(integral, 1.0 / (p + 1), 1e-14) << "monomial degree " << p;
    }
}

TEST(EdgeQuadrature, PointsInteriorAndSymmetric) {
    const EdgeQuadrature q = edge_quadrature();
    for (std::size_t k = 0; k < q.size(); ++k) {
        EXPECT_GT(q.points[k], 0.0);
        EXPECT_LT(q.points[k], 1.0);
        EXPECT_NEAR(q.points[k] + q.points[q.size() - 1 - k], 1.0, 1e-15);
    }
}
